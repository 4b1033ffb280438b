// minins: run scenarios, analyze traces, validate the golden set.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>

#include "minins/analyze.hpp"
#include "minins/errors.hpp"
#include "minins/scenario.hpp"
#include "minins/simulation.hpp"
#include "minins/validate.hpp"

namespace {

using minins::ExitCode;

int code(ExitCode c) { return static_cast<int>(c); }

int cmd_run(const std::string& scenario_path, std::optional<std::uint64_t> seed, std::optional<std::string> trace) {
  std::ifstream in(scenario_path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read scenario '" << scenario_path << "'\n";
    return code(ExitCode::kUsage);
  }
  std::ostringstream text;
  text << in.rdbuf();
  minins::ScenarioSpec spec;
  try {
    spec = minins::parse_scenario(text.str());
  } catch (const minins::ParseError& e) {
    std::cerr << scenario_path << ":" << e.line() << ": " << e.message() << "\n";
    return code(ExitCode::kUsage);
  }

  minins::RunOptions options;
  options.seed = seed;
  options.trace_path = std::move(trace);
  minins::RunResult result = minins::run_scenario(spec, options);
  std::cout << minins::format_statistics(result);
  return code(ExitCode::kOk);
}

std::string seconds(minins::SimTime t) { return minins::format_seconds_short(t); }

void print_flow(std::ostream& out, const std::string& prefix, const minins::FlowStats& s) {
  out << prefix << "sent=" << s.sent << "\n"
      << prefix << "received=" << s.received << "\n"
      << prefix << "dropped=" << s.dropped << "\n"
      << prefix << "bytes_received=" << s.bytes_received << "\n";
  if (s.mean_delay_s) out << prefix << "mean_delay_s=" << minins::format_double(*s.mean_delay_s) << "\n";
  if (s.min_delay) out << prefix << "min_delay_s=" << seconds(*s.min_delay) << "\n";
  if (s.max_delay) out << prefix << "max_delay_s=" << seconds(*s.max_delay) << "\n";
}

struct AnalyzeFlags {
  std::optional<minins::FlowId> fid;
  std::optional<minins::NodeId> src;
  std::optional<minins::NodeId> sink;
  std::optional<std::string> bin;
  bool check = false;
};

int cmd_analyze(const std::string& path, const AnalyzeFlags& flags) {
  std::optional<minins::SimTime> bin;
  if (flags.bin) {
    try {
      bin = minins::parse_decimal_time(*flags.bin, 1'000'000'000);
    } catch (const std::invalid_argument& e) {
      std::cerr << "error: --bin: " << e.what() << "\n";
      return code(ExitCode::kUsage);
    }
    if (*bin <= minins::SimTime{}) {
      std::cerr << "error: --bin must be positive\n";
      return code(ExitCode::kUsage);
    }
    if (!flags.fid) {
      std::cerr << "error: --bin needs --fid\n";
      return code(ExitCode::kUsage);
    }
  }

  std::ifstream in(path, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read trace '" << path << "'\n";
    return code(ExitCode::kData);
  }

  std::map<minins::FlowId, minins::FlowStatsAccumulator> flows;
  if (flags.fid) flows.emplace(*flags.fid, minins::FlowQuery{*flags.fid, flags.src, flags.sink});
  std::optional<minins::ThroughputAccumulator> throughput;
  if (bin) throughput.emplace(*flags.fid, flags.sink, *bin);
  minins::ConservationChecker checker;
  std::uint64_t records = 0;

  try {
    minins::for_each_record(in, [&](const minins::TraceRecord& rec, std::size_t line_no) {
      ++records;
      if (!flags.fid && !flows.contains(rec.fid)) {
        flows.emplace(rec.fid, minins::FlowQuery{rec.fid, flags.src, flags.sink});
      }
      if (auto it = flows.find(rec.fid); it != flows.end()) it->second.add(rec);
      if (throughput) throughput->add(rec);
      if (flags.check) checker.add(rec, line_no);
    });
  } catch (const minins::ParseError& e) {
    std::cerr << path << ":" << e.line() << ": " << e.message() << "\n";
    return code(ExitCode::kData);
  }

  std::cout << "records=" << records << "\n";
  if (flags.fid) {
    std::cout << "fid=" << *flags.fid << "\n";
    print_flow(std::cout, "", flows.at(*flags.fid).result());
  } else {
    for (const auto& [fid, acc] : flows) print_flow(std::cout, "flow" + std::to_string(fid) + ".", acc.result());
  }
  if (throughput) {
    for (const auto& b : throughput->result()) {
      std::cout << "bin." << seconds(b.start) << "=" << minins::format_double(b.bits_per_second) << "\n";
    }
  }
  if (flags.check) {
    std::cout << "violations=" << checker.violations().size() << "\n";
    for (const auto& v : checker.violations()) {
      std::cout << "violation=line " << v.line << " uid " << v.uid << ": " << v.message << "\n";
    }
    if (!checker.violations().empty()) return code(ExitCode::kData);
  }
  return code(ExitCode::kOk);
}

int cmd_validate(const std::string& dir) {
  auto verdicts = minins::validate_directory(dir);
  if (verdicts.empty()) {
    std::cerr << "error: no golden scenarios in '" << dir << "'\n";
    return code(ExitCode::kUsage);
  }
  bool all = true;
  for (const auto& v : verdicts) {
    std::cout << (v.pass ? "PASS " : "FAIL ") << v.name << "\n";
    for (const auto& m : v.mismatches) std::cout << "  " << m << "\n";
    all = all && v.pass;
  }
  return all ? code(ExitCode::kOk) : code(ExitCode::kData);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"minins - deterministic packet-level network simulator"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run a scenario and print statistics");
  std::string scenario_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> trace_path;
  run->add_option("scenario", scenario_path, "Scenario file")->required();
  run->add_option("--seed", seed, "Override the scenario seed");
  run->add_option("--trace", trace_path, "Write the trace to PATH");

  auto* analyze = app.add_subcommand("analyze", "Compute statistics from a trace file");
  std::string trace_in;
  AnalyzeFlags flags;
  analyze->add_option("trace", trace_in, "Trace file")->required();
  analyze->add_option("--fid", flags.fid, "Flow id");
  analyze->add_option("--src", flags.src, "Source node (default: packet source address)");
  analyze->add_option("--sink", flags.sink, "Sink node (default: packet destination address)");
  analyze->add_option("--bin", flags.bin, "Throughput bin width in seconds");
  analyze->add_flag("--check", flags.check, "Check packet lifecycle conservation");

  auto* validate = app.add_subcommand("validate", "Run the golden scenarios");
  std::string golden_dir = minins::default_golden_dir().string();
  validate->add_option("--dir", golden_dir, "Golden scenario directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return code(ExitCode::kUsage);
  }

  try {
    if (run->parsed()) return cmd_run(scenario_path, seed, trace_path);
    if (analyze->parsed()) return cmd_analyze(trace_in, flags);
    if (validate->parsed()) return cmd_validate(golden_dir);
  } catch (const minins::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return code(e.exit_code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return code(ExitCode::kInternal);
  }
  return code(ExitCode::kUsage);
}
