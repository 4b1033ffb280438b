#include "minins/validate.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <future>
#include <sstream>

#include "minins/errors.hpp"
#include "minins/scenario.hpp"

namespace minins {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

double to_number(const std::string& text, std::size_t line) {
  char* end = nullptr;
  double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size()) {
    throw ParseError(line, "expected a number, got '" + text + "'", ExitCode::kData);
  }
  return v;
}

}  // namespace

std::vector<Expectation> parse_expectations(std::string_view text) {
  std::vector<Expectation> out;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    std::string_view view = raw;
    if (auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
    view = trim(view);
    if (view.empty()) continue;
    auto eq = view.find('=');
    if (eq == std::string_view::npos || eq == 0) throw ParseError(line, "expected key=value", ExitCode::kData);
    Expectation e;
    e.key = std::string(trim(view.substr(0, eq)));
    std::string_view value = trim(view.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '[' && value.back() == ']') {
      auto comma = value.find(',');
      if (comma == std::string_view::npos) throw ParseError(line, "band needs [lo,hi]", ExitCode::kData);
      e.lo = to_number(std::string(trim(value.substr(1, comma - 1))), line);
      e.hi = to_number(std::string(trim(value.substr(comma + 1, value.size() - comma - 2))), line);
    } else {
      e.exact = std::string(value);
    }
    out.push_back(std::move(e));
  }
  return out;
}

ScenarioVerdict check_result(const std::string& name, const RunResult& result,
                             const std::vector<Expectation>& expectations) {
  ScenarioVerdict verdict;
  verdict.name = name;
  auto fields = result_fields(result);
  for (const auto& e : expectations) {
    auto it = fields.find(e.key);
    if (it == fields.end()) {
      verdict.mismatches.push_back(e.key + ": not produced by the run");
      continue;
    }
    if (e.exact) {
      if (it->second != *e.exact) verdict.mismatches.push_back(e.key + ": got " + it->second + ", want " + *e.exact);
      continue;
    }
    double v = std::strtod(it->second.c_str(), nullptr);
    if (v < e.lo || v > e.hi) {
      verdict.mismatches.push_back(e.key + ": got " + it->second + ", want [" + format_double(e.lo) + "," +
                                   format_double(e.hi) + "]");
    }
  }
  verdict.pass = verdict.mismatches.empty();
  return verdict;
}

ScenarioVerdict validate_scenario(const std::string& name, std::string_view scenario_text,
                                  std::string_view expected_text) {
  try {
    auto expectations = parse_expectations(expected_text);
    ScenarioSpec spec = parse_scenario(scenario_text);
    RunOptions options;
    options.write_trace_file = false;
    return check_result(name, run_scenario(spec, options), expectations);
  } catch (const std::exception& e) {
    return ScenarioVerdict{name, false, {e.what()}};
  }
}

std::vector<ScenarioVerdict> validate_directory(const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> scenarios;
  for (const auto& entry : std::filesystem::directory_iterator(dir)) {
    if (entry.path().extension() != ".scn") continue;
    auto expected = entry.path();
    expected.replace_extension(".expected");
    if (std::filesystem::exists(expected)) scenarios.push_back(entry.path());
  }
  std::sort(scenarios.begin(), scenarios.end());

  std::vector<std::future<ScenarioVerdict>> running;
  for (const auto& scn : scenarios) {
    running.push_back(std::async(std::launch::async, [scn] {
      auto expected = scn;
      expected.replace_extension(".expected");
      std::string name = scn.stem().string();
      try {
        return validate_scenario(name, read_file(scn), read_file(expected));
      } catch (const std::exception& e) {
        return ScenarioVerdict{name, false, {e.what()}};
      }
    }));
  }
  std::vector<ScenarioVerdict> verdicts;
  for (auto& f : running) verdicts.push_back(f.get());
  return verdicts;
}

std::filesystem::path default_golden_dir() {
  if (const char* env = std::getenv("MININS_GOLDEN_DIR")) return env;
  return MININS_GOLDEN_DIR;
}

}  // namespace minins
