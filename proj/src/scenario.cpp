#include "minins/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "minins/errors.hpp"

namespace minins {

namespace {

[[noreturn]] void fail(std::size_t line, const std::string& message) {
  throw ParseError(line, message, ExitCode::kUsage);
}

template <typename T>
bool parse_unsigned(std::string_view text, T& out) {
  if (text.empty()) return false;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), out);
  return ec == std::errc{} && ptr == text.data() + text.size();
}

/// One directive line split into positionals and key=value options.
class Directive {
 public:
  Directive(std::size_t line, std::string name) : line_(line), name_(std::move(name)) {}

  void add_token(std::string_view token) {
    auto eq = token.find('=');
    if (eq == std::string_view::npos) {
      positionals_.emplace_back(token);
      return;
    }
    std::string key(token.substr(0, eq));
    if (key.empty()) fail(line_, "option without a name in '" + std::string(token) + "'");
    if (!options_.emplace(key, std::string(token.substr(eq + 1))).second) {
      fail(line_, "option '" + key + "' given twice");
    }
  }

  void expect_positionals(std::size_t n) const {
    if (positionals_.size() != n) {
      fail(line_, "'" + name_ + "' takes " + std::to_string(n) + " name argument(s), got " +
                      std::to_string(positionals_.size()));
    }
  }

  void allow_only(std::initializer_list<std::string_view> keys) const {
    for (const auto& [key, value] : options_) {
      if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
        fail(line_, "unknown option '" + key + "' for '" + name_ + "'");
      }
    }
  }

  const std::string& positional(std::size_t i) const { return positionals_.at(i); }

  bool has(const std::string& key) const { return options_.contains(key); }

  const std::string& required(const std::string& key) const {
    auto it = options_.find(key);
    if (it == options_.end()) fail(line_, "'" + name_ + "' is missing " + key + "=");
    return it->second;
  }

  std::optional<std::string> optional(const std::string& key) const {
    auto it = options_.find(key);
    if (it == options_.end()) return std::nullopt;
    return it->second;
  }

  SimTime time(const std::string& key) const {
    const std::string& text = required(key);
    try {
      return parse_time_with_unit(text);
    } catch (const std::invalid_argument& e) {
      fail(line_, key + ": " + e.what());
    }
  }

  std::uint64_t bandwidth(const std::string& key) const {
    const std::string& text = required(key);
    try {
      return parse_bandwidth(text);
    } catch (const std::invalid_argument& e) {
      fail(line_, key + ": " + e.what());
    }
  }

  template <typename T>
  T number(const std::string& key, const std::string& text) const {
    T value{};
    if (!parse_unsigned(text, value)) fail(line_, key + ": expected an unsigned integer, got '" + text + "'");
    return value;
  }

  template <typename T>
  T number(const std::string& key) const {
    return number<T>(key, required(key));
  }

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
  std::string name_;
  std::vector<std::string> positionals_;
  std::map<std::string, std::string> options_;
};

std::vector<std::string_view> tokenize(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t pos = 0;
  while (pos < line.size()) {
    while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) ++pos;
    if (pos == line.size()) break;
    std::size_t end = pos;
    while (end < line.size() && line[end] != ' ' && line[end] != '\t' && line[end] != '\r') ++end;
    tokens.push_back(line.substr(pos, end - pos));
    pos = end;
  }
  return tokens;
}

}  // namespace

NodeId ScenarioSpec::node_index(std::string_view name) const {
  auto it = std::find(nodes.begin(), nodes.end(), name);
  if (it == nodes.end()) throw std::out_of_range("unknown node '" + std::string(name) + "'");
  return static_cast<NodeId>(it - nodes.begin());
}

std::uint64_t parse_bandwidth(std::string_view text) {
  struct Unit {
    std::string_view suffix;
    std::uint64_t scale;
  };
  static constexpr Unit kUnits[] = {{"Mb", 1'000'000}, {"kb", 1'000}, {"b", 1}};
  for (const auto& unit : kUnits) {
    if (!text.ends_with(unit.suffix)) continue;
    std::string_view digits = text.substr(0, text.size() - unit.suffix.size());
    std::uint64_t value = 0;
    if (!parse_unsigned(digits, value)) break;
    if (value > UINT64_MAX / unit.scale) throw std::invalid_argument("bandwidth overflows: '" + std::string(text) + "'");
    return value * unit.scale;
  }
  throw std::invalid_argument("expected <int>Mb|kb|b, got '" + std::string(text) + "'");
}

std::string format_bandwidth(std::uint64_t bps) {
  if (bps != 0 && bps % 1'000'000 == 0) return std::to_string(bps / 1'000'000) + "Mb";
  if (bps != 0 && bps % 1'000 == 0) return std::to_string(bps / 1'000) + "kb";
  return std::to_string(bps) + "b";
}

std::string format_time_with_unit(SimTime t) {
  std::int64_t ns = t.nanos();
  if (ns != 0 && ns % 1'000'000'000 == 0) return std::to_string(ns / 1'000'000'000) + "s";
  if (ns != 0 && ns % 1'000'000 == 0) return std::to_string(ns / 1'000'000) + "ms";
  if (ns != 0 && ns % 1'000 == 0) return std::to_string(ns / 1'000) + "us";
  return std::to_string(ns) + "ns";
}

ScenarioSpec parse_scenario(std::string_view text) {
  ScenarioSpec spec;
  bool have_sim = false;
  std::set<std::string> names;
  std::vector<std::size_t> generator_lines;

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size() || (start == 0 && text.empty())) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;

    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto tokens = tokenize(line);
    if (tokens.empty()) continue;

    Directive d(line_no, std::string(tokens.front()));
    for (std::size_t i = 1; i < tokens.size(); ++i) d.add_token(tokens[i]);
    const std::string_view kind = tokens.front();

    auto declare = [&](const std::string& name) {
      if (!names.insert(name).second) fail(line_no, "duplicate name '" + name + "'");
    };
    auto require_node = [&](const std::string& name) {
      if (std::find(spec.nodes.begin(), spec.nodes.end(), name) == spec.nodes.end()) {
        fail(line_no, "undeclared node '" + name + "'");
      }
    };
    auto require_agent = [&](const std::string& name) {
      auto found = std::find_if(spec.agents.begin(), spec.agents.end(), [&](const AgentSpec& a) { return a.name == name; });
      if (found == spec.agents.end()) fail(line_no, "undeclared udp agent '" + name + "'");
    };

    if (kind == "sim") {
      if (have_sim) fail(line_no, "second 'sim' directive");
      d.expect_positionals(0);
      d.allow_only({"duration", "seed"});
      spec.duration = d.time("duration");
      if (d.has("seed")) spec.seed = d.number<std::uint64_t>("seed");
      have_sim = true;
    } else if (kind == "node") {
      d.expect_positionals(1);
      d.allow_only({});
      declare(d.positional(0));
      spec.nodes.push_back(d.positional(0));
    } else if (kind == "duplex-link") {
      d.expect_positionals(2);
      d.allow_only({"bw", "delay", "queue", "limit", "buckets"});
      LinkSpec link;
      link.a = d.positional(0);
      link.b = d.positional(1);
      require_node(link.a);
      require_node(link.b);
      if (link.a == link.b) fail(line_no, "link from '" + link.a + "' to itself");
      for (const auto& other : spec.links) {
        if ((other.a == link.a && other.b == link.b) || (other.a == link.b && other.b == link.a)) {
          fail(line_no, "duplicate link " + link.a + "-" + link.b);
        }
      }
      link.bandwidth_bps = d.bandwidth("bw");
      if (link.bandwidth_bps == 0) fail(line_no, "bw must be positive");
      link.delay = d.time("delay");
      const std::string& queue = d.required("queue");
      if (queue == "droptail") {
        link.queue = QdiscConfig::drop_tail();
        if (d.has("buckets")) fail(line_no, "buckets= only applies to queue=sfq");
      } else if (queue == "sfq") {
        link.queue = QdiscConfig::sfq();
        if (d.has("buckets")) link.queue.buckets = d.number<std::size_t>("buckets");
        if (link.queue.buckets == 0) fail(line_no, "buckets must be at least 1");
      } else {
        fail(line_no, "unknown queue '" + queue + "' (expected droptail or sfq)");
      }
      if (d.has("limit")) link.queue.limit = d.number<std::size_t>("limit");
      if (link.queue.limit == 0) fail(line_no, "limit must be at least 1");
      spec.links.push_back(std::move(link));
    } else if (kind == "udp") {
      d.expect_positionals(1);
      d.allow_only({"src", "sink", "fid", "color"});
      AgentSpec agent;
      agent.name = d.positional(0);
      agent.src = d.required("src");
      agent.sink = d.required("sink");
      require_node(agent.src);
      require_node(agent.sink);
      agent.fid = d.number<FlowId>("fid");
      agent.color = d.optional("color");
      declare(agent.name);
      spec.agents.push_back(std::move(agent));
    } else if (kind == "cbr") {
      d.expect_positionals(0);
      d.allow_only({"agent", "size", "interval", "start", "stop"});
      CbrSpec cbr;
      cbr.agent = d.required("agent");
      require_agent(cbr.agent);
      cbr.size = d.number<std::uint32_t>("size");
      cbr.interval = d.time("interval");
      cbr.start = d.time("start");
      cbr.stop = d.time("stop");
      if (cbr.size == 0) fail(line_no, "size must be at least 1 byte");
      if (cbr.interval <= SimTime{}) fail(line_no, "interval must be positive");
      if (cbr.stop < cbr.start) fail(line_no, "stop precedes start");
      spec.generators.emplace_back(std::move(cbr));
      generator_lines.push_back(line_no);
    } else if (kind == "exp") {
      d.expect_positionals(0);
      d.allow_only({"agent", "size", "burst", "idle", "rate", "start", "stop"});
      ExpSpec exp;
      exp.agent = d.required("agent");
      require_agent(exp.agent);
      exp.size = d.number<std::uint32_t>("size");
      exp.burst = d.time("burst");
      exp.idle = d.time("idle");
      exp.rate_bps = d.bandwidth("rate");
      exp.start = d.time("start");
      exp.stop = d.time("stop");
      if (exp.size == 0) fail(line_no, "size must be at least 1 byte");
      if (exp.burst <= SimTime{} || exp.idle <= SimTime{}) fail(line_no, "burst and idle must be positive");
      if (exp.rate_bps == 0) fail(line_no, "rate must be positive");
      if (exp.stop < exp.start) fail(line_no, "stop precedes start");
      spec.generators.emplace_back(std::move(exp));
      generator_lines.push_back(line_no);
    } else if (kind == "trace") {
      d.expect_positionals(0);
      d.allow_only({"file"});
      if (spec.trace_file) fail(line_no, "second 'trace' directive");
      spec.trace_file = d.required("file");
      if (spec.trace_file->empty()) fail(line_no, "empty trace file path");
    } else {
      fail(line_no, "unknown directive '" + std::string(kind) + "'");
    }
    if (end == text.size()) break;
  }

  if (!have_sim) fail(std::max<std::size_t>(line_no, 1), "missing 'sim' directive");
  for (std::size_t i = 0; i < spec.generators.size(); ++i) {
    SimTime stop = std::visit([](const auto& g) { return g.stop; }, spec.generators[i]);
    if (stop > spec.duration) fail(generator_lines[i], "generator stops after the simulation ends");
  }
  return spec;
}

std::string render_scenario(const ScenarioSpec& spec) {
  std::ostringstream out;
  out << "sim duration=" << format_time_with_unit(spec.duration) << " seed=" << spec.seed << "\n";
  for (const auto& node : spec.nodes) out << "node " << node << "\n";
  for (const auto& link : spec.links) {
    out << "duplex-link " << link.a << " " << link.b << " bw=" << format_bandwidth(link.bandwidth_bps)
        << " delay=" << format_time_with_unit(link.delay);
    if (link.queue.kind == QdiscKind::kSfq) {
      out << " queue=sfq limit=" << link.queue.limit << " buckets=" << link.queue.buckets;
    } else {
      out << " queue=droptail limit=" << link.queue.limit;
    }
    out << "\n";
  }
  for (const auto& agent : spec.agents) {
    out << "udp " << agent.name << " src=" << agent.src << " sink=" << agent.sink << " fid=" << agent.fid;
    if (agent.color) out << " color=" << *agent.color;
    out << "\n";
  }
  for (const auto& generator : spec.generators) {
    if (const auto* cbr = std::get_if<CbrSpec>(&generator)) {
      out << "cbr agent=" << cbr->agent << " size=" << cbr->size << " interval=" << format_time_with_unit(cbr->interval)
          << " start=" << format_time_with_unit(cbr->start) << " stop=" << format_time_with_unit(cbr->stop) << "\n";
    } else {
      const auto& exp = std::get<ExpSpec>(generator);
      out << "exp agent=" << exp.agent << " size=" << exp.size << " burst=" << format_time_with_unit(exp.burst)
          << " idle=" << format_time_with_unit(exp.idle) << " rate=" << format_bandwidth(exp.rate_bps)
          << " start=" << format_time_with_unit(exp.start) << " stop=" << format_time_with_unit(exp.stop) << "\n";
    }
  }
  if (spec.trace_file) out << "trace file=" << *spec.trace_file << "\n";
  return out.str();
}

}  // namespace minins
