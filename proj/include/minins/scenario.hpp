#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "minins/packet.hpp"
#include "minins/qdisc.hpp"
#include "minins/sim_time.hpp"

namespace minins {

struct LinkSpec {
  std::string a;
  std::string b;
  std::uint64_t bandwidth_bps = 0;
  SimTime delay;
  QdiscConfig queue;
  bool operator==(const LinkSpec&) const = default;
};

struct AgentSpec {
  std::string name;
  std::string src;
  std::string sink;
  FlowId fid = 0;
  std::optional<std::string> color;  // accepted, unused
  bool operator==(const AgentSpec&) const = default;
};

struct CbrSpec {
  std::string agent;
  std::uint32_t size = 0;
  SimTime interval;
  SimTime start;
  SimTime stop;
  bool operator==(const CbrSpec&) const = default;
};

struct ExpSpec {
  std::string agent;
  std::uint32_t size = 0;
  SimTime burst;
  SimTime idle;
  std::uint64_t rate_bps = 0;
  SimTime start;
  SimTime stop;
  bool operator==(const ExpSpec&) const = default;
};

using GeneratorSpec = std::variant<CbrSpec, ExpSpec>;

/// Declarative description of one simulation run.
struct ScenarioSpec {
  SimTime duration;
  std::uint64_t seed = 1;
  std::vector<std::string> nodes;  // index = NodeId
  std::vector<LinkSpec> links;
  std::vector<AgentSpec> agents;
  std::vector<GeneratorSpec> generators;
  std::optional<std::string> trace_file;

  bool operator==(const ScenarioSpec&) const = default;

  // NodeId of a declared node name; throws std::out_of_range.
  NodeId node_index(std::string_view name) const;
};

/// Parses the line-oriented scenario format:
///
///   sim duration=<time> seed=<u64>
///   node <name>
///   duplex-link <a> <b> bw=<bits> delay=<time> queue=droptail|sfq [limit=<n>] [buckets=<n>]
///   udp <name> src=<node> sink=<node> fid=<n> [color=<word>]
///   cbr agent=<udp> size=<bytes> interval=<time> start=<time> stop=<time>
///   exp agent=<udp> size=<bytes> burst=<time> idle=<time> rate=<bits> start=<time> stop=<time>
///   trace file=<path>
///
/// `#` starts a comment. Names must be declared before use. Throws ParseError
/// (exit code kUsage) with the offending line.
ScenarioSpec parse_scenario(std::string_view text);

// Canonical text form; parse_scenario(render_scenario(s)) == s.
std::string render_scenario(const ScenarioSpec& spec);

// "<int>Mb|kb|b" in bits/s. Throws std::invalid_argument.
std::uint64_t parse_bandwidth(std::string_view text);

std::string format_bandwidth(std::uint64_t bps);
std::string format_time_with_unit(SimTime t);

}  // namespace minins
