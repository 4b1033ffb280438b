#pragma once

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "minins/engine.hpp"
#include "minins/network.hpp"
#include "minins/scenario.hpp"
#include "minins/traffic.hpp"

namespace minins {

/// Owns one run: clock, topology, agents, generators. Not thread-safe, but
/// separate instances share nothing.
class Simulation {
 public:
  Simulation();
  Simulation(const Simulation&) = delete;
  Simulation& operator=(const Simulation&) = delete;

  Scheduler& scheduler() { return scheduler_; }
  Network& network() { return network_; }
  const Network& network() const { return network_; }

  NodeId add_node() { return network_.add_node(); }

  // Each agent or sink takes the next free port on its node, from 0.
  SinkMonitor& add_sink(NodeId node);
  UdpAgent& add_udp_agent(NodeId node, FlowId fid);
  void connect(UdpAgent& agent, const SinkMonitor& sink) { agent.connect(sink.address()); }

  CbrGenerator& attach_cbr(UdpAgent& agent, const CbrConfig& config);
  // Creates a UDP agent on `node` carrying `fid`, connects it to `sink` and
  // installs an on-off generator on it.
  ExpOnOffGenerator& attach_expoo_traffic(NodeId node, SinkMonitor& sink, const ExpOnOffConfig& config, FlowId fid,
                                          Rng rng);

  void set_observer(PacketObserver* observer) { network_.set_observer(observer); }

  // Freezes the topology; call after all links exist.
  void compute_routes() { network_.compute_routes(); }

  // Schedules the end of the run: at `at`, `on_finish` runs and the event loop
  // halts, so later events never dispatch.
  void finish_at(SimTime at, std::function<void()> on_finish = {});

  SimTime run(SimTime limit) { return scheduler_.run_until(limit); }

  std::uint64_t packets_emitted() const { return uids_.issued(); }

 private:
  std::uint32_t take_port(NodeId node);
  void deliver(NodeId node, const Packet& pkt);

  Scheduler scheduler_;
  Network network_;
  UidSource uids_;
  std::vector<std::uint32_t> next_port_;
  std::deque<SinkMonitor> sinks_;
  std::map<Address, SinkMonitor*> sink_by_address_;
  std::deque<UdpAgent> agents_;
  std::deque<CbrGenerator> cbrs_;
  std::deque<ExpOnOffGenerator> expoos_;
};

struct AgentReport {
  std::string name;
  FlowId fid = 0;
  NodeId src = 0;
  NodeId sink = 0;
  std::uint64_t sent = 0;
  MonitorReport monitor;
};

struct LinkReport {
  NodeId from = 0;
  NodeId to = 0;
  LinkCounters counters;
  std::size_t residual = 0;
};

/// Observable outcome of run_scenario.
struct RunResult {
  SimTime finished_at;
  // Summed over every sink.
  std::uint64_t packets = 0;
  std::uint64_t bytes = 0;
  // Node of the first agent's sink and bandwidth of the link entering it.
  NodeId sink_node = 0;
  std::uint64_t sink_link_bps = 0;
  double utilization_pct = 0;
  std::uint64_t drops = 0;
  std::uint64_t trace_lines = 0;
  std::string trace_digest;
  std::vector<AgentReport> agents;
  std::vector<LinkReport> links;
};

struct RunOptions {
  std::optional<std::uint64_t> seed;        // overrides the scenario seed
  std::optional<std::string> trace_path;    // overrides the scenario trace file
  std::ostream* trace_stream = nullptr;     // takes precedence over any file
  bool write_trace_file = true;             // false: digest only
};

// Builds the topology, schedules every generator and the finish event at the
// scenario duration, runs, and closes the trace. Generator i draws from
// Rng::substream(seed, i).
RunResult run_scenario(const ScenarioSpec& spec, const RunOptions& options = {});

// Human block followed by key=value lines.
std::string format_statistics(const RunResult& result);

// Flat key -> value view used by golden comparisons.
std::map<std::string, std::string> result_fields(const RunResult& result);

// Shortest decimal that round-trips the double.
std::string format_double(double value);

}  // namespace minins
