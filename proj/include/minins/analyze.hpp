#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "minins/trace.hpp"

namespace minins {

// Strict 12-field parse. Throws ParseError (exit code kData) naming `line_no`.
TraceRecord parse_line(std::string_view text, std::size_t line_no);

/// Splits an arbitrarily chunked byte stream into lines. The callback sees the
/// same lines whatever the chunk boundaries are.
class LineAssembler {
 public:
  using Sink = std::function<void(std::string_view line, std::size_t line_no)>;

  explicit LineAssembler(Sink sink) : sink_(std::move(sink)) {}
  void feed(std::string_view chunk);
  // Emits a trailing unterminated line, if any.
  void finish();

 private:
  Sink sink_;
  std::string partial_;
  std::size_t line_no_ = 0;
};

// Parses every record of a trace stream in order.
void for_each_record(std::istream& in, const std::function<void(const TraceRecord&, std::size_t)>& fn);

// bytes * 8 / (bandwidth * duration) * 100, evaluated in that order.
// Throws std::invalid_argument for non-positive duration or bandwidth.
double utilization(std::uint64_t bytes, double duration_s, double bandwidth_bps);

struct FlowStats {
  FlowId fid = 0;
  std::uint64_t sent = 0;
  std::uint64_t received = 0;
  std::uint64_t dropped = 0;
  std::uint64_t bytes_received = 0;
  // Absent when nothing was received.
  std::optional<double> mean_delay_s;
  std::optional<SimTime> min_delay;
  std::optional<SimTime> max_delay;
};

struct FlowQuery {
  FlowId fid = 0;
  // Default to each packet's own source and destination address nodes.
  std::optional<NodeId> source;
  std::optional<NodeId> sink;
};

/// Single-pass per-flow statistics. A packet is "sent" at its first `+` at
/// the source node; its delay runs from there to its `r` at the sink node.
/// Per-uid state is retired on that `r` or on a drop.
class FlowStatsAccumulator {
 public:
  explicit FlowStatsAccumulator(FlowQuery query) : query_(query) { stats_.fid = query.fid; }
  void add(const TraceRecord& rec);
  FlowStats result() const;

 private:
  FlowQuery query_;
  FlowStats stats_;
  std::unordered_map<std::uint64_t, SimTime> in_flight_;  // uid -> first enqueue
  std::unordered_set<std::uint64_t> foreign_;             // first `+` was not at the source
  long double delay_sum_ns_ = 0;
  std::uint64_t timed_ = 0;
};

FlowStats flow_stats(std::istream& trace, const FlowQuery& query);

struct Violation {
  std::size_t line = 0;
  std::uint64_t uid = 0;
  std::string message;
};

/// Checks each uid's lifecycle: per link `+` then `-` or `d`, `r` only after
/// the link's `-`, enqueue away from the source only after arriving there,
/// timestamps non-decreasing. A uid is retired on its drop or on reaching its
/// destination, so later events for it surface as orphans. Reports the first
/// problem per uid.
class ConservationChecker {
 public:
  void add(const TraceRecord& rec, std::size_t line_no);
  const std::vector<Violation>& violations() const { return violations_; }

 private:
  enum class Phase { kQueued, kSent, kDone };
  struct LinkKey {
    NodeId from;
    NodeId to;
    bool operator==(const LinkKey&) const = default;
  };
  struct UidState {
    std::vector<std::pair<LinkKey, Phase>> links;
    std::vector<NodeId> reached;
  };

  void fail(const TraceRecord& rec, std::size_t line_no, std::string message);

  std::unordered_map<std::uint64_t, UidState> live_;
  std::unordered_set<std::uint64_t> poisoned_;
  std::vector<Violation> violations_;
  std::optional<SimTime> last_time_;
};

std::vector<Violation> conservation_check(std::istream& trace);

struct ThroughputBin {
  SimTime start;
  double bits_per_second = 0;
};

/// Bytes received at `sink` for `fid`, per fixed-width bin, as bits/s. Bins run
/// from time 0 through the last bin holding a delivery. Without a sink, each
/// packet counts at its destination address node.
class ThroughputAccumulator {
 public:
  ThroughputAccumulator(FlowId fid, std::optional<NodeId> sink, SimTime bin);
  void add(const TraceRecord& rec);
  std::vector<ThroughputBin> result() const;

 private:
  FlowId fid_;
  std::optional<NodeId> sink_;
  SimTime bin_;
  std::map<std::int64_t, std::uint64_t> bytes_per_bin_;
};

std::vector<ThroughputBin> throughput_series(std::istream& trace, FlowId fid, std::optional<NodeId> sink, SimTime bin);

}  // namespace minins
