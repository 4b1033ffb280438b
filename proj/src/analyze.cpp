#include "minins/analyze.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

#include "minins/errors.hpp"

namespace minins {

namespace {

[[noreturn]] void malformed(std::size_t line_no, const std::string& why) {
  throw ParseError(line_no, why, ExitCode::kData);
}

template <typename T>
T parse_uint(std::string_view field, std::size_t line_no, const char* what) {
  T value{};
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty()) {
    malformed(line_no, std::string("bad ") + what + " '" + std::string(field) + "'");
  }
  return value;
}

Address parse_address(std::string_view field, std::size_t line_no) {
  auto dot = field.find('.');
  if (dot == std::string_view::npos) malformed(line_no, "bad address '" + std::string(field) + "'");
  return Address{parse_uint<NodeId>(field.substr(0, dot), line_no, "address node"),
                 parse_uint<std::uint32_t>(field.substr(dot + 1), line_no, "address port")};
}

}  // namespace

TraceRecord parse_line(std::string_view text, std::size_t line_no) {
  if (!text.empty() && text.back() == '\n') text.remove_suffix(1);
  if (!text.empty() && text.back() == '\r') text.remove_suffix(1);

  std::string_view fields[12];
  std::size_t count = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    while (pos < text.size() && (text[pos] == ' ' || text[pos] == '\t')) ++pos;
    if (pos == text.size()) break;
    std::size_t end = pos;
    while (end < text.size() && text[end] != ' ' && text[end] != '\t') ++end;
    if (count == 12) malformed(line_no, "expected 12 fields, found more");
    fields[count++] = text.substr(pos, end - pos);
    pos = end;
  }
  if (count != 12) malformed(line_no, "expected 12 fields, found " + std::to_string(count));

  TraceRecord rec;
  if (fields[0].size() != 1) malformed(line_no, "bad event '" + std::string(fields[0]) + "'");
  switch (fields[0][0]) {
    case '+': rec.op = TraceOp::kEnqueue; break;
    case '-': rec.op = TraceOp::kDequeue; break;
    case 'r': rec.op = TraceOp::kReceive; break;
    case 'd': rec.op = TraceOp::kDrop; break;
    default: malformed(line_no, "bad event '" + std::string(fields[0]) + "'");
  }
  try {
    rec.time = parse_decimal_time(fields[1], 1'000'000'000);
  } catch (const std::invalid_argument& e) {
    malformed(line_no, e.what());
  }
  rec.from = parse_uint<NodeId>(fields[2], line_no, "from node");
  rec.to = parse_uint<NodeId>(fields[3], line_no, "to node");
  rec.ptype = std::string(fields[4]);
  rec.size = parse_uint<std::uint32_t>(fields[5], line_no, "size");
  if (rec.size == 0) malformed(line_no, "packet size must be at least 1 byte");
  if (fields[6].size() != 7) malformed(line_no, "flags field must have 7 characters");
  rec.flags = std::string(fields[6]);
  rec.fid = parse_uint<FlowId>(fields[7], line_no, "flow id");
  rec.src = parse_address(fields[8], line_no);
  rec.dst = parse_address(fields[9], line_no);
  rec.seq = parse_uint<std::uint64_t>(fields[10], line_no, "sequence number");
  rec.uid = parse_uint<std::uint64_t>(fields[11], line_no, "uid");
  return rec;
}

void LineAssembler::feed(std::string_view chunk) {
  while (!chunk.empty()) {
    auto nl = chunk.find('\n');
    if (nl == std::string_view::npos) {
      partial_.append(chunk);
      return;
    }
    ++line_no_;
    if (partial_.empty()) {
      sink_(chunk.substr(0, nl), line_no_);
    } else {
      partial_.append(chunk.substr(0, nl));
      sink_(partial_, line_no_);
      partial_.clear();
    }
    chunk.remove_prefix(nl + 1);
  }
}

void LineAssembler::finish() {
  if (partial_.empty()) return;
  ++line_no_;
  sink_(partial_, line_no_);
  partial_.clear();
}

void for_each_record(std::istream& in, const std::function<void(const TraceRecord&, std::size_t)>& fn) {
  LineAssembler lines([&](std::string_view line, std::size_t line_no) {
    if (line.empty() || line == "\r") return;
    fn(parse_line(line, line_no), line_no);
  });
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    std::streamsize got = in.gcount();
    if (got <= 0) break;
    lines.feed(std::string_view(buf, static_cast<std::size_t>(got)));
  }
  if (in.bad()) throw IoError("failed reading trace");
  lines.finish();
}

double utilization(std::uint64_t bytes, double duration_s, double bandwidth_bps) {
  if (!(duration_s > 0)) throw std::invalid_argument("utilization needs a positive duration");
  if (!(bandwidth_bps > 0)) throw std::invalid_argument("utilization needs a positive bandwidth");
  return static_cast<double>(bytes) * 8. / (bandwidth_bps * duration_s) * 100.;
}

void FlowStatsAccumulator::add(const TraceRecord& rec) {
  if (rec.fid != query_.fid) return;
  NodeId source = query_.source.value_or(rec.src.node);
  NodeId sink = query_.sink.value_or(rec.dst.node);
  switch (rec.op) {
    case TraceOp::kEnqueue:
      if (in_flight_.contains(rec.uid) || foreign_.contains(rec.uid)) break;
      if (rec.from == source) {
        in_flight_.emplace(rec.uid, rec.time);
        ++stats_.sent;
      } else {
        foreign_.insert(rec.uid);
      }
      break;
    case TraceOp::kDequeue:
      break;
    case TraceOp::kDrop:
      ++stats_.dropped;
      in_flight_.erase(rec.uid);
      foreign_.erase(rec.uid);
      break;
    case TraceOp::kReceive: {
      if (rec.to != sink) break;
      ++stats_.received;
      stats_.bytes_received += rec.size;
      foreign_.erase(rec.uid);
      auto it = in_flight_.find(rec.uid);
      if (it == in_flight_.end()) break;
      SimTime delay = rec.time - it->second;
      in_flight_.erase(it);
      delay_sum_ns_ += static_cast<long double>(delay.nanos());
      if (!stats_.min_delay || delay < *stats_.min_delay) stats_.min_delay = delay;
      if (!stats_.max_delay || delay > *stats_.max_delay) stats_.max_delay = delay;
      ++timed_;
      break;
    }
  }
}

FlowStats FlowStatsAccumulator::result() const {
  FlowStats out = stats_;
  if (timed_ > 0) out.mean_delay_s = static_cast<double>(delay_sum_ns_ / static_cast<long double>(timed_) / 1e9L);
  return out;
}

FlowStats flow_stats(std::istream& trace, const FlowQuery& query) {
  FlowStatsAccumulator acc(query);
  for_each_record(trace, [&](const TraceRecord& rec, std::size_t) { acc.add(rec); });
  return acc.result();
}

void ConservationChecker::fail(const TraceRecord& rec, std::size_t line_no, std::string message) {
  violations_.push_back(Violation{line_no, rec.uid, std::move(message)});
  poisoned_.insert(rec.uid);
  live_.erase(rec.uid);
}

void ConservationChecker::add(const TraceRecord& rec, std::size_t line_no) {
  bool out_of_order = last_time_ && rec.time < *last_time_;
  if (!last_time_ || rec.time > *last_time_) last_time_ = rec.time;
  if (poisoned_.contains(rec.uid)) return;
  if (out_of_order) return fail(rec, line_no, "timestamp goes backwards");

  UidState& state = live_[rec.uid];
  LinkKey key{rec.from, rec.to};
  auto link = std::find_if(state.links.begin(), state.links.end(), [&](const auto& entry) { return entry.first == key; });
  bool known = link != state.links.end();

  switch (rec.op) {
    case TraceOp::kEnqueue: {
      if (known) return fail(rec, line_no, "enqueued twice on the same link");
      bool at_source = rec.from == rec.src.node;
      bool arrived = std::find(state.reached.begin(), state.reached.end(), rec.from) != state.reached.end();
      if (!at_source && !arrived) return fail(rec, line_no, "enqueued at a node it never reached");
      state.links.emplace_back(key, Phase::kQueued);
      break;
    }
    case TraceOp::kDequeue:
      if (!known || link->second != Phase::kQueued) return fail(rec, line_no, "dequeued without being queued");
      link->second = Phase::kSent;
      break;
    case TraceOp::kDrop:
      if (!known || link->second != Phase::kQueued) return fail(rec, line_no, "dropped without being queued");
      live_.erase(rec.uid);
      return;
    case TraceOp::kReceive:
      if (!known || link->second != Phase::kSent) {
        return fail(rec, line_no, "received without a dequeue on the link");
      }
      link->second = Phase::kDone;
      state.reached.push_back(rec.to);
      if (rec.to == rec.dst.node) {
        live_.erase(rec.uid);
        return;
      }
      break;
  }
}

std::vector<Violation> conservation_check(std::istream& trace) {
  ConservationChecker checker;
  for_each_record(trace, [&](const TraceRecord& rec, std::size_t line_no) { checker.add(rec, line_no); });
  return checker.violations();
}

ThroughputAccumulator::ThroughputAccumulator(FlowId fid, std::optional<NodeId> sink, SimTime bin) : fid_(fid), sink_(sink), bin_(bin) {
  if (bin_ <= SimTime{}) throw std::invalid_argument("throughput bin must be positive");
}

void ThroughputAccumulator::add(const TraceRecord& rec) {
  if (rec.op != TraceOp::kReceive || rec.fid != fid_ || rec.to != sink_.value_or(rec.dst.node)) return;
  bytes_per_bin_[rec.time.nanos() / bin_.nanos()] += rec.size;
}

std::vector<ThroughputBin> ThroughputAccumulator::result() const {
  std::vector<ThroughputBin> out;
  if (bytes_per_bin_.empty()) return out;
  std::int64_t last = bytes_per_bin_.rbegin()->first;
  double width = bin_.to_seconds();
  out.reserve(static_cast<std::size_t>(last + 1));
  for (std::int64_t i = 0; i <= last; ++i) {
    auto it = bytes_per_bin_.find(i);
    std::uint64_t bytes = it == bytes_per_bin_.end() ? 0 : it->second;
    out.push_back(ThroughputBin{bin_ * i, static_cast<double>(bytes) * 8.0 / width});
  }
  return out;
}

std::vector<ThroughputBin> throughput_series(std::istream& trace, FlowId fid, std::optional<NodeId> sink, SimTime bin) {
  ThroughputAccumulator acc(fid, sink, bin);
  for_each_record(trace, [&](const TraceRecord& rec, std::size_t) { acc.add(rec); });
  return acc.result();
}

}  // namespace minins
