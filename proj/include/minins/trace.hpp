#pragma once

#include <cstdint>
#include <fstream>
#include <memory>
#include <ostream>
#include <string>

#include "minins/network.hpp"
#include "minins/packet.hpp"
#include "minins/sim_time.hpp"

namespace minins {

/// One line of the packet trace, in the classic 12-field layout:
///
///   op time from to ptype size flags fid src dst seq uid
///
/// `from`/`to` name the link. For `+`, `-` and `d` the event happens at the
/// queueing node `from`; for `r` the packet has arrived at `to`.
struct TraceRecord {
  static constexpr const char* kNoFlags = "-------";

  TraceOp op = TraceOp::kEnqueue;
  SimTime time;
  NodeId from = 0;
  NodeId to = 0;
  std::string ptype;
  std::uint32_t size = 0;
  std::string flags = kNoFlags;
  FlowId fid = 0;
  Address src;
  Address dst;
  std::uint64_t seq = 0;
  std::uint64_t uid = 0;

  bool operator==(const TraceRecord&) const = default;
};

TraceRecord make_record(TraceOp op, SimTime time, NodeId from, NodeId to, const Packet& pkt);

// Newline-terminated, locale independent.
std::string format_line(const TraceRecord& rec);

/// FNV-1a over the bytes of a trace, used for golden comparisons.
class TraceDigest {
 public:
  void update(std::string_view bytes) {
    for (unsigned char c : bytes) {
      hash_ ^= c;
      hash_ *= 0x100000001b3ULL;
    }
  }
  std::uint64_t value() const { return hash_; }
  std::string hex() const;

 private:
  std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

/// Formats every packet event into an optional output stream, keeping a
/// running digest and line count.
class TraceWriter final : public PacketObserver {
 public:
  // Digest only; nothing written.
  TraceWriter() = default;
  explicit TraceWriter(std::ostream& out) : out_(&out) {}
  // Opens (truncates) `path`. Throws IoError.
  static std::unique_ptr<TraceWriter> open_file(const std::string& path);

  void on_packet_event(TraceOp op, SimTime time, NodeId from, NodeId to, const Packet& pkt) override;
  void record(const TraceRecord& rec);

  // Flushes and closes an owned file. Idempotent. Throws IoError.
  void close_flush();

  std::uint64_t lines() const { return lines_; }
  const TraceDigest& digest() const { return digest_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* out_ = nullptr;
  std::string path_;
  TraceDigest digest_;
  std::uint64_t lines_ = 0;
  bool closed_ = false;
};

}  // namespace minins
