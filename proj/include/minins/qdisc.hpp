#pragma once

#include <cstddef>
#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <vector>

#include "minins/packet.hpp"

namespace minins {

enum class QdiscKind { kDropTail, kSfq };

struct QdiscConfig {
  static constexpr std::size_t kDropTailDefaultLimit = 50;
  static constexpr std::size_t kSfqDefaultLimit = 40;
  static constexpr std::size_t kSfqDefaultBuckets = 16;

  QdiscKind kind = QdiscKind::kDropTail;
  std::size_t limit = kDropTailDefaultLimit;
  std::size_t buckets = kSfqDefaultBuckets;

  static QdiscConfig drop_tail(std::size_t limit = kDropTailDefaultLimit) {
    return {QdiscKind::kDropTail, limit, kSfqDefaultBuckets};
  }
  static QdiscConfig sfq(std::size_t limit = kSfqDefaultLimit, std::size_t buckets = kSfqDefaultBuckets) {
    return {QdiscKind::kSfq, limit, buckets};
  }

  bool operator==(const QdiscConfig&) const = default;
};

/// Outcome of offering a packet to a queue. `victim` is set when the queue
/// overflowed; it may be the arriving packet or (SFQ) a resident one.
struct EnqueueResult {
  std::optional<Packet> victim;
  bool accepted() const { return !victim.has_value(); }
};

class QueueDiscipline {
 public:
  virtual ~QueueDiscipline() = default;

  virtual EnqueueResult enqueue(Packet pkt) = 0;
  virtual std::optional<Packet> dequeue() = 0;
  virtual std::size_t held() const = 0;
  virtual std::size_t limit() const = 0;
};

/// Bounded FIFO that discards the arriving packet when full.
class DropTailQueue final : public QueueDiscipline {
 public:
  explicit DropTailQueue(std::size_t limit);

  EnqueueResult enqueue(Packet pkt) override;
  std::optional<Packet> dequeue() override;
  std::size_t held() const override { return fifo_.size(); }
  std::size_t limit() const override { return limit_; }

 private:
  std::size_t limit_;
  std::deque<Packet> fifo_;
};

// splitmix64 output finalizer; a pure 64-bit mixing function.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Bucket index for a flow under SFQ: mix64(fid) mod buckets.
std::size_t sfq_bucket(FlowId fid, std::size_t buckets);

/// Stochastic fair queueing counted in packets.
///
/// Flows hash into buckets by fid. Buckets are served round-robin, one packet
/// per visit. On overflow the tail of the longest bucket is dropped, ties going
/// to the lowest bucket index. The hash is never perturbed.
class SfqQueue final : public QueueDiscipline {
 public:
  SfqQueue(std::size_t limit, std::size_t buckets);

  EnqueueResult enqueue(Packet pkt) override;
  std::optional<Packet> dequeue() override;
  std::size_t held() const override { return held_; }
  std::size_t limit() const override { return limit_; }

  std::size_t bucket_size(std::size_t bucket) const { return buckets_.at(bucket).size(); }

 private:
  std::size_t limit_;
  std::vector<std::deque<Packet>> buckets_;
  std::size_t held_ = 0;
  // Next bucket to examine when serving.
  std::size_t cursor_ = 0;
};

// Throws std::invalid_argument for limit == 0 or buckets == 0.
std::unique_ptr<QueueDiscipline> make_qdisc(const QdiscConfig& config);

}  // namespace minins
