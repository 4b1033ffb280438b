#include "minins/qdisc.hpp"

#include <stdexcept>

namespace minins {

DropTailQueue::DropTailQueue(std::size_t limit) : limit_(limit) {
  if (limit_ == 0) throw std::invalid_argument("DropTail limit must be at least 1");
}

EnqueueResult DropTailQueue::enqueue(Packet pkt) {
  if (fifo_.size() >= limit_) return EnqueueResult{std::move(pkt)};
  fifo_.push_back(std::move(pkt));
  return {};
}

std::optional<Packet> DropTailQueue::dequeue() {
  if (fifo_.empty()) return std::nullopt;
  Packet head = std::move(fifo_.front());
  fifo_.pop_front();
  return head;
}

std::size_t sfq_bucket(FlowId fid, std::size_t buckets) {
  if (buckets == 0) throw std::invalid_argument("SFQ needs at least one bucket");
  return static_cast<std::size_t>(mix64(fid) % buckets);
}

SfqQueue::SfqQueue(std::size_t limit, std::size_t buckets) : limit_(limit) {
  if (limit_ == 0) throw std::invalid_argument("SFQ limit must be at least 1");
  if (buckets == 0) throw std::invalid_argument("SFQ needs at least one bucket");
  buckets_.resize(buckets);
}

EnqueueResult SfqQueue::enqueue(Packet pkt) {
  std::size_t home = sfq_bucket(pkt.fid, buckets_.size());
  buckets_[home].push_back(std::move(pkt));
  if (++held_ <= limit_) return {};

  std::size_t longest = 0;
  for (std::size_t b = 1; b < buckets_.size(); ++b) {
    if (buckets_[b].size() > buckets_[longest].size()) longest = b;
  }
  // When the arriving packet's bucket is the longest, its tail is the new
  // arrival itself.
  Packet victim = std::move(buckets_[longest].back());
  buckets_[longest].pop_back();
  --held_;
  return EnqueueResult{std::move(victim)};
}

std::optional<Packet> SfqQueue::dequeue() {
  if (held_ == 0) return std::nullopt;
  while (buckets_[cursor_].empty()) cursor_ = (cursor_ + 1) % buckets_.size();
  Packet head = std::move(buckets_[cursor_].front());
  buckets_[cursor_].pop_front();
  --held_;
  cursor_ = (cursor_ + 1) % buckets_.size();
  return head;
}

std::unique_ptr<QueueDiscipline> make_qdisc(const QdiscConfig& config) {
  switch (config.kind) {
    case QdiscKind::kDropTail:
      return std::make_unique<DropTailQueue>(config.limit);
    case QdiscKind::kSfq:
      return std::make_unique<SfqQueue>(config.limit, config.buckets);
  }
  throw std::invalid_argument("unknown queue discipline");
}

}  // namespace minins
