#include "minins/network.hpp"

#include <limits>
#include <queue>
#include <string>

#include "minins/errors.hpp"

namespace minins {

namespace {
__extension__ typedef unsigned __int128 Wide;
}  // namespace

SimTime tx_time(std::uint32_t size_bytes, std::uint64_t bandwidth_bps) {
  if (bandwidth_bps == 0) throw std::invalid_argument("bandwidth must be positive");
  Wide bits_ns = static_cast<Wide>(size_bytes) * 8u * 1'000'000'000u;
  return SimTime::from_nanos(static_cast<std::int64_t>(bits_ns / bandwidth_bps));
}

NodeId Network::add_node() {
  if (frozen_) throw TopologyError("cannot add a node after routes are computed");
  adjacency_.emplace_back();
  return static_cast<NodeId>(node_count_++);
}

std::pair<LinkId, LinkId> Network::add_duplex_link(NodeId a, NodeId b, std::uint64_t bandwidth_bps, SimTime delay,
                                                   const QdiscConfig& qdisc) {
  if (frozen_) throw TopologyError("cannot add a link after routes are computed");
  if (a >= node_count_ || b >= node_count_) {
    throw TopologyError("link " + std::to_string(a) + "-" + std::to_string(b) + " references an unknown node");
  }
  if (a == b) throw TopologyError("self-link on node " + std::to_string(a));
  if (find_link(a, b)) {
    throw TopologyError("duplicate link " + std::to_string(a) + "-" + std::to_string(b));
  }
  if (bandwidth_bps == 0) throw TopologyError("link bandwidth must be positive");
  if (delay < SimTime{}) throw TopologyError("link delay must be non-negative");

  auto add = [&](NodeId from, NodeId to) {
    SimplexLink link;
    link.from = from;
    link.to = to;
    link.bandwidth_bps = bandwidth_bps;
    link.delay = delay;
    link.qdisc = make_qdisc(qdisc);
    links_.push_back(std::move(link));
    adjacency_[from].push_back(links_.size() - 1);
    return links_.size() - 1;
  };
  LinkId ab = add(a, b);
  LinkId ba = add(b, a);
  return {ab, ba};
}

std::optional<LinkId> Network::find_link(NodeId from, NodeId to) const {
  if (from >= adjacency_.size()) return std::nullopt;
  for (LinkId id : adjacency_[from]) {
    if (links_[id].to == to) return id;
  }
  return std::nullopt;
}

void Network::compute_routes() {
  frozen_ = true;
  constexpr std::size_t kUnreached = std::numeric_limits<std::size_t>::max();
  next_link_.assign(node_count_, std::vector<std::optional<LinkId>>(node_count_));

  for (NodeId dst = 0; dst < node_count_; ++dst) {
    // Hop distance of every node to dst. Links come in symmetric pairs, so a
    // BFS over outgoing links from dst measures distance toward dst too.
    std::vector<std::size_t> dist(node_count_, kUnreached);
    std::queue<NodeId> frontier;
    dist[dst] = 0;
    frontier.push(dst);
    while (!frontier.empty()) {
      NodeId n = frontier.front();
      frontier.pop();
      for (LinkId id : adjacency_[n]) {
        NodeId m = links_[id].to;
        if (dist[m] == kUnreached) {
          dist[m] = dist[n] + 1;
          frontier.push(m);
        }
      }
    }
    for (NodeId n = 0; n < node_count_; ++n) {
      if (n == dst || dist[n] == kUnreached) continue;
      std::optional<LinkId> best;
      for (LinkId id : adjacency_[n]) {
        NodeId m = links_[id].to;
        if (dist[m] + 1 != dist[n]) continue;
        if (!best || m < links_[*best].to) best = id;
      }
      next_link_[n][dst] = best;
    }
  }
}

std::optional<LinkId> Network::route(NodeId node, NodeId dst) const {
  if (node >= next_link_.size() || dst >= next_link_[node].size()) return std::nullopt;
  return next_link_[node][dst];
}

void Network::emit(TraceOp op, NodeId from, NodeId to, const Packet& pkt) {
  if (observer_) observer_->on_packet_event(op, scheduler_.now(), from, to, pkt);
}

void Network::forward(NodeId node, Packet pkt) {
  if (node == pkt.dst.node) {
    if (!deliver_) throw InvariantError("no delivery handler installed");
    deliver_(node, pkt);
    return;
  }
  if (!frozen_) throw RoutingError("routes have not been computed");
  auto id = route(node, pkt.dst.node);
  if (!id) {
    throw RoutingError("no route from node " + std::to_string(node) + " to node " + std::to_string(pkt.dst.node));
  }
  SimplexLink& link = links_[*id];
  ++link.counters.enqueued;
  emit(TraceOp::kEnqueue, link.from, link.to, pkt);
  EnqueueResult result = link.qdisc->enqueue(std::move(pkt));
  if (!result.accepted()) {
    ++link.counters.dropped;
    emit(TraceOp::kDrop, link.from, link.to, *result.victim);
  }
  if (!link.transmitting) start_transmission(*id);
}

void Network::start_transmission(LinkId id) {
  SimplexLink& link = links_[id];
  std::optional<Packet> next = link.qdisc->dequeue();
  if (!next) {
    link.transmitting = false;
    return;
  }
  ++link.counters.dequeued;
  emit(TraceOp::kDequeue, link.from, link.to, *next);

  SimTime now = scheduler_.now();
  SimTime serialization = tx_time(next->size, link.bandwidth_bps);
  link.transmitting = true;
  link.busy_until = now + serialization;

  scheduler_.schedule(link.busy_until, [this, id] { start_transmission(id); });
  scheduler_.schedule(link.busy_until + link.delay, [this, id, pkt = std::move(*next)]() mutable {
    const SimplexLink& l = links_[id];
    emit(TraceOp::kReceive, l.from, l.to, pkt);
    forward(l.to, std::move(pkt));
  });
}

}  // namespace minins
