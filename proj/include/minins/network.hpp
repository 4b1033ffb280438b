#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "minins/engine.hpp"
#include "minins/packet.hpp"
#include "minins/qdisc.hpp"
#include "minins/sim_time.hpp"

namespace minins {

enum class TraceOp : char { kEnqueue = '+', kDequeue = '-', kReceive = 'r', kDrop = 'd' };

/// Receives every packet event on links. `from`/`to` are the link endpoints;
/// for kReceive the event happens at `to`.
class PacketObserver {
 public:
  virtual ~PacketObserver() = default;
  virtual void on_packet_event(TraceOp op, SimTime time, NodeId from, NodeId to, const Packet& pkt) = 0;
};

using LinkId = std::size_t;

// Serialization time floor(size * 8 * 1e9 / bandwidth) in nanoseconds.
SimTime tx_time(std::uint32_t size_bytes, std::uint64_t bandwidth_bps);

struct LinkCounters {
  std::uint64_t enqueued = 0;
  std::uint64_t dequeued = 0;
  std::uint64_t dropped = 0;
};

/// One direction of a duplex link with its own output queue.
struct SimplexLink {
  NodeId from = 0;
  NodeId to = 0;
  std::uint64_t bandwidth_bps = 0;
  SimTime delay;
  std::unique_ptr<QueueDiscipline> qdisc;
  SimTime busy_until;
  bool transmitting = false;
  LinkCounters counters;
};

/// Nodes, links, static routes and the store-and-forward pipeline.
///
/// A packet handed to forward() at a node that is not its destination is
/// enqueued on the route's outgoing link; an idle link starts serializing
/// immediately. After tx_time the link serves its next packet, and after
/// tx_time + delay the packet reaches the far node, which forwards it again.
class Network {
 public:
  using DeliveryHandler = std::function<void(NodeId, const Packet&)>;

  explicit Network(Scheduler& scheduler) : scheduler_(scheduler) {}

  Network(const Network&) = delete;
  Network& operator=(const Network&) = delete;

  NodeId add_node();
  // Returns the (a->b, b->a) link ids.
  std::pair<LinkId, LinkId> add_duplex_link(NodeId a, NodeId b, std::uint64_t bandwidth_bps, SimTime delay,
                                            const QdiscConfig& qdisc);

  // Freezes the topology and builds hop-count shortest-path routes, breaking
  // ties toward the smallest next-hop id.
  void compute_routes();

  void forward(NodeId node, Packet pkt);

  // Outgoing link from `node` toward `dst`, if reachable.
  std::optional<LinkId> route(NodeId node, NodeId dst) const;

  std::size_t node_count() const { return node_count_; }
  std::size_t link_count() const { return links_.size(); }
  const SimplexLink& link(LinkId id) const { return links_.at(id); }
  std::optional<LinkId> find_link(NodeId from, NodeId to) const;
  bool frozen() const { return frozen_; }

  void set_observer(PacketObserver* observer) { observer_ = observer; }
  void set_delivery_handler(DeliveryHandler handler) { deliver_ = std::move(handler); }

 private:
  void emit(TraceOp op, NodeId from, NodeId to, const Packet& pkt);
  void start_transmission(LinkId id);

  Scheduler& scheduler_;
  std::size_t node_count_ = 0;
  std::vector<SimplexLink> links_;
  std::vector<std::vector<LinkId>> adjacency_;  // outgoing links per node
  // next_link_[node][dst]; absent when unreachable or dst == node.
  std::vector<std::vector<std::optional<LinkId>>> next_link_;
  bool frozen_ = false;
  PacketObserver* observer_ = nullptr;
  DeliveryHandler deliver_;
};

}  // namespace minins
