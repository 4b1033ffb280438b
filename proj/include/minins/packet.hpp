#pragma once

#include <cstdint>
#include <string>

#include "minins/sim_time.hpp"

namespace minins {

// Dense node index, in creation order from 0.
using NodeId = std::uint32_t;
// Traffic class label carried by every packet of a flow.
using FlowId = std::uint32_t;

/// Transport endpoint, printed as "node.port" in traces.
struct Address {
  NodeId node = 0;
  std::uint32_t port = 0;
  auto operator<=>(const Address&) const = default;
};

struct Packet {
  std::uint64_t uid = 0;  // unique across the run
  FlowId fid = 0;
  std::string ptype;      // "cbr", "exp", ...
  std::uint32_t size = 0; // bytes
  Address src;
  Address dst;
  std::uint64_t seq = 0;  // per-flow sequence number
  SimTime birth;
};

}  // namespace minins
