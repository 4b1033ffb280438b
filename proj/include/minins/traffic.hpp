#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "minins/engine.hpp"
#include "minins/network.hpp"
#include "minins/packet.hpp"
#include "minins/qdisc.hpp"
#include "minins/sim_time.hpp"

namespace minins {

/// splitmix64 generator. The only randomness in a run comes from these, one
/// per stochastic generator.
class Rng {
 public:
  explicit Rng(std::uint64_t state) : state_(state) {}

  // Independent stream for the generator with the given declaration ordinal.
  static Rng substream(std::uint64_t seed, std::uint64_t ordinal) { return Rng(mix64(seed ^ ordinal)); }

  std::uint64_t next() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

// -mean * ln(1 - u), rounded down to whole nanoseconds.
SimTime exp_variate(SimTime mean, double u);
inline SimTime exp_variate(SimTime mean, Rng& rng) { return exp_variate(mean, rng.uniform()); }

struct MonitorReport {
  std::uint64_t npkts = 0;
  std::uint64_t bytes = 0;
  std::uint64_t nlost = 0;
  SimTime last_arrival;
};

/// Terminal agent counting deliveries and inferring losses from sequence gaps.
class SinkMonitor {
 public:
  explicit SinkMonitor(Address address) : address_(address) {}

  // Throws InvariantError if the packet is not addressed to this sink.
  void on_receive(const Packet& pkt, SimTime now);
  MonitorReport report() const;

  Address address() const { return address_; }

 private:
  struct FlowProgress {
    std::uint64_t highest_seq = 0;
    std::uint64_t received = 0;
  };

  Address address_;
  std::uint64_t npkts_ = 0;
  std::uint64_t bytes_ = 0;
  SimTime last_arrival_;
  std::map<FlowId, FlowProgress> flows_;
};

/// Hands out run-wide unique packet ids.
class UidSource {
 public:
  std::uint64_t take() { return next_++; }
  std::uint64_t issued() const { return next_; }

 private:
  std::uint64_t next_ = 0;
};

/// UDP-style sending agent bound to a node port.
class UdpAgent {
 public:
  UdpAgent(Network& network, Scheduler& scheduler, UidSource& uids, Address address, FlowId fid)
      : network_(network), scheduler_(scheduler), uids_(uids), address_(address), fid_(fid) {}

  void connect(Address peer) { peer_ = peer; }
  bool connected() const { return peer_.has_value(); }

  void set_packet_type(std::string ptype) { ptype_ = std::move(ptype); }

  // Emits one packet toward the connected peer. Throws if unconnected.
  void send(std::uint32_t size);

  Address address() const { return address_; }
  std::optional<Address> peer() const { return peer_; }
  FlowId fid() const { return fid_; }
  std::uint64_t packets_sent() const { return next_seq_; }

 private:
  Network& network_;
  Scheduler& scheduler_;
  UidSource& uids_;
  Address address_;
  FlowId fid_;
  std::optional<Address> peer_;
  std::string ptype_ = "udp";
  std::uint64_t next_seq_ = 0;
};

struct CbrConfig {
  std::uint32_t size = 1000;
  SimTime interval;
  SimTime start;
  SimTime stop;
};

/// Constant bit rate source: one packet at start + k * interval until stop.
///
/// start and stop are events inserted at install time. The first send is a
/// separate event queued by start, so a stop at the same instant (or a stop
/// landing on a send instant) cancels the send.
class CbrGenerator {
 public:
  CbrGenerator(Scheduler& scheduler, UdpAgent& agent, const CbrConfig& config);

  void install();
  void start();
  void stop();

  bool running() const { return running_; }
  const UdpAgent& agent() const { return agent_; }

 private:
  void send();

  Scheduler& scheduler_;
  UdpAgent& agent_;
  CbrConfig config_;
  bool running_ = false;
  std::optional<EventId> pending_;
};

struct ExpOnOffConfig {
  std::uint32_t size = 1000;
  SimTime burst_mean;     // mean ON duration
  SimTime idle_mean;      // mean OFF duration
  std::uint64_t rate_bps = 0;  // sending rate while ON
  SimTime start;
  SimTime stop;
};

/// Exponential on-off source.
///
/// Starts ON. Each ON period lasts Exponential(burst_mean) and each OFF period
/// Exponential(idle_mean), drawn in that alternating order. While ON, packets
/// leave every size*8/rate starting at the opening instant; a packet is sent
/// only if its whole serialization at `rate` fits before the period ends,
/// otherwise it waits for the next opening.
class ExpOnOffGenerator {
 public:
  ExpOnOffGenerator(Scheduler& scheduler, UdpAgent& agent, const ExpOnOffConfig& config, Rng rng);

  void install();
  void start();
  void stop();

  const UdpAgent& agent() const { return agent_; }
  SimTime spacing() const { return spacing_; }
  // Sum of the ON durations drawn so far.
  SimTime total_on_time() const { return total_on_; }
  std::uint64_t bursts() const { return bursts_; }

 private:
  void open_burst();
  void send();
  void close_burst();

  Scheduler& scheduler_;
  UdpAgent& agent_;
  ExpOnOffConfig config_;
  Rng rng_;
  SimTime spacing_;
  SimTime burst_end_;
  SimTime total_on_;
  std::uint64_t bursts_ = 0;
  bool running_ = false;
  std::optional<EventId> pending_;
};

}  // namespace minins
