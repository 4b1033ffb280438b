#include "minins/traffic.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "minins/errors.hpp"

namespace minins {

namespace {

std::string to_string(Address a) { return std::to_string(a.node) + "." + std::to_string(a.port); }

}  // namespace

SimTime exp_variate(SimTime mean, double u) {
  if (mean <= SimTime{}) throw std::invalid_argument("exponential mean must be positive");
  double draw = -static_cast<double>(mean.nanos()) * std::log(1.0 - u);
  return SimTime::from_nanos(static_cast<std::int64_t>(std::floor(draw)));
}

void SinkMonitor::on_receive(const Packet& pkt, SimTime now) {
  if (pkt.dst != address_) {
    throw InvariantError("packet uid " + std::to_string(pkt.uid) + " for " + to_string(pkt.dst) +
                         " delivered to sink " + to_string(address_));
  }
  ++npkts_;
  bytes_ += pkt.size;
  last_arrival_ = now;
  FlowProgress& flow = flows_[pkt.fid];
  if (flow.received == 0 || pkt.seq > flow.highest_seq) flow.highest_seq = pkt.seq;
  ++flow.received;
}

MonitorReport SinkMonitor::report() const {
  MonitorReport r;
  r.npkts = npkts_;
  r.bytes = bytes_;
  r.last_arrival = last_arrival_;
  for (const auto& [fid, flow] : flows_) {
    std::uint64_t expected = flow.highest_seq + 1;
    if (expected > flow.received) r.nlost += expected - flow.received;
  }
  return r;
}

void UdpAgent::send(std::uint32_t size) {
  if (!peer_) {
    throw InvariantError("agent " + to_string(address_) + " is not connected to a sink");
  }
  Packet pkt;
  pkt.uid = uids_.take();
  pkt.fid = fid_;
  pkt.ptype = ptype_;
  pkt.size = size;
  pkt.src = address_;
  pkt.dst = *peer_;
  pkt.seq = next_seq_++;
  pkt.birth = scheduler_.now();
  network_.forward(address_.node, std::move(pkt));
}

CbrGenerator::CbrGenerator(Scheduler& scheduler, UdpAgent& agent, const CbrConfig& config)
    : scheduler_(scheduler), agent_(agent), config_(config) {
  if (config_.interval <= SimTime{}) throw std::invalid_argument("CBR interval must be positive");
  if (config_.size == 0) throw std::invalid_argument("CBR packet size must be positive");
  if (config_.stop < config_.start) throw std::invalid_argument("CBR stop precedes start");
  if (!agent_.connected()) throw InvariantError("CBR attached to an unconnected agent");
  agent_.set_packet_type("cbr");
}

void CbrGenerator::install() {
  scheduler_.schedule(config_.start, [this] { start(); });
  scheduler_.schedule(config_.stop, [this] { stop(); });
}

void CbrGenerator::start() {
  if (running_) return;
  running_ = true;
  pending_ = scheduler_.schedule(scheduler_.now(), [this] { send(); });
}

void CbrGenerator::stop() {
  running_ = false;
  if (pending_) scheduler_.cancel(*pending_);
  pending_.reset();
}

void CbrGenerator::send() {
  pending_.reset();
  if (!running_) return;
  agent_.send(config_.size);
  pending_ = scheduler_.schedule(scheduler_.now() + config_.interval, [this] { send(); });
}

ExpOnOffGenerator::ExpOnOffGenerator(Scheduler& scheduler, UdpAgent& agent, const ExpOnOffConfig& config, Rng rng)
    : scheduler_(scheduler), agent_(agent), config_(config), rng_(rng) {
  if (config_.size == 0) throw std::invalid_argument("on-off packet size must be positive");
  if (config_.rate_bps == 0) throw std::invalid_argument("on-off rate must be positive");
  if (config_.burst_mean <= SimTime{} || config_.idle_mean <= SimTime{}) {
    throw std::invalid_argument("on-off burst and idle means must be positive");
  }
  if (config_.stop < config_.start) throw std::invalid_argument("on-off stop precedes start");
  if (!agent_.connected()) throw InvariantError("on-off source attached to an unconnected agent");
  spacing_ = tx_time(config_.size, config_.rate_bps);
  agent_.set_packet_type("exp");
}

void ExpOnOffGenerator::install() {
  scheduler_.schedule(config_.start, [this] { start(); });
  scheduler_.schedule(config_.stop, [this] { stop(); });
}

void ExpOnOffGenerator::start() {
  if (running_) return;
  running_ = true;
  open_burst();
}

void ExpOnOffGenerator::stop() {
  running_ = false;
  if (pending_) scheduler_.cancel(*pending_);
  pending_.reset();
}

void ExpOnOffGenerator::open_burst() {
  pending_.reset();
  if (!running_) return;
  SimTime on = exp_variate(config_.burst_mean, rng_);
  ++bursts_;
  total_on_ += on;
  SimTime now = scheduler_.now();
  burst_end_ = now + on;
  if (now + spacing_ <= burst_end_) {
    pending_ = scheduler_.schedule(now, [this] { send(); });
  } else {
    close_burst();
  }
}

void ExpOnOffGenerator::send() {
  pending_.reset();
  if (!running_) return;
  agent_.send(config_.size);
  SimTime next = scheduler_.now() + spacing_;
  if (next + spacing_ <= burst_end_) {
    pending_ = scheduler_.schedule(next, [this] { send(); });
  } else {
    close_burst();
  }
}

void ExpOnOffGenerator::close_burst() {
  SimTime off = exp_variate(config_.idle_mean, rng_);
  pending_ = scheduler_.schedule(burst_end_ + off, [this] { open_burst(); });
}

}  // namespace minins
