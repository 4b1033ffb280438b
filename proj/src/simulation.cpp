#include "minins/simulation.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>

#include "minins/analyze.hpp"
#include "minins/errors.hpp"
#include "minins/trace.hpp"

namespace minins {

Simulation::Simulation() : network_(scheduler_) {
  network_.set_delivery_handler([this](NodeId node, const Packet& pkt) { deliver(node, pkt); });
}

std::uint32_t Simulation::take_port(NodeId node) {
  if (node >= network_.node_count()) throw TopologyError("unknown node " + std::to_string(node));
  if (next_port_.size() <= node) next_port_.resize(node + 1, 0);
  return next_port_[node]++;
}

SinkMonitor& Simulation::add_sink(NodeId node) {
  Address address{node, take_port(node)};
  SinkMonitor& sink = sinks_.emplace_back(address);
  sink_by_address_[address] = &sink;
  return sink;
}

UdpAgent& Simulation::add_udp_agent(NodeId node, FlowId fid) {
  Address address{node, take_port(node)};
  return agents_.emplace_back(network_, scheduler_, uids_, address, fid);
}

CbrGenerator& Simulation::attach_cbr(UdpAgent& agent, const CbrConfig& config) {
  CbrGenerator& cbr = cbrs_.emplace_back(scheduler_, agent, config);
  cbr.install();
  return cbr;
}

ExpOnOffGenerator& Simulation::attach_expoo_traffic(NodeId node, SinkMonitor& sink, const ExpOnOffConfig& config,
                                                    FlowId fid, Rng rng) {
  UdpAgent& agent = add_udp_agent(node, fid);
  connect(agent, sink);
  ExpOnOffGenerator& gen = expoos_.emplace_back(scheduler_, agent, config, rng);
  gen.install();
  return gen;
}

void Simulation::finish_at(SimTime at, std::function<void()> on_finish) {
  scheduler_.schedule(at, [this, on_finish = std::move(on_finish)] {
    if (on_finish) on_finish();
    scheduler_.halt();
  });
}

void Simulation::deliver(NodeId node, const Packet& pkt) {
  auto it = sink_by_address_.find(pkt.dst);
  if (it == sink_by_address_.end() || pkt.dst.node != node) {
    throw InvariantError("no sink bound at " + std::to_string(pkt.dst.node) + "." + std::to_string(pkt.dst.port) +
                         " for packet uid " + std::to_string(pkt.uid));
  }
  it->second->on_receive(pkt, scheduler_.now());
}

RunResult run_scenario(const ScenarioSpec& spec, const RunOptions& options) {
  Simulation sim;
  for (std::size_t i = 0; i < spec.nodes.size(); ++i) sim.add_node();
  for (const auto& link : spec.links) {
    sim.network().add_duplex_link(spec.node_index(link.a), spec.node_index(link.b), link.bandwidth_bps, link.delay,
                                  link.queue);
  }
  sim.compute_routes();

  std::unique_ptr<TraceWriter> writer;
  std::optional<std::string> path = options.trace_path ? options.trace_path : spec.trace_file;
  if (options.trace_stream) {
    writer = std::make_unique<TraceWriter>(*options.trace_stream);
  } else if (path && options.write_trace_file) {
    writer = TraceWriter::open_file(*path);
  } else {
    writer = std::make_unique<TraceWriter>();
  }
  sim.set_observer(writer.get());

  // Each udp declaration gets its own sink on the sink node.
  struct Endpoint {
    SinkMonitor* sink;
    UdpAgent* cbr_agent;  // shared by every cbr on this declaration
    std::vector<const UdpAgent*> senders;
  };
  std::map<std::string, Endpoint> endpoints;
  std::vector<std::string> agent_order;
  for (const auto& agent : spec.agents) {
    NodeId sink_node = spec.node_index(agent.sink);
    endpoints[agent.name] = Endpoint{&sim.add_sink(sink_node), nullptr, {}};
    agent_order.push_back(agent.name);
  }

  auto agent_spec = [&](const std::string& name) -> const AgentSpec& {
    for (const auto& a : spec.agents) {
      if (a.name == name) return a;
    }
    throw std::out_of_range("unknown agent '" + name + "'");
  };

  std::uint64_t seed = options.seed.value_or(spec.seed);
  for (std::size_t i = 0; i < spec.generators.size(); ++i) {
    if (const auto* cbr = std::get_if<CbrSpec>(&spec.generators[i])) {
      const AgentSpec& a = agent_spec(cbr->agent);
      Endpoint& ep = endpoints.at(a.name);
      if (!ep.cbr_agent) {
        ep.cbr_agent = &sim.add_udp_agent(spec.node_index(a.src), a.fid);
        sim.connect(*ep.cbr_agent, *ep.sink);
        ep.senders.push_back(ep.cbr_agent);
      }
      sim.attach_cbr(*ep.cbr_agent, CbrConfig{cbr->size, cbr->interval, cbr->start, cbr->stop});
    } else {
      const auto& exp = std::get<ExpSpec>(spec.generators[i]);
      const AgentSpec& a = agent_spec(exp.agent);
      Endpoint& ep = endpoints.at(a.name);
      ExpOnOffConfig config{exp.size, exp.burst, exp.idle, exp.rate_bps, exp.start, exp.stop};
      auto& gen = sim.attach_expoo_traffic(spec.node_index(a.src), *ep.sink, config, a.fid, Rng::substream(seed, i));
      ep.senders.push_back(&gen.agent());
    }
  }

  RunResult result;
  SimTime finished;
  sim.finish_at(spec.duration, [&] { finished = sim.scheduler().now(); });
  sim.run(spec.duration);
  writer->close_flush();

  result.finished_at = finished;
  result.trace_lines = writer->lines();
  result.trace_digest = writer->digest().hex();

  // Sinks were created in agent order, so sink i belongs to agent i.
  for (const auto& name : agent_order) {
    const AgentSpec& a = agent_spec(name);
    const Endpoint& ep = endpoints.at(name);
    AgentReport report;
    report.name = name;
    report.fid = a.fid;
    report.src = spec.node_index(a.src);
    report.sink = spec.node_index(a.sink);
    report.monitor = ep.sink->report();
    for (const UdpAgent* sender : ep.senders) report.sent += sender->packets_sent();
    result.packets += report.monitor.npkts;
    result.bytes += report.monitor.bytes;
    result.agents.push_back(report);
  }

  const Network& net = sim.network();
  for (LinkId id = 0; id < net.link_count(); ++id) {
    const SimplexLink& link = net.link(id);
    result.links.push_back(LinkReport{link.from, link.to, link.counters, link.qdisc->held()});
    result.drops += link.counters.dropped;
  }

  if (!spec.agents.empty()) {
    const AgentSpec& first = spec.agents.front();
    NodeId src = spec.node_index(first.src);
    result.sink_node = spec.node_index(first.sink);
    // Walk the route to find the last hop into the sink node.
    NodeId at = src;
    while (at != result.sink_node) {
      auto hop = net.route(at, result.sink_node);
      if (!hop) break;
      if (net.link(*hop).to == result.sink_node) result.sink_link_bps = net.link(*hop).bandwidth_bps;
      at = net.link(*hop).to;
    }
  }
  if (result.finished_at > SimTime{} && result.sink_link_bps > 0) {
    result.utilization_pct = utilization(result.bytes, result.finished_at.to_seconds(),
                                         static_cast<double>(result.sink_link_bps));
  }
  return result;
}

std::string format_double(double value) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

std::string format_statistics(const RunResult& r) {
  std::ostringstream out;
  std::string node = std::to_string(r.sink_node);
  out << "Estatisticas:\n"
      << "Tempo Simulacao: " << format_seconds_short(r.finished_at) << " s\n"
      << "Pacotes recebidos no nodo " << node << ": " << r.packets << "\n"
      << "Bytes recebidos no nodo " << node << ": " << r.bytes << "\n"
      << "Utilizacao do link: " << format_double(r.utilization_pct) << "%\n"
      << "tempo_simulacao_s=" << format_seconds_short(r.finished_at) << "\n"
      << "pacotes_recebidos=" << r.packets << "\n"
      << "bytes_recebidos=" << r.bytes << "\n"
      << "utilizacao_link_pct=" << format_double(r.utilization_pct) << "\n";
  return out.str();
}

std::map<std::string, std::string> result_fields(const RunResult& r) {
  std::map<std::string, std::string> f;
  f["tempo_simulacao_s"] = format_seconds_short(r.finished_at);
  f["pacotes_recebidos"] = std::to_string(r.packets);
  f["bytes_recebidos"] = std::to_string(r.bytes);
  f["utilizacao_link_pct"] = format_double(r.utilization_pct);
  f["pacotes_descartados"] = std::to_string(r.drops);
  f["trace_lines"] = std::to_string(r.trace_lines);
  f["trace_digest"] = r.trace_digest;
  for (const auto& a : r.agents) {
    f[a.name + ".pacotes"] = std::to_string(a.monitor.npkts);
    f[a.name + ".bytes"] = std::to_string(a.monitor.bytes);
    f[a.name + ".perdidos"] = std::to_string(a.monitor.nlost);
    f[a.name + ".enviados"] = std::to_string(a.sent);
  }
  return f;
}

}  // namespace minins
