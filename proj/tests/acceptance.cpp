// Acceptance gate: one PASS/FAIL line per criterion, exit 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <list>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "minins/analyze.hpp"
#include "minins/scenario.hpp"
#include "minins/simulation.hpp"
#include "minins/validate.hpp"

using namespace minins;
using namespace minins::literals;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
  std::size_t failures = 0;

  // Keeps the first few failure messages so the report stays on one line.
  void require(bool ok, const std::string& what) {
    if (ok) return;
    if (pass) detail.clear();
    pass = false;
    if (++failures <= 5) detail += (detail.empty() ? "" : "; ") + what;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

bool same_bytes(const fs::path& a, const fs::path& b) {
  if (fs::file_size(a) != fs::file_size(b)) return false;
  std::ifstream x(a, std::ios::binary), y(b, std::ios::binary);
  std::vector<char> bx(1 << 16), by(1 << 16);
  while (x && y) {
    x.read(bx.data(), static_cast<std::streamsize>(bx.size()));
    y.read(by.data(), static_cast<std::streamsize>(by.size()));
    if (x.gcount() != y.gcount()) return false;
    if (!std::equal(bx.begin(), bx.begin() + x.gcount(), by.begin())) return false;
  }
  return true;
}

class Workspace {
 public:
  Workspace() {
    std::random_device rd;
    root_ = fs::temp_directory_path() / ("minins-acceptance-" + std::to_string(rd()));
    fs::create_directories(root_);
  }
  ~Workspace() {
    std::error_code ec;
    fs::remove_all(root_, ec);
  }
  fs::path operator/(const std::string& name) const { return root_ / name; }

 private:
  fs::path root_;
};

std::vector<std::string> golden_names() {
  std::vector<std::string> names;
  for (const auto& e : fs::directory_iterator(default_golden_dir())) {
    if (e.path().extension() == ".scn") names.push_back(e.path().stem().string());
  }
  std::sort(names.begin(), names.end());
  return names;
}

ScenarioSpec golden(const std::string& name) {
  return parse_scenario(read_text(default_golden_dir() / (name + ".scn")));
}

// Golden runs with traces on disk, shared by several criteria.
struct GoldenRun {
  std::string name;
  ScenarioSpec spec;
  RunResult result;
  fs::path trace;
};

std::vector<GoldenRun> run_goldens(const Workspace& ws, const std::string& tag) {
  std::vector<GoldenRun> runs;
  for (const auto& name : golden_names()) {
    GoldenRun r{name, golden(name), {}, ws / (name + "." + tag + ".tr")};
    RunOptions opt;
    opt.trace_path = r.trace.string();
    r.result = run_scenario(r.spec, opt);
    runs.push_back(std::move(r));
  }
  return runs;
}

// 1 ----------------------------------------------------------------------

Verdict utilization_fidelity() {
  Verdict v;
  double u = utilization(334'576'500, 500, 1e7);
  v.require(std::abs(u - 53.532239999999994) <= 1e-9, "got " + format_double(u));
  v.detail = v.pass ? "utilization=" + format_double(u) : v.detail;
  return v;
}

// 2 ----------------------------------------------------------------------

Verdict cbr_golden(const Workspace& ws) {
  Verdict v;
  auto t0 = std::chrono::steady_clock::now();
  ScenarioSpec spec = golden("cbr_only");
  RunOptions opt;
  opt.trace_path = (ws / "c2.tr").string();
  RunResult r = run_scenario(spec, opt);
  double elapsed = seconds_since(t0);

  v.require(r.agents.size() == 1, "expected one agent");
  if (!v.pass) return v;
  const MonitorReport& m = r.agents[0].monitor;
  v.require(m.npkts == 99'600, "npkts=" + std::to_string(m.npkts));
  v.require(m.bytes == 99'600'000, "bytes=" + std::to_string(m.bytes));
  v.require(m.nlost == 0, "nlost=" + std::to_string(m.nlost));
  v.require(r.utilization_pct == 15.936, "utilization=" + format_double(r.utilization_pct));
  v.require(r.finished_at == 500_s, "finish at " + format_seconds_short(r.finished_at));

  std::ifstream in(*opt.trace_path);
  FlowStats fs_ = flow_stats(in, {r.agents[0].fid, r.agents[0].src, r.agents[0].sink});
  v.require(fs_.received == 99'600, "trace received=" + std::to_string(fs_.received));
  v.require(fs_.min_delay == 21'600_us && fs_.max_delay == 21'600_us, "delays not all 21.6 ms");
  v.require(elapsed < 5.0, "took " + format_double(elapsed) + " s");
  if (v.pass) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "npkts=99600 bytes=99600000 nlost=0 delay=0.0216 s util=15.936%% in %.2f s", elapsed);
    v.detail = buf;
  }
  return v;
}

// 3 ----------------------------------------------------------------------

Verdict mixed_traffic_seeds() {
  Verdict v;
  const double expected = 5e6 * 800.0 / 802.0 * 499.0 / 8.0;
  ScenarioSpec spec = golden("paper");
  double worst_dev = 0, lo_u = 100, hi_u = 0, slowest = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto t0 = std::chrono::steady_clock::now();
    RunOptions opt;
    opt.seed = seed;
    opt.write_trace_file = false;
    RunResult r = run_scenario(spec, opt);
    double elapsed = seconds_since(t0);
    slowest = std::max(slowest, elapsed);
    auto exp_agent = std::find_if(r.agents.begin(), r.agents.end(), [](const AgentReport& a) { return a.name == "exp0"; });
    if (exp_agent == r.agents.end()) {
      v.require(false, "no exp0 agent");
      return v;
    }
    double dev = (static_cast<double>(exp_agent->monitor.bytes) - expected) / expected;
    worst_dev = std::max(worst_dev, std::abs(dev));
    lo_u = std::min(lo_u, r.utilization_pct);
    hi_u = std::max(hi_u, r.utilization_pct);
    std::string tag = "seed " + std::to_string(seed) + ": ";
    v.require(std::abs(dev) <= 0.05, tag + "exp bytes " + std::to_string(exp_agent->monitor.bytes));
    v.require(r.utilization_pct >= 62 && r.utilization_pct <= 69, tag + "util " + format_double(r.utilization_pct));
    v.require(r.drops == 0, tag + std::to_string(r.drops) + " drops");
    v.require(elapsed < 30, tag + "took " + format_double(elapsed) + " s");
  }
  if (v.pass) {
    char buf[200];
    std::snprintf(buf, sizeof buf, "10 seeds: max |exp bytes dev|=%.3f%%, util in [%.3f, %.3f]%%, drops=0, slowest %.2f s",
                  worst_dev * 100, lo_u, hi_u, slowest);
    v.detail = buf;
  }
  return v;
}

// 4 ----------------------------------------------------------------------

Verdict determinism(const std::vector<GoldenRun>& first, const std::vector<GoldenRun>& second) {
  Verdict v;
  for (std::size_t i = 0; i < first.size(); ++i) {
    v.require(same_bytes(first[i].trace, second[i].trace), first[i].name + " traces differ");
    v.require(format_statistics(first[i].result) == format_statistics(second[i].result),
              first[i].name + " statistics differ");
  }
  if (v.pass) v.detail = std::to_string(first.size()) + " golden scenarios: traces and statistics byte-identical";
  return v;
}

// 5 ----------------------------------------------------------------------

Verdict conservation(const std::vector<GoldenRun>& runs) {
  Verdict v;
  std::size_t checked_lines = 0;
  for (const auto& run : runs) {
    std::ifstream in(run.trace);
    auto violations = conservation_check(in);
    checked_lines += run.result.trace_lines;
    v.require(violations.empty(), run.name + ": " + std::to_string(violations.size()) + " violations");
  }

  std::mt19937_64 rng(2718);
  std::uint64_t total_drops = 0, total_residual = 0;
  constexpr int kScenarios = 200;
  for (int i = 0; i < kScenarios; ++i) {
    ScenarioSpec s;
    std::size_t hops = 1 + rng() % 3;
    for (std::size_t n = 0; n <= hops; ++n) s.nodes.push_back("n" + std::to_string(n));
    std::uint64_t bottleneck = 100'000 * (1 + rng() % 50);
    std::size_t narrow = rng() % hops;
    for (std::size_t h = 0; h < hops; ++h) {
      std::uint64_t bw = h == narrow ? bottleneck : bottleneck * (2 + rng() % 8);
      s.links.push_back({s.nodes[h], s.nodes[h + 1], bw, SimTime::micros(static_cast<std::int64_t>(rng() % 20'000)),
                         QdiscConfig::drop_tail(2 + rng() % 9)});
    }
    std::size_t flows = 1 + rng() % 3;
    std::uint32_t size = static_cast<std::uint32_t>(100 + rng() % 1400);
    // Equal share of twice the bottleneck rate per flow.
    double per_flow_bps = 2.0 * static_cast<double>(bottleneck) / static_cast<double>(flows);
    auto interval = SimTime::from_nanos(static_cast<std::int64_t>(size * 8.0 / per_flow_bps * 1e9));
    s.duration = SimTime::seconds(2 + static_cast<std::int64_t>(rng() % 4));
    for (std::size_t f = 0; f < flows; ++f) {
      std::string name = "f" + std::to_string(f);
      s.agents.push_back({name, s.nodes.front(), s.nodes.back(), static_cast<FlowId>(f + 1), std::nullopt});
      // Sources run to the end so queues hold packets when the run stops.
      s.generators.push_back(CbrSpec{name, size, interval, SimTime::millis(static_cast<std::int64_t>(rng() % 100)),
                                     s.duration});
    }
    std::ostringstream trace;
    RunOptions opt;
    opt.seed = rng();
    opt.trace_stream = &trace;
    RunResult r = run_scenario(s, opt);
    for (std::size_t l = 0; l < r.links.size(); ++l) {
      const LinkReport& link = r.links[l];
      std::uint64_t in_flight = link.counters.dequeued + link.counters.dropped + link.residual;
      v.require(link.counters.enqueued == in_flight, "scenario " + std::to_string(i) + " link " + std::to_string(l) +
                                                        " unbalanced");
      total_residual += link.residual;
    }
    total_drops += r.drops;
    std::istringstream in(trace.str());
    auto violations = conservation_check(in);
    v.require(violations.empty(), "scenario " + std::to_string(i) + ": " + std::to_string(violations.size()) +
                                      " violations");
  }
  v.require(total_drops > 0, "overload scenarios never dropped");
  if (v.pass) {
    v.detail = "0 violations over " + std::to_string(checked_lines) + " golden trace lines; " +
               std::to_string(kScenarios) + " overload runs balanced (drops=" + std::to_string(total_drops) +
               ", residual=" + std::to_string(total_residual) + ")";
  }
  return v;
}

// 6 ----------------------------------------------------------------------

Verdict sfq_fairness() {
  Verdict v;
  ScenarioSpec sfq = golden("sfq_fair");
  RunResult r = run_scenario(sfq, RunOptions{std::nullopt, std::nullopt, nullptr, false});
  v.require(r.agents.size() == 2, "expected two flows");
  if (!v.pass) return v;
  // Each flow offers 10 Mb/s for 100 s.
  for (const auto& a : r.agents) {
    double offered = static_cast<double>(a.sent) * 1000 * 8 / 100.0;
    v.require(std::abs(offered - 1e7) / 1e7 < 1e-9, a.name + " offers " + format_double(offered));
  }
  double b1 = static_cast<double>(r.agents[0].monitor.bytes), b2 = static_cast<double>(r.agents[1].monitor.bytes);
  double gap = std::abs(b1 - b2) / std::max(b1, b2);
  v.require(gap <= 0.05, "sfq throughput gap " + format_double(gap * 100) + "%");

  // DropTail variant: the bottleneck must serve accepted packets in arrival order.
  ScenarioSpec fifo = sfq;
  for (auto& link : fifo.links) link.queue = QdiscConfig::drop_tail();
  std::ostringstream trace;
  RunOptions opt;
  opt.trace_stream = &trace;
  RunResult rf = run_scenario(fifo, opt);
  NodeId from = fifo.node_index("n2"), to = fifo.node_index("n3");
  std::list<std::uint64_t> queued;
  std::size_t served = 0;
  bool ordered = true;
  std::map<FlowId, std::uint64_t> last_seq;
  bool seq_monotone = true;
  std::istringstream in(trace.str());
  for_each_record(in, [&](const TraceRecord& rec, std::size_t) {
    if (rec.op == TraceOp::kReceive && rec.to == rec.dst.node) {
      auto it = last_seq.find(rec.fid);
      if (it != last_seq.end() && rec.seq <= it->second) seq_monotone = false;
      last_seq[rec.fid] = rec.seq;
    }
    if (rec.from != from || rec.to != to) return;
    if (rec.op == TraceOp::kEnqueue) queued.push_back(rec.uid);
    if (rec.op == TraceOp::kDrop) {
      if (queued.empty() || queued.back() != rec.uid) ordered = false;
      else queued.pop_back();
    }
    if (rec.op == TraceOp::kDequeue) {
      if (queued.empty() || queued.front() != rec.uid) ordered = false;
      else queued.pop_front();
      ++served;
    }
  });
  v.require(ordered, "droptail bottleneck broke FIFO order");
  v.require(seq_monotone, "droptail delivered a flow out of order");
  v.require(served > 100'000, "droptail bottleneck served too little");
  if (v.pass) {
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "sfq: %.0f vs %.0f bytes (gap %.4f%%); droptail: %zu dequeues in enqueue order, shares %llu/%llu pkts",
                  b1, b2, gap * 100, served, static_cast<unsigned long long>(rf.agents[0].monitor.npkts),
                  static_cast<unsigned long long>(rf.agents[1].monitor.npkts));
    v.detail = buf;
  }
  return v;
}

// 7 ----------------------------------------------------------------------

Verdict online_offline(const std::vector<GoldenRun>& runs) {
  Verdict v;
  std::size_t flows = 0;
  for (const auto& run : runs) {
    std::map<FlowId, FlowStatsAccumulator> acc;
    std::map<FlowId, MonitorReport> online;
    for (const auto& a : run.result.agents) {
      acc.emplace(a.fid, FlowQuery{a.fid, a.src, a.sink});
      online[a.fid] = a.monitor;
    }
    std::ifstream in(run.trace);
    for_each_record(in, [&](const TraceRecord& rec, std::size_t) {
      if (auto it = acc.find(rec.fid); it != acc.end()) it->second.add(rec);
    });
    for (const auto& [fid, a] : acc) {
      FlowStats s = a.result();
      const MonitorReport& m = online[fid];
      v.require(s.received == m.npkts && s.bytes_received == m.bytes,
                run.name + " fid " + std::to_string(fid) + ": trace " + std::to_string(s.received) + "/" +
                    std::to_string(s.bytes_received) + " vs monitor " + std::to_string(m.npkts) + "/" +
                    std::to_string(m.bytes));
      ++flows;
    }
  }
  if (v.pass) v.detail = std::to_string(flows) + " flows across " + std::to_string(runs.size()) + " golden runs match";
  return v;
}

// 8 ----------------------------------------------------------------------
//
// Reference model: a plain list of pending events scanned in full for the
// earliest (time, insertion number) entry, std::list FIFOs, and routes read
// straight off a three-node adjacency matrix.

struct MicroPacket {
  int src;
  int dst;
  std::uint32_t size;
  std::int64_t at_ns;
};

struct MicroLink {
  std::uint64_t bw;
  std::int64_t delay_ns;
  std::size_t limit;
};

struct MicroScenario {
  // links[a][b] for a < b; absent when zero bandwidth.
  MicroLink links[3][3]{};
  std::vector<MicroPacket> packets;
};

struct MicroOutcome {
  std::map<std::uint64_t, std::int64_t> delivered;  // uid -> ns
  std::set<std::uint64_t> dropped;
  bool operator==(const MicroOutcome&) const = default;
};

MicroOutcome reference_model(const MicroScenario& sc) {
  struct Pkt {
    std::uint64_t uid;
    int dst;
    std::uint32_t size;
  };
  struct Ev {
    std::int64_t t;
    std::uint64_t order;
    int kind;  // 0 inject, 1 tx done, 2 arrive
    int a, b;  // link a->b, or source node for inject
    std::size_t index;
    Pkt pkt;
  };
  struct Dir {
    std::list<Pkt> fifo;
    bool busy = false;
  };
  std::vector<Ev> pending;
  std::uint64_t order = 0, next_uid = 0;
  Dir dirs[3][3];
  MicroOutcome out;

  auto has = [&](int a, int b) { return sc.links[std::min(a, b)][std::max(a, b)].bw != 0; };
  auto spec = [&](int a, int b) -> const MicroLink& { return sc.links[std::min(a, b)][std::max(a, b)]; };
  auto next_hop = [&](int at, int dst) {
    if (has(at, dst)) return dst;
    return 3 - at - dst;
  };

  std::function<void(int, int, std::int64_t)> serve = [&](int a, int b, std::int64_t now) {
    Dir& d = dirs[a][b];
    if (d.fifo.empty()) {
      d.busy = false;
      return;
    }
    Pkt p = d.fifo.front();
    d.fifo.pop_front();
    d.busy = true;
    std::int64_t tx = static_cast<std::int64_t>(static_cast<std::uint64_t>(p.size) * 8 * 1'000'000'000 / spec(a, b).bw);
    pending.push_back({now + tx, order++, 1, a, b, 0, {}});
    pending.push_back({now + tx + spec(a, b).delay_ns, order++, 2, a, b, 0, p});
  };
  auto arrive_at = [&](int node, const Pkt& p, std::int64_t now) {
    if (node == p.dst) {
      out.delivered[p.uid] = now;
      return;
    }
    int nh = next_hop(node, p.dst);
    Dir& d = dirs[node][nh];
    if (d.fifo.size() >= spec(node, nh).limit) {
      out.dropped.insert(p.uid);
    } else {
      d.fifo.push_back(p);
    }
    if (!d.busy) serve(node, nh, now);
  };

  for (std::size_t i = 0; i < sc.packets.size(); ++i) {
    pending.push_back({sc.packets[i].at_ns, order++, 0, sc.packets[i].src, 0, i, {}});
  }
  while (!pending.empty()) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < pending.size(); ++i) {
      if (pending[i].t < pending[best].t || (pending[i].t == pending[best].t && pending[i].order < pending[best].order)) {
        best = i;
      }
    }
    Ev e = pending[best];
    pending.erase(pending.begin() + static_cast<std::ptrdiff_t>(best));
    if (e.kind == 0) {
      const MicroPacket& mp = sc.packets[e.index];
      arrive_at(mp.src, Pkt{next_uid++, mp.dst, mp.size}, e.t);
    } else if (e.kind == 1) {
      serve(e.a, e.b, e.t);
    } else {
      arrive_at(e.b, e.pkt, e.t);
    }
  }
  return out;
}

MicroOutcome simulator_model(const MicroScenario& sc) {
  struct Watch : PacketObserver {
    MicroOutcome out;
    void on_packet_event(TraceOp op, SimTime t, NodeId, NodeId to, const Packet& p) override {
      if (op == TraceOp::kReceive && to == p.dst.node) out.delivered[p.uid] = t.nanos();
      if (op == TraceOp::kDrop) out.dropped.insert(p.uid);
    }
  } watch;
  Simulation sim;
  for (int i = 0; i < 3; ++i) sim.add_node();
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      const MicroLink& l = sc.links[a][b];
      if (l.bw == 0) continue;
      sim.network().add_duplex_link(static_cast<NodeId>(a), static_cast<NodeId>(b), l.bw, SimTime::from_nanos(l.delay_ns),
                                    QdiscConfig::drop_tail(l.limit));
    }
  }
  sim.compute_routes();
  sim.set_observer(&watch);
  std::map<std::pair<int, int>, UdpAgent*> agents;
  for (const auto& p : sc.packets) {
    auto key = std::make_pair(p.src, p.dst);
    if (!agents.contains(key)) {
      SinkMonitor& sink = sim.add_sink(static_cast<NodeId>(p.dst));
      UdpAgent& agent = sim.add_udp_agent(static_cast<NodeId>(p.src), 1);
      sim.connect(agent, sink);
      agents[key] = &agent;
    }
  }
  for (const auto& p : sc.packets) {
    UdpAgent* agent = agents[{p.src, p.dst}];
    std::uint32_t size = p.size;
    sim.scheduler().schedule(SimTime::from_nanos(p.at_ns), [agent, size] { agent->send(size); });
  }
  sim.run(SimTime::seconds(1'000'000));
  return watch.out;
}

MicroScenario random_micro(std::mt19937_64& rng) {
  MicroScenario sc;
  // Two or three of the three possible links, always connected.
  int missing = static_cast<int>(rng() % 4);  // 3 = triangle
  const std::pair<int, int> pairs[3] = {{0, 1}, {0, 2}, {1, 2}};
  static const std::uint64_t bandwidths[] = {64'000, 1'000'000, 1'500'000, 10'000'000, 100'000'000, 3'000'001};
  for (int i = 0; i < 3; ++i) {
    if (i == missing) continue;
    MicroLink& l = sc.links[pairs[i].first][pairs[i].second];
    l.bw = bandwidths[rng() % 6];
    l.delay_ns = rng() % 3 == 0 ? 0 : static_cast<std::int64_t>(rng() % 20'000'000);
    l.limit = 1 + rng() % 4;
  }
  std::size_t n = 1 + rng() % 20;
  for (std::size_t i = 0; i < n; ++i) {
    MicroPacket p;
    p.src = static_cast<int>(rng() % 3);
    p.dst = static_cast<int>((p.src + 1 + static_cast<int>(rng() % 2)) % 3);
    static const std::uint32_t sizes[] = {40, 125, 576, 1000, 1500};
    p.size = rng() % 2 ? sizes[rng() % 5] : static_cast<std::uint32_t>(1 + rng() % 1500);
    // Coarse grid half the time so simultaneous events are common.
    p.at_ns = rng() % 2 ? static_cast<std::int64_t>(rng() % 5) * 1'000'000 : static_cast<std::int64_t>(rng() % 50'000'000);
    sc.packets.push_back(p);
  }
  return sc;
}

Verdict oracle_equivalence() {
  Verdict v;
  std::mt19937_64 rng(31337);
  std::size_t delivered = 0, dropped = 0;
  for (int i = 0; i < 1000; ++i) {
    MicroScenario sc = random_micro(rng);
    MicroOutcome ref = reference_model(sc);
    MicroOutcome sim = simulator_model(sc);
    v.require(ref == sim, "scenario " + std::to_string(i) + " differs");
    delivered += ref.delivered.size();
    dropped += ref.dropped.size();
  }
  v.require(dropped > 0, "no drops exercised");
  if (v.pass) {
    v.detail = "1000 scenarios: " + std::to_string(delivered) + " delivery times and " + std::to_string(dropped) +
               " drops identical";
  }
  return v;
}

// 9 ----------------------------------------------------------------------

Verdict validate_goldens() {
  Verdict v;
  auto verdicts = validate_directory(default_golden_dir());
  v.require(!verdicts.empty(), "no golden scenarios");
  for (const auto& s : verdicts) v.require(s.pass, s.name + " FAIL");
  if (!v.pass) return v;

  std::map<std::string, std::vector<Expectation>> expected;
  std::map<std::string, std::string> baseline_digest;
  for (const auto& name : golden_names()) {
    expected[name] = parse_expectations(read_text(default_golden_dir() / (name + ".expected")));
    baseline_digest[name] = run_scenario(golden(name), RunOptions{std::nullopt, std::nullopt, nullptr, false}).trace_digest;
  }

  // Every single-parameter change to a link's queue limit or delay. A change
  // that leaves the trace untouched (a queue that never fills) cannot be seen
  // by any output and is only counted.
  std::size_t total = 0, observable = 0, flipped = 0;
  bool overload_limit_flips = true;
  for (const auto& name : golden_names()) {
    ScenarioSpec base = golden(name);
    for (std::size_t l = 0; l < base.links.size(); ++l) {
      std::vector<std::pair<std::string, ScenarioSpec>> variants;
      for (int d : {-1, +1}) {
        ScenarioSpec s = base;
        if (d < 0 && s.links[l].queue.limit < 2) continue;
        s.links[l].queue.limit = d < 0 ? s.links[l].queue.limit - 1 : s.links[l].queue.limit + 1;
        variants.emplace_back("limit" + std::string(d < 0 ? "-1" : "+1"), s);
      }
      for (int d : {-1, +1}) {
        ScenarioSpec s = base;
        if (d < 0 && s.links[l].delay < 1_ms) continue;
        s.links[l].delay = d < 0 ? s.links[l].delay - 1_ms : s.links[l].delay + 1_ms;
        variants.emplace_back("delay" + std::string(d < 0 ? "-1ms" : "+1ms"), s);
      }
      for (const auto& [what, s] : variants) {
        ++total;
        // The perturbed file goes through the same text path as validate.
        ScenarioSpec reparsed = parse_scenario(render_scenario(s));
        RunResult r = run_scenario(reparsed, RunOptions{std::nullopt, std::nullopt, nullptr, false});
        bool fails = !check_result(name, r, expected[name]).pass;
        bool visible = r.trace_digest != baseline_digest[name];
        if (visible) ++observable;
        if (fails) ++flipped;
        std::string tag = name + " link " + std::to_string(l) + " " + what;
        v.require(!visible || fails, tag + " changed the run but still PASSes");
        v.require(visible || !fails, tag + " FAILs without changing the run");
        if (name == "overload" && what.rfind("limit", 0) == 0 && base.links[l].queue.limit == 5) {
          overload_limit_flips = overload_limit_flips && fails;
        }
      }
    }
  }
  v.require(overload_limit_flips, "overload bottleneck limit change not detected");
  if (v.pass) {
    v.detail = std::to_string(verdicts.size()) + " goldens PASS; " + std::to_string(total) + " perturbations, " +
               std::to_string(observable) + " observable, " + std::to_string(flipped) + " flipped to FAIL";
  }
  return v;
}

}  // namespace

int main() {
  Workspace ws;
  std::vector<std::pair<std::string, std::function<Verdict()>>> criteria;
  std::vector<GoldenRun> first, second;
  auto goldens = [&] {
    if (first.empty()) {
      first = run_goldens(ws, "a");
      second = run_goldens(ws, "b");
    }
  };

  criteria.emplace_back("utilization formula fidelity", [] { return utilization_fidelity(); });
  criteria.emplace_back("deterministic CBR golden scenario", [&] { return cbr_golden(ws); });
  criteria.emplace_back("mixed-traffic scenario over 10 seeds", [] { return mixed_traffic_seeds(); });
  criteria.emplace_back("determinism", [&] {
    goldens();
    return determinism(first, second);
  });
  criteria.emplace_back("conservation suite", [&] {
    goldens();
    return conservation(first);
  });
  criteria.emplace_back("SFQ fairness and DropTail FIFO order", [] { return sfq_fairness(); });
  criteria.emplace_back("online/offline equivalence", [&] {
    goldens();
    return online_offline(first);
  });
  criteria.emplace_back("oracle equivalence at micro scale", [] { return oracle_equivalence(); });
  criteria.emplace_back("validate subcommand and perturbations", [] { return validate_goldens(); });

  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = std::string("exception: ") + e.what();
    }
    if (v.failures > 5) v.detail += "; +" + std::to_string(v.failures - 5) + " more";
    char timing[32];
    std::snprintf(timing, sizeof timing, " [%.2f s]", seconds_since(t0));
    std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first << " -- " << v.detail
              << timing << std::endl;
    failed += v.pass ? 0 : 1;
  }
  std::cout << (failed == 0 ? "all criteria pass" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
