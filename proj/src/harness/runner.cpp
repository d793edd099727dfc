#include "ewsn/harness/runner.hpp"

#include <fstream>
#include <memory>
#include <sstream>

#include <fmt/format.h>

#include "ewsn/analytics/csv.hpp"
#include "ewsn/analytics/stats.hpp"
#include "ewsn/harness/topologies.hpp"
#include "ewsn/radio/mobility.hpp"
#include "ewsn/sofa/network.hpp"
#include "ewsn/staffetta/network.hpp"

namespace ewsn::harness {

namespace fs = std::filesystem;
using analytics::csv_real;

namespace {

std::vector<radio::TraceRow> load_trace(const std::string& file, const radio::Arena& arena, std::size_t nodes) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open trace file '" + file + "'");
  return radio::parse_mobility_trace(in, arena, nodes);
}

radio::Arena arena_of(const Scenario& s) { return {s.topology.arena_m, s.topology.arena_m}; }

// Same stream every time, so the topology and the walkers agree.
std::vector<radio::WaypointStart> waypoint_starts(const Scenario& s) {
  sim::RngStream rng(s.seed, kNoNode, sim::StreamPurpose::placement);
  return radio::sample_waypoint_steady_state(static_cast<std::size_t>(s.topology.nodes), arena_of(s), rng);
}

std::string result_name(sofa::ExchangeResult r) {
  switch (r) {
    case sofa::ExchangeResult::success: return "success";
    case sofa::ExchangeResult::negative_agreement: return "negative_agreement";
    case sofa::ExchangeResult::disagreement: return "disagreement";
    case sofa::ExchangeResult::aborted: return "aborted";
  }
  return "?";
}

std::string opt_cell(const std::optional<double>& v) { return analytics::csv_real(v); }

struct Mover {
  std::unique_ptr<radio::Mobility> mobility;
  void attach(const Scenario& s, radio::Topology& topo, sim::Engine& engine) {
    if (s.mobility.kind == radio::MobilityKind::stationary) return;
    radio::MobilityConfig cfg;
    cfg.kind = s.mobility.kind;
    cfg.speed_mps = s.mobility.speed_mps;
    cfg.pause_s = s.mobility.pause_s;
    cfg.trace_file = s.mobility.trace_file;
    cfg.update_period = SimTime::from_ms(s.mobility.update_ms);
    if (cfg.kind == radio::MobilityKind::trace)
      mobility = std::make_unique<radio::Mobility>(topo, cfg, s.seed,
                                                   load_trace(cfg.trace_file, topo.arena(), topo.size()));
    else
      mobility = std::make_unique<radio::Mobility>(topo, cfg, s.seed);
    if (cfg.kind == radio::MobilityKind::random_waypoint && s.topology.waypoint_placement) {
      const auto starts = waypoint_starts(s);
      for (NodeId i = 0; i < starts.size(); ++i) mobility->set_waypoint(i, starts[i].target);
    }
    mobility->attach(engine, SimTime::from_s(s.duration_s));
  }
};

RunResult run_sofa(const Scenario& s, radio::Topology& topo) {
  sofa::SofaOptions o;
  o.mac.W = SimTime::from_s(s.mac.W_s);
  o.mac.T = SimTime::from_s(s.mac.T_s);
  o.mac.listen = SimTime::from_ms(s.effective_listen_ms());
  o.mac.t_b = SimTime::from_ms(s.mac.t_b_ms);
  o.mac.beacon_air = SimTime::from_ms(s.mac.beacon_air_ms);
  o.mac.ack_air = SimTime::from_ms(s.mac.ack_air_ms);
  o.mac.data_air = SimTime::from_ms(s.mac.data_air_ms);
  o.mac.select_air = SimTime::from_ms(s.mac.select_air_ms);
  o.mac.mode = s.protocol == ProtocolKind::lpl_unicast ? sofa::MacMode::lpl_unicast : sofa::MacMode::sofa;
  o.mac.ack_contention = s.mac.retransmit ? sofa::AckContention::retransmit : sofa::AckContention::sleep_on_collision;
  o.mac.retransmit_p = s.mac.retransmit_p;
  o.faults.link_loss = s.faults.link_loss;
  o.faults.final_ack_loss = s.faults.final_ack_loss;
  o.faults.data_loss = s.faults.data_loss;
  o.faults.select_loss = s.faults.select_loss;
  o.faults.delay_epsilon = SimTime::from_ms(s.faults.delay_epsilon_ms);
  o.estimator = s.estimator.enabled;
  o.estimator_cfg.window = static_cast<std::size_t>(s.estimator.w);
  o.estimator_cfg.alpha = s.estimator.alpha;
  o.estimator_cfg.delta4 = o.mac.ack_air;
  o.warmup = SimTime::from_s(s.warmup_s);

  sofa::SofaNetwork net(o, topo, s.seed);
  Mover mover;
  mover.attach(s, topo, net.engine());
  const auto end = SimTime::from_s(s.duration_s);
  analytics::RunLogs logs;
  logs.metrics = net.run_until(end);

  RunResult r;
  std::ostringstream ex;
  ex << "time_us,initiator,responder,result,first_beacon_us,naive_us,corrected_us\n";
  std::vector<double> corrected;
  for (const auto& e : net.exchanges()) {
    ex << fmt::format("{},{},{},{},{},{},{}\n", e.time.us(), e.initiator,
                      e.responder == kNoNode ? std::string{} : std::to_string(e.responder), result_name(e.result),
                      e.first_beacon.us(), e.t_rendezvous_naive.us(),
                      e.corrected ? std::to_string(e.corrected->us()) : std::string{});
    if (e.time >= o.warmup && e.result != sofa::ExchangeResult::aborted && e.corrected)
      corrected.push_back(static_cast<double>(e.corrected->us()));
  }
  r.files["exchanges.csv"] = ex.str();

  const bool ideal = s.faults.link_loss == 0 && s.faults.delay_epsilon_ms == 0 &&
                     s.mobility.kind == radio::MobilityKind::stationary;
  if (s.topology.kind == TopologyKind::clique && s.protocol == ProtocolKind::sofa && ideal) {
    const int n = static_cast<int>(topo.size()) - 1;
    logs.rendezvous = analytics::RendezvousLog{o.mac.W, n, corrected};
    analytics::CollisionLog c{n, o.mac.t_b, o.mac.W, 0, 0};
    for (const auto& t : net.strobe_trials())
      if (t.first_responded_beacon >= 1) {
        ++c.trials;
        if (t.responders >= 2) ++c.collisions;
      }
    logs.collisions = c;
  }

  if (s.estimator.enabled) {
    std::ostringstream es;
    es << "time_us,node,n_true,n_observed,n_hat_t,n_hat_s,n_hat\n";
    analytics::EstimateLog el{static_cast<int>(topo.size()) - 1, o.mac.W, o.faults.delay_epsilon, {}, {}};
    // one error per full window of fresh samples, per node
    std::vector<std::size_t> fresh(topo.size(), 0);
    for (const auto& e : net.estimates()) {
      es << fmt::format("{},{},{},{},{},{},{}\n", e.time.us(), e.node, e.n_true, e.n_observed, opt_cell(e.n_hat_t),
                        opt_cell(e.n_hat_s), opt_cell(e.n_hat));
      if (!e.n_hat_t || e.n_true == 0) continue;
      if (++fresh[e.node] % static_cast<std::size_t>(s.estimator.w) != 0 || e.time < o.warmup) continue;
      el.relative_errors.push_back((*e.n_hat_t - static_cast<double>(e.n_true)) / static_cast<double>(e.n_true));
    }
    r.files["estimates.csv"] = es.str();
    logs.estimates = std::move(el);
  }
  r.summary = analytics::summarize_run(logs);
  return r;
}

RunResult run_collection(const Scenario& s, radio::Topology& topo) {
  staffetta::CollectionOptions o;
  o.mac.listen = SimTime::from_ms(s.effective_listen_ms());
  o.mac.t_b = SimTime::from_ms(s.mac.t_b_ms);
  o.mac.beacon_air = SimTime::from_ms(s.mac.beacon_air_ms);
  o.mac.ack_air = SimTime::from_ms(s.mac.ack_air_ms);
  o.mac.select_air = SimTime::from_ms(s.mac.select_air_ms);
  o.mac.retransmit_p = s.mac.retransmit_p;
  o.faults.link_loss = s.faults.link_loss;
  o.faults.select_loss = s.faults.select_loss;
  o.metric = s.collection.metric;
  o.policy.kind = s.collection.policy;
  o.policy.fixed_hz = s.collection.fixed_hz;
  o.policy.dc_max = s.collection.dc_max;
  o.policy.omega_min = s.collection.omega_min;
  o.sinks.assign(s.collection.sinks.begin(), s.collection.sinks.end());
  o.sink_period = SimTime::from_s(s.collection.sink_period_s);
  o.gen_period = SimTime::from_s(s.collection.gen_period_s);
  if (s.collection.traffic_until_s > 0) o.traffic_until = SimTime::from_s(s.collection.traffic_until_s);
  o.queue_capacity = static_cast<std::size_t>(s.collection.queue_capacity);
  o.warmup = SimTime::from_s(s.warmup_s);

  staffetta::CollectionNetwork net(o, topo, s.seed);
  Mover mover;
  mover.attach(s, topo, net.engine());
  analytics::RunLogs logs;
  logs.metrics = net.run_until(SimTime::from_s(s.duration_s));

  RunResult r;
  std::ostringstream pk;
  pk << "time_us,origin,seq,event,holder,hops,latency_us\n";
  for (const auto& e : net.packet_log())
    pk << fmt::format("{},{},{},{},{},{},{}\n", e.time.us(), e.origin, e.seq, staffetta::to_string(e.event), e.holder,
                      e.hops, e.latency ? std::to_string(e.latency->us()) : std::string{});
  r.files["packets.csv"] = pk.str();

  std::ostringstream om;
  om << "time_us,node,omega_hz,floored\n";
  for (const auto& e : net.omega_samples())
    om << fmt::format("{},{},{},{}\n", e.time.us(), e.node, csv_real(e.omega), e.floored ? 1 : 0);
  r.files["omega.csv"] = om.str();

  std::ostringstream ho;
  ho << "time_us,from,to,rendezvous_us,forwarding_delay_us\n";
  for (const auto& h : net.handoffs())
    ho << fmt::format("{},{},{},{},{}\n", h.time.us(), h.from, h.to, h.rendezvous.us(), h.forwarding_delay.us());
  r.files["handoffs.csv"] = ho.str();

  std::ostringstream sk;
  sk << "time_us,sink\n";
  for (const auto& c : net.sink_changes()) sk << fmt::format("{},{}\n", c.time.us(), c.sink);
  r.files["sinks.csv"] = sk.str();

  if (s.topology.kind == TopologyKind::chain && s.collection.policy == staffetta::PolicyKind::staffetta &&
      s.collection.sink_period_s == 0) {
    std::vector<std::vector<double>> by_layer(static_cast<std::size_t>(s.topology.layers));
    for (const auto& e : net.omega_samples()) {
      if (e.time < o.warmup || e.node == net.sink()) continue;
      by_layer[static_cast<std::size_t>(chain_layer(e.node, s.topology.width) - 1)].push_back(e.omega);
    }
    analytics::GradientLog g{s.collection.dc_max, s.topology.width, {}};
    for (auto& v : by_layer)
      if (auto m = analytics::median(v)) g.median_omega_by_hop.push_back(*m);
    logs.gradient = std::move(g);
  }
  r.summary = analytics::summarize_run(logs);
  return r;
}

}  // namespace

radio::Topology build_topology(const Scenario& s) {
  const auto& t = s.topology;
  switch (t.kind) {
    case TopologyKind::clique:
      return radio::Topology::clique(static_cast<std::size_t>(t.nodes));
    case TopologyKind::geometric: {
      if (t.waypoint_placement) {
        std::vector<radio::Position> pos;
        for (const auto& st : waypoint_starts(s)) pos.push_back(st.pos);
        return radio::Topology::geometric(std::move(pos), arena_of(s), t.range_m);
      }
      sim::RngStream rng(s.seed, kNoNode, sim::StreamPurpose::placement);
      return radio::Topology::random_geometric(static_cast<std::size_t>(t.nodes), arena_of(s), t.range_m, rng);
    }
    case TopologyKind::trace: {
      const auto rows = load_trace(t.file, arena_of(s), static_cast<std::size_t>(t.nodes));
      std::vector<radio::Position> pos(static_cast<std::size_t>(t.nodes));
      std::vector<bool> seen(pos.size(), false);
      for (const auto& row : rows) {
        if (row.time_s != rows.front().time_s) break;
        pos[row.node] = row.pos;
        seen[row.node] = true;
      }
      for (std::size_t i = 0; i < seen.size(); ++i)
        if (!seen[i]) throw ConfigError(fmt::format("trace '{}' has no initial position for node {}", t.file, i));
      return radio::Topology::geometric(std::move(pos), arena_of(s), t.range_m);
    }
    case TopologyKind::chain:
      return chain_of_cliques(t.layers, t.width);
  }
  throw ConfigError("unknown topology kind");
}

RunResult execute_scenario(const Scenario& s) {
  auto topo = build_topology(s);
  RunResult r = s.protocol == ProtocolKind::collection ? run_collection(s, topo) : run_sofa(s, topo);
  r.files["scenario.ini"] = serialize_scenario(s);
  std::ostringstream sum, nodes, oracle;
  analytics::write_summary_csv(sum, r.summary);
  analytics::write_nodes_csv(nodes, r.summary.metrics);
  analytics::write_oracle_csv(oracle, r.summary.report);
  r.files["summary.csv"] = sum.str();
  r.files["nodes.csv"] = nodes.str();
  r.files["oracle.csv"] = oracle.str();
  return r;
}

void write_outputs(const OutputFiles& files, const fs::path& out_dir) {
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw std::runtime_error("cannot create '" + out_dir.string() + "': " + ec.message());
  for (const auto& [name, body] : files) {
    const auto path = out_dir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << body;
    out.close();
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  }
}

RunResult run_scenario(const Scenario& s, const fs::path& out_dir, bool force) {
  if (fs::exists(out_dir) && !force) {
    if (!fs::is_directory(out_dir)) throw ConfigError("'" + out_dir.string() + "' exists and is not a directory");
    if (!fs::is_empty(out_dir))
      throw ConfigError("output directory '" + out_dir.string() + "' is not empty (use --force to overwrite)");
  }
  auto r = execute_scenario(s);
  write_outputs(r.files, out_dir);
  return r;
}

}  // namespace ewsn::harness
