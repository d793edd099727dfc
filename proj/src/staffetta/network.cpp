#include "ewsn/staffetta/network.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "ewsn/errors.hpp"

namespace ewsn::staffetta {

using radio::RxOutcome;
using Tx = radio::Transmission<CFrame>;

void CollectionMac::validate() const {
  if (beacon_air <= SimTime::zero() || ack_air <= SimTime::zero() || select_air <= SimTime::zero())
    throw ConfigError("airtimes must be positive");
  if (t_b < beacon_air + ack_air) throw ConfigError("beacon period must leave room for an ack");
  if (listen < beacon_air + t_b) throw ConfigError("listen window must cover one beacon period");
  if (strobe_timeout <= t_b) throw ConfigError("strobe timeout must exceed the beacon period");
  if (!(retransmit_p > 0 && retransmit_p <= 1)) throw ConfigError("ack retransmit probability must be in (0,1]");
  if (max_rounds < 1) throw ConfigError("max contention rounds must be >= 1");
}

void CollectionOptions::validate(std::size_t nodes) const {
  mac.validate();
  channel.validate();
  faults.validate();
  policy.validate();
  for (const auto& [n, p] : policy_overrides) {
    if (n >= nodes) throw ConfigError("policy override for unknown node " + std::to_string(n));
    p.validate();
  }
  if (sinks.empty()) throw ConfigError("collection needs a sink");
  for (NodeId s : sinks) {
    if (s >= nodes) throw ConfigError("sink " + std::to_string(s) + " out of range");
    if (std::find(terminals.begin(), terminals.end(), s) != terminals.end())
      throw ConfigError("node " + std::to_string(s) + " cannot be both sink and terminal");
  }
  if (sinks.size() > 1 && sink_period <= SimTime::zero()) throw ConfigError("several sinks need a sink period");
  for (NodeId t : terminals)
    if (t >= nodes) throw ConfigError("terminal " + std::to_string(t) + " out of range");
  for (NodeId s : sources)
    if (s >= nodes) throw ConfigError("source " + std::to_string(s) + " out of range");
  if (gen_period < SimTime::zero()) throw ConfigError("generation period must be >= 0");
  if (queue_capacity == 0) throw ConfigError("queue capacity must be >= 1");
  if (edc_margin < 0) throw ConfigError("EDC margin must be >= 0");
  if (omega_sample_period <= SimTime::zero()) throw ConfigError("omega sample period must be positive");
  if (warmup < SimTime::zero()) throw ConfigError("warm-up must be >= 0");
}

std::string to_string(PacketEvent e) {
  switch (e) {
    case PacketEvent::generated: return "generated";
    case PacketEvent::forwarded: return "forwarded";
    case PacketEvent::delivered: return "delivered";
    case PacketEvent::dropped: return "dropped";
    case PacketEvent::duplicate: return "duplicate";
  }
  return "?";
}

struct CollectionNetwork::Node {
  Role role = Role::normal;
  CPhase phase = CPhase::sleeping;
  WakeupPolicy policy;
  std::deque<CollectionPacket> relay;
  std::deque<CollectionPacket> local;
  bool source = false;
  std::uint32_t next_seq = 0;
  std::uint64_t epoch = 0;       // guards state-machine timers
  std::uint64_t wake_token = 0;  // guards the wake-up chain
  SimTime wake_time;
  // initiator
  SimTime strobe_start;
  std::uint64_t strobe = 0;
  bool sending_relay = false;
  bool selecting = false;
  NodeId chosen = kNoNode;
  SimTime rendezvous;
  // responder
  NodeId peer = kNoNode;
  std::uint64_t peer_strobe = 0;
  CollectionPacket held;
  SimTime ack_end;
  int rounds = 0;
  double chosen_metric = 0;
  // EDC: SMA of (forwarding delay + forwarder's EDC), seconds
  std::deque<double> edc;
  double edc_sum = 0;
  sim::RngStream wake_rng;
  sim::RngStream mac_rng;
  sim::RngStream traffic_rng;

  Node(std::uint64_t seed, NodeId id, PolicyConfig pc)
      : policy(pc),
        wake_rng(seed, id, sim::StreamPurpose::wakeup),
        mac_rng(seed, id, sim::StreamPurpose::mac),
        traffic_rng(seed, id, sim::StreamPurpose::traffic) {}

  bool always_on() const { return role == Role::sink || policy.always_on(); }
};

CollectionNetwork::CollectionNetwork(CollectionOptions opt, radio::Topology& topo, std::uint64_t seed)
    : opt_(std::move(opt)), topo_(topo), seed_(seed), fault_rng_(seed, kNoNode, sim::StreamPurpose::faults) {
  opt_.validate(topo.size());
  opt_.channel.link_loss = std::max(opt_.channel.link_loss, opt_.faults.link_loss);
  medium_ = std::make_unique<radio::Medium<CFrame>>(engine_, topo_, opt_.channel, seed);
  nodes_.reserve(topo.size());
  for (NodeId i = 0; i < topo.size(); ++i) {
    auto it = opt_.policy_overrides.find(i);
    nodes_.emplace_back(seed, i, it == opt_.policy_overrides.end() ? opt_.policy : it->second);
  }
  for (NodeId t : opt_.terminals) nodes_[t].role = Role::terminal;
  for (NodeId i = 0; i < nodes_.size(); ++i) {
    if (opt_.sources.empty()) {
      nodes_[i].source = nodes_[i].role == Role::normal;
    }
  }
  for (NodeId s : opt_.sources) nodes_[s].source = nodes_[s].role != Role::terminal;
  medium_->on_receive([this](NodeId n, const Tx& tx, RxOutcome o) { on_rx(n, tx, o); });
  medium_->on_tx_done([this](const Tx& tx) { on_tx_done(tx); });
  medium_->set_drop_filter([this](NodeId, const Tx& tx) {
    return tx.frame.kind == CFrameKind::select && fault_rng_.bernoulli(opt_.faults.select_loss);
  });
  engine_.metrics().nodes.assign(topo.size(), {});
}

CollectionNetwork::~CollectionNetwork() = default;

void CollectionNetwork::start() {
  if (started_) return;
  started_ = true;
  const SimTime now = engine_.now();
  sink_idx_ = 0;
  make_sink(opt_.sinks[0]);
  for (NodeId i = 0; i < nodes_.size(); ++i) {
    auto& nd = nodes_[i];
    if (nd.role == Role::sink) {
      // no wake-up chain while it is the sink
    } else if (nd.always_on()) {
      go_idle(i);
    } else {
      // random phase inside the first period
      const SimTime first = SimTime::from_us(static_cast<std::int64_t>(nd.wake_rng.uniform01() * (1e6 / nd.policy.frequency())));
      schedule_wake(i, now + first);
    }
    if (!nd.source) continue;
    for (std::uint32_t k = 0; k < opt_.initial_backlog; ++k) generate(i);
    if (opt_.gen_period > SimTime::zero()) {
      const SimTime first = SimTime::from_us(static_cast<std::int64_t>(nd.traffic_rng.uniform01() * opt_.gen_period.us()));
      engine_.schedule(now + first, i, sim::EventKind::app_send, [this, i] { app_tick(i); });
    }
  }
  if (opt_.sinks.size() > 1) {
    engine_.schedule(now + opt_.sink_period, kNoNode, sim::EventKind::control, [this] { migrate_sink(); });
  }
  engine_.schedule(now, kNoNode, sim::EventKind::control, [this] { sample_omega(); });
  if (opt_.warmup > now) {
    engine_.schedule(opt_.warmup, kNoNode, sim::EventKind::control, [this] { snapshot_warmup(); });
  } else {
    snapshot_warmup();
  }
}

void CollectionNetwork::snapshot_warmup() {
  radio_at_warmup_.resize(nodes_.size());
  for (NodeId i = 0; i < nodes_.size(); ++i) radio_at_warmup_[i] = medium_->radio_on_time(i);
}

analytics::RunMetrics CollectionNetwork::run_until(SimTime end) {
  start();
  engine_.run_until(end);
  auto& m = engine_.metrics();
  m.start = std::min(opt_.warmup, end);
  for (NodeId i = 0; i < nodes_.size(); ++i) {
    SimTime base = radio_at_warmup_.empty() ? SimTime::zero() : radio_at_warmup_[i];
    if (end <= opt_.warmup) base = medium_->radio_on_time(i);
    m.nodes[i].radio_on = medium_->radio_on_time(i) - base;
    m.nodes[i].always_on = nodes_[i].always_on();
  }
  m.packets = delivered_;
  m.generated = m.delivered = m.dropped = m.in_queue_at_end = m.lost = 0;
  for (const auto& [k, st] : packets_) {
    if (!st.counted) continue;
    ++m.generated;
    if (st.delivered) {
      ++m.delivered;
    } else if (st.copies > 0) {
      ++m.in_queue_at_end;
    } else if (st.dropped) {
      ++m.dropped;
    } else {
      ++m.lost;  // in flight at the end
    }
  }
  m.duplicates = duplicates_;
  return m;
}

std::uint64_t CollectionNetwork::bump(NodeId n) { return ++nodes_[n].epoch; }

void CollectionNetwork::at(NodeId n, SimTime when, std::uint64_t epoch, void (CollectionNetwork::*fn)(NodeId, std::uint64_t)) {
  engine_.schedule(when, n, sim::EventKind::timer, [this, n, epoch, fn] { (this->*fn)(n, epoch); });
}

void CollectionNetwork::transmit(NodeId n, CFrame f, SimTime air) {
  f.src = n;
  medium_->start_transmission(n, std::move(f), air);
}

bool CollectionNetwork::absorbing(NodeId n) const {
  return nodes_[n].role == Role::sink || nodes_[n].role == Role::terminal;
}

std::size_t CollectionNetwork::queue_size(NodeId n) const { return nodes_[n].relay.size() + nodes_[n].local.size(); }

double CollectionNetwork::routing_metric(NodeId n) const {
  const auto& nd = nodes_.at(n);
  constexpr double inf = std::numeric_limits<double>::infinity();
  switch (opt_.metric) {
    case MetricKind::edc:
      if (absorbing(n)) return 0.0;
      if (nd.edc.empty()) return inf;
      return nd.edc_sum / static_cast<double>(nd.edc.size());
    case MetricKind::qb:
      return absorbing(n) ? 0.0 : static_cast<double>(queue_size(n));
    case MetricKind::rw:
      return 0.0;
    case MetricKind::direct:
      return absorbing(n) ? inf : nd.policy.frequency();
  }
  return 0.0;
}

CollectionNodeView CollectionNetwork::view(NodeId n) const {
  const auto& nd = nodes_.at(n);
  CollectionNodeView v;
  v.role = nd.role;
  v.phase = nd.phase;
  v.omega = nd.role == Role::sink ? std::numeric_limits<double>::infinity() : nd.policy.frequency();
  v.forwarding_delay = nd.policy.forwarding_delay();
  v.queue = queue_size(n);
  return v;
}

const WakeupPolicy& CollectionNetwork::policy(NodeId n) const { return nodes_.at(n).policy; }

bool CollectionNetwork::inject_packet(NodeId n) {
  if (n >= nodes_.size()) throw ProtocolError("unknown node " + std::to_string(n));
  const std::size_t before = log_.size();
  generate(n);
  return log_.size() == before || log_.back().event != PacketEvent::dropped;
}

// ---- wake-up chain ----

void CollectionNetwork::schedule_wake(NodeId n, SimTime when) {
  const std::uint64_t token = ++nodes_[n].wake_token;
  engine_.schedule(when, n, sim::EventKind::wakeup, [this, n, token] { wake(n, token); });
}

void CollectionNetwork::wake(NodeId n, std::uint64_t token) {
  auto& nd = nodes_[n];
  if (token != nd.wake_token || nd.always_on()) return;
  schedule_wake(n, engine_.now() + nd.policy.next_interval(nd.wake_rng));
  auto& nm = engine_.metrics().nodes[n];
  if (nd.phase != CPhase::sleeping) {
    if (counting()) ++nm.skipped_wakeups;
    return;
  }
  if (counting()) ++nm.wakeups;
  const std::uint64_t e = bump(n);
  nd.phase = CPhase::listening;
  nd.wake_time = engine_.now();
  medium_->set_radio(n, true);
  at(n, engine_.now() + opt_.mac.listen, e, &CollectionNetwork::listen_check);
}

void CollectionNetwork::listen_check(NodeId n, std::uint64_t epoch) {
  auto& nd = nodes_[n];
  if (nd.epoch != epoch || nd.phase != CPhase::listening) return;
  if (medium_->channel_busy(n)) {
    at(n, medium_->busy_until(n), epoch, &CollectionNetwork::listen_check);
    return;
  }
  if (medium_->energy_since(n, nd.wake_time) || queue_size(n) == 0 || absorbing(n)) {
    go_idle(n);
    return;
  }
  start_strobe(n);
}

void CollectionNetwork::go_idle(NodeId n) {
  auto& nd = nodes_[n];
  const std::uint64_t e = bump(n);
  nd.peer = kNoNode;
  nd.selecting = false;
  if (nd.always_on()) {
    nd.phase = CPhase::idle;
    medium_->set_radio(n, true);
    if (nd.role != Role::sink && queue_size(n) > 0) at(n, engine_.now(), e, &CollectionNetwork::try_strobe);
  } else {
    nd.phase = CPhase::sleeping;
    medium_->set_radio(n, false);
  }
}

void CollectionNetwork::try_strobe(NodeId n, std::uint64_t epoch) {
  auto& nd = nodes_[n];
  if (nd.epoch != epoch || nd.phase != CPhase::idle || queue_size(n) == 0 || absorbing(n)) return;
  if (medium_->transmitting(n)) {
    at(n, engine_.now() + SimTime::from_us(100), epoch, &CollectionNetwork::try_strobe);
    return;
  }
  if (medium_->channel_busy(n)) {
    at(n, medium_->busy_until(n), epoch, &CollectionNetwork::try_strobe);
    return;
  }
  nd.wake_time = engine_.now();
  start_strobe(n);
}

// ---- initiator ----

void CollectionNetwork::start_strobe(NodeId n) {
  auto& nd = nodes_[n];
  const std::uint64_t e = bump(n);
  nd.phase = CPhase::strobing;
  nd.selecting = false;
  nd.strobe = next_strobe_++;
  nd.strobe_start = engine_.now();
  nd.sending_relay = !nd.relay.empty();
  if (counting()) ++engine_.metrics().nodes[n].strobes;
  send_beacon(n, e);
}

void CollectionNetwork::send_beacon(NodeId n, std::uint64_t epoch) {
  auto& nd = nodes_[n];
  if (nd.epoch != epoch || nd.phase != CPhase::strobing) return;
  if (engine_.now() - nd.strobe_start >= opt_.mac.strobe_timeout) {
    give_up(n);
    return;
  }
  CFrame f;
  f.kind = CFrameKind::beacon;
  f.strobe = nd.strobe;
  f.pkt = nd.sending_relay ? nd.relay.front() : nd.local.front();
  f.metric = routing_metric(n);
  transmit(n, f, opt_.mac.beacon_air);
  at(n, engine_.now() + opt_.mac.t_b, epoch, &CollectionNetwork::send_beacon);
}

void CollectionNetwork::give_up(NodeId n) {
  auto& nd = nodes_[n];
  // A strobe nobody answered still burned radio time, so it counts as a forwarding-delay
  // observation (idle wake-ups do not). Without this a node with no viable forwarder keeps
  // its old frequency forever and blows the budget.
  const SimTime spent = engine_.now() - nd.wake_time;
  if (counting()) ++engine_.metrics().nodes[n].aborted;
  // the routing metric learns the path is at least that slow, otherwise a stale low EDC
  // nobody can beat never heals
  if (!nd.edc.empty()) push_edc(n, spent.seconds());
  if (!nd.always_on()) {
    nd.policy.update_forwarding_delay(spent);
    if (nd.policy.config().kind == PolicyKind::staffetta) schedule_wake(n, engine_.now() + nd.policy.next_interval(nd.wake_rng));
  }
  go_idle(n);
}

void CollectionNetwork::push_edc(NodeId n, double v) {
  auto& nd = nodes_[n];
  nd.edc.push_back(v);
  nd.edc_sum += v;
  if (nd.edc.size() > nd.policy.config().sma_window) {
    nd.edc_sum -= nd.edc.front();
    nd.edc.pop_front();
  }
}

void CollectionNetwork::handle_ack(NodeId n, const CFrame& f) {
  auto& nd = nodes_[n];
  if (nd.phase != CPhase::strobing || nd.selecting || f.dst != n || f.strobe != nd.strobe) return;
  bump(n);  // stops the beacon train
  nd.selecting = true;
  nd.chosen = f.src;
  nd.chosen_metric = f.metric;
  nd.rendezvous = engine_.now() - nd.strobe_start;
  CFrame s;
  s.kind = CFrameKind::select;
  s.dst = f.src;
  s.strobe = nd.strobe;
  transmit(n, s, opt_.mac.select_air);
}

void CollectionNetwork::on_tx_done(const Tx& tx) {
  if (tx.frame.kind == CFrameKind::select) handoff_done(tx.sender);
}

void CollectionNetwork::handoff_done(NodeId n) {
  auto& nd = nodes_[n];
  const SimTime now = engine_.now();
  auto& q = nd.sending_relay ? nd.relay : nd.local;
  if (q.empty()) throw ProtocolError("handoff with an empty queue");
  CollectionPacket p = q.front();
  q.pop_front();
  auto& st = packets_[key(p.origin, p.seq)];
  if (st.copies > 0) --st.copies;
  record(now, p, PacketEvent::forwarded, n);
  const SimTime delta_f = now - nd.wake_time;
  handoffs_.push_back(Handoff{now, n, nd.chosen, nd.rendezvous, delta_f});
  if (counting()) {
    ++engine_.metrics().nodes[n].forwarded;
    ++engine_.metrics().nodes[n].initiator_successes;
  }
  if (std::isfinite(nd.chosen_metric)) push_edc(n, delta_f.seconds() + nd.chosen_metric);
  if (!nd.always_on()) {
    nd.policy.update_forwarding_delay(delta_f);
    if (nd.policy.config().kind == PolicyKind::staffetta) schedule_wake(n, now + nd.policy.next_interval(nd.wake_rng));
  }
  go_idle(n);
}

// ---- responder ----

void CollectionNetwork::on_rx(NodeId n, const Tx& tx, RxOutcome o) {
  if (o != RxOutcome::decoded) return;
  switch (tx.frame.kind) {
    case CFrameKind::beacon: handle_beacon(n, tx.frame); return;
    case CFrameKind::ack: handle_ack(n, tx.frame); return;
    case CFrameKind::select: handle_select(n, tx.frame); return;
  }
}

void CollectionNetwork::handle_beacon(NodeId n, const CFrame& f) {
  auto& nd = nodes_[n];
  auto send_ack = [&] {
    CFrame a;
    a.kind = CFrameKind::ack;
    a.dst = f.src;
    a.strobe = f.strobe;
    a.metric = routing_metric(n);
    transmit(n, a, opt_.mac.ack_air);
    nd.ack_end = engine_.now() + opt_.mac.ack_air;
  };
  auto arm = [&] {
    const std::uint64_t e = bump(n);
    const SimTime wait = std::max(opt_.mac.ack_air + opt_.mac.select_air, opt_.mac.t_b) + SimTime::from_ms(1);
    at(n, engine_.now() + wait, e, &CollectionNetwork::select_timeout);
  };
  if (nd.phase == CPhase::awaiting_select) {
    if (f.src != nd.peer || f.strobe != nd.peer_strobe) return;
    // the initiator did not get our ack
    if (++nd.rounds > opt_.mac.max_rounds) {
      go_idle(n);
      return;
    }
    if (!medium_->transmitting(n) && nd.mac_rng.bernoulli(opt_.mac.retransmit_p)) send_ack();
    arm();
    return;
  }
  if (nd.phase != CPhase::listening && nd.phase != CPhase::idle) return;
  if (medium_->transmitting(n)) return;
  bool accept = absorbing(n);
  if (!accept && queue_size(n) < opt_.queue_capacity) {
    accept = accept_forwarder(opt_.metric, f.metric, routing_metric(n), opt_.edc_margin);
  }
  if (!accept) {
    if (nd.phase == CPhase::listening) go_idle(n);  // no progress through us: back to sleep
    return;
  }
  nd.phase = CPhase::awaiting_select;
  nd.peer = f.src;
  nd.peer_strobe = f.strobe;
  nd.held = f.pkt;
  nd.rounds = 0;
  send_ack();
  arm();
}

void CollectionNetwork::select_timeout(NodeId n, std::uint64_t epoch) {
  auto& nd = nodes_[n];
  if (nd.epoch != epoch || nd.phase != CPhase::awaiting_select) return;
  // neither a select nor another beacon: keep the packet (a duplicate at worst)
  take_packet(n, nd.ack_end + opt_.mac.select_air);
  go_idle(n);
}

void CollectionNetwork::handle_select(NodeId n, const CFrame& f) {
  auto& nd = nodes_[n];
  if (nd.phase != CPhase::awaiting_select || f.src != nd.peer || f.strobe != nd.peer_strobe) return;
  if (f.dst == n) take_packet(n, engine_.now());
  go_idle(n);
}

void CollectionNetwork::take_packet(NodeId n, SimTime when) {
  auto& nd = nodes_[n];
  CollectionPacket p = nd.held;
  p.hop_delay_sum += when - p.arrived;
  p.arrived = when;
  ++p.hops;
  if (counting()) ++engine_.metrics().nodes[n].responder_successes;
  if (absorbing(n)) {
    deliver(n, p, when);
  } else {
    enqueue(n, p, true, when);
  }
}

// ---- packets ----

void CollectionNetwork::app_tick(NodeId n) {
  if (engine_.now() >= opt_.traffic_until) return;
  if (nodes_[n].role != Role::sink) generate(n);
  engine_.schedule_in(opt_.gen_period, n, sim::EventKind::app_send, [this, n] { app_tick(n); });
}

void CollectionNetwork::generate(NodeId n) {
  auto& nd = nodes_[n];
  const SimTime now = engine_.now();
  CollectionPacket p;
  p.origin = n;
  p.seq = nd.next_seq++;
  p.created = now;
  p.arrived = now;
  auto& st = packets_[key(n, p.seq)];
  st.counted = now >= opt_.warmup && now < opt_.traffic_until;
  if (counting()) ++engine_.metrics().nodes[n].generated;
  record(now, p, PacketEvent::generated, n);
  if (absorbing(n)) {
    deliver(n, p, now);
    return;
  }
  enqueue(n, p, false, now);
}

void CollectionNetwork::enqueue(NodeId n, CollectionPacket p, bool relay, SimTime when) {
  auto& nd = nodes_[n];
  auto drop = [&](const CollectionPacket& d) {
    packets_[key(d.origin, d.seq)].dropped = true;
    if (counting()) ++engine_.metrics().nodes[n].dropped;
    record(when, d, PacketEvent::dropped, n);
  };
  if (queue_size(n) >= opt_.queue_capacity) {
    if (relay && !nd.local.empty() && !(nd.phase == CPhase::strobing && !nd.sending_relay && nd.local.size() == 1)) {
      // route-thru traffic wins over the newest local packet
      CollectionPacket victim = nd.local.back();
      nd.local.pop_back();
      auto& vs = packets_[key(victim.origin, victim.seq)];
      if (vs.copies > 0) --vs.copies;
      drop(victim);
    } else {
      drop(p);
      return;
    }
  }
  ++packets_[key(p.origin, p.seq)].copies;
  (relay ? nd.relay : nd.local).push_back(p);
  if (nd.phase == CPhase::idle && nd.role != Role::sink) at(n, when, nd.epoch, &CollectionNetwork::try_strobe);
}

void CollectionNetwork::deliver(NodeId n, const CollectionPacket& p, SimTime when) {
  auto& st = packets_[key(p.origin, p.seq)];
  if (st.delivered) {
    if (st.counted) ++duplicates_;
    record(when, p, PacketEvent::duplicate, n);
    return;
  }
  st.delivered = true;
  const SimTime latency = when - p.created;
  record(when, p, PacketEvent::delivered, n, latency);
  if (st.counted) {
    analytics::PacketStat s;
    s.origin = p.origin;
    s.seq = p.seq;
    s.created = p.created;
    s.latency = latency;
    s.hops = p.hops;
    s.hop_delay_sum = p.hop_delay_sum;
    delivered_.push_back(s);
  }
}

void CollectionNetwork::record(SimTime t, const CollectionPacket& p, PacketEvent e, NodeId holder, std::optional<SimTime> lat) {
  if (!opt_.keep_packet_log) return;
  log_.push_back(PacketLogEntry{t, p.origin, p.seq, e, holder, p.hops, lat});
}

// ---- sink handling and sampling ----

void CollectionNetwork::sample_omega() {
  const SimTime now = engine_.now();
  for (NodeId i = 0; i < nodes_.size(); ++i) {
    const auto& nd = nodes_[i];
    const double w = nd.always_on() ? std::numeric_limits<double>::infinity() : nd.policy.frequency();
    omega_.push_back(OmegaSample{now, i, w, nd.policy.floored()});
  }
  engine_.schedule_in(opt_.omega_sample_period, kNoNode, sim::EventKind::control, [this] { sample_omega(); });
}

void CollectionNetwork::make_sink(NodeId n) {
  auto& nd = nodes_[n];
  nd.role = Role::sink;
  ++nd.wake_token;  // kills the wake-up chain
  const SimTime now = engine_.now();
  // whatever it was carrying has arrived
  while (!nd.relay.empty() || !nd.local.empty()) {
    auto& q = nd.relay.empty() ? nd.local : nd.relay;
    CollectionPacket p = q.front();
    q.pop_front();
    auto& st = packets_[key(p.origin, p.seq)];
    if (st.copies > 0) --st.copies;
    p.hop_delay_sum += now - p.arrived;
    p.arrived = now;
    deliver(n, p, now);
  }
  sink_ = n;
  sink_changes_.push_back(SinkChange{now, n});
  go_idle(n);
}

void CollectionNetwork::make_normal(NodeId n) {
  auto& nd = nodes_[n];
  nd.role = Role::normal;
  nd.policy.reset();
  nd.edc.clear();
  nd.edc_sum = 0;
  go_idle(n);
  if (!nd.always_on()) {
    const SimTime first = SimTime::from_us(static_cast<std::int64_t>(nd.wake_rng.uniform01() * (1e6 / nd.policy.frequency())));
    schedule_wake(n, engine_.now() + first);
  }
}

void CollectionNetwork::migrate_sink() {
  const NodeId next = opt_.sinks[(sink_idx_ + 1) % opt_.sinks.size()];
  if (medium_->transmitting(sink_) || medium_->transmitting(next)) {
    // let the frame on the air finish first
    engine_.schedule_in(SimTime::from_ms(5), kNoNode, sim::EventKind::control, [this] { migrate_sink(); });
    return;
  }
  const NodeId old = sink_;
  sink_idx_ = (sink_idx_ + 1) % opt_.sinks.size();
  if (next != old) {
    make_normal(old);
    make_sink(next);
  }
  engine_.schedule(engine_.now() + opt_.sink_period, kNoNode, sim::EventKind::control, [this] { migrate_sink(); });
}

}  // namespace ewsn::staffetta
