#include "ewsn/sofa/network.hpp"

#include <algorithm>

#include "ewsn/errors.hpp"

namespace ewsn::sofa {

using radio::RxOutcome;
using Tx = radio::Transmission<Frame>;

struct SofaNetwork::Node {
  Phase phase = Phase::sleeping;
  bool initiator = false;
  bool pending = false;
  std::uint64_t epoch = 0;
  std::int64_t mass = 0;
  SimTime listen_start;
  SimTime strobe_start;  // first beacon
  std::uint32_t beacon_idx = 0;
  std::uint32_t first_heard = 0;
  std::uint64_t exchange = 0;
  NodeId peer = kNoNode;
  NodeId dest = kNoNode;
  int rounds = 0;
  sim::RngStream wake_rng;
  sim::RngStream mac_rng;
  sim::RngStream traffic_rng;
  std::optional<estreme::EstimatorState> est;
  std::vector<std::uint8_t> observed;
  std::size_t n_observed = 0;

  Node(std::uint64_t seed, NodeId id)
      : wake_rng(seed, id, sim::StreamPurpose::wakeup),
        mac_rng(seed, id, sim::StreamPurpose::mac),
        traffic_rng(seed, id, sim::StreamPurpose::traffic) {}
};

SofaNetwork::SofaNetwork(SofaOptions opt, radio::Topology& topo, std::uint64_t seed)
    : opt_(std::move(opt)),
      topo_(topo),
      seed_(seed),
      fault_rng_(seed, kNoNode, sim::StreamPurpose::faults),
      selected_(topo.size(), 0) {
  opt_.mac.validate();
  opt_.faults.validate();
  opt_.channel.link_loss = std::max(opt_.channel.link_loss, opt_.faults.link_loss);
  if (opt_.estimator) {
    opt_.estimator_cfg.t_w = opt_.mac.W;
    opt_.estimator_cfg.validate();
  }
  medium_ = std::make_unique<radio::Medium<Frame>>(engine_, topo_, opt_.channel, seed);
  nodes_.reserve(topo.size());
  for (NodeId i = 0; i < topo.size(); ++i) {
    nodes_.emplace_back(seed, i);
    nodes_[i].mass = static_cast<std::int64_t>(i) * opt_.initial_mass_step;
    if (opt_.estimator) nodes_[i].est.emplace(opt_.estimator_cfg);
    nodes_[i].observed.assign(topo.size(), 0);
  }
  medium_->on_receive([this](NodeId n, const Tx& tx, RxOutcome o) { on_rx(n, tx, o); });
  medium_->on_tx_done([this](const Tx& tx) { on_tx_done(tx); });
  medium_->set_drop_filter([this](NodeId, const Tx& tx) {
    switch (tx.frame.kind) {
      case FrameKind::data_ack: return fault_rng_.bernoulli(opt_.faults.final_ack_loss);
      case FrameKind::data_init:
      case FrameKind::data_resp: return fault_rng_.bernoulli(opt_.faults.data_loss);
      default: return false;
    }
  });
  engine_.metrics().nodes.assign(topo.size(), {});
}

SofaNetwork::~SofaNetwork() = default;

void SofaNetwork::start() {
  if (started_) return;
  started_ = true;
  const SimTime now = engine_.now();
  for (NodeId i = 0; i < nodes_.size(); ++i) {
    auto& nd = nodes_[i];
    if (opt_.auto_wakeups) {
      const SimTime first = now + SimTime::from_us(static_cast<std::int64_t>(nd.wake_rng.uniform01() * opt_.mac.W.us()));
      engine_.schedule(first, i, sim::EventKind::wakeup, [this, i] { wake_chain(i); });
    }
    if (opt_.auto_traffic) {
      const SimTime first = now + SimTime::from_us(static_cast<std::int64_t>(nd.traffic_rng.uniform01() * opt_.mac.T.us()));
      engine_.schedule(first, i, sim::EventKind::app_send, [this, i] { app_tick(i); });
    }
  }
  if (opt_.warmup > now) {
    engine_.schedule(opt_.warmup, kNoNode, sim::EventKind::control, [this] { snapshot_warmup(); });
  } else {
    snapshot_warmup();
  }
}

void SofaNetwork::snapshot_warmup() {
  radio_at_warmup_.resize(nodes_.size());
  for (NodeId i = 0; i < nodes_.size(); ++i) radio_at_warmup_[i] = medium_->radio_on_time(i);
}

analytics::RunMetrics SofaNetwork::run_until(SimTime end) {
  start();
  engine_.run_until(end);
  auto& m = engine_.metrics();
  m.start = std::min(opt_.warmup, end);
  for (NodeId i = 0; i < nodes_.size(); ++i) {
    SimTime base = radio_at_warmup_.empty() ? SimTime::zero() : radio_at_warmup_[i];
    if (end <= opt_.warmup) base = medium_->radio_on_time(i);
    m.nodes[i].radio_on = medium_->radio_on_time(i) - base;
  }
  return m;
}

std::uint64_t SofaNetwork::bump(NodeId n) { return ++nodes_[n].epoch; }

void SofaNetwork::at(NodeId n, SimTime when, std::uint64_t epoch, void (SofaNetwork::*fn)(NodeId, std::uint64_t)) {
  engine_.schedule(when, n, sim::EventKind::timer, [this, n, epoch, fn] { (this->*fn)(n, epoch); });
}

void SofaNetwork::transmit(NodeId n, Frame f, SimTime air) {
  f.src = n;
  medium_->start_transmission(n, std::move(f), air);
}

void SofaNetwork::schedule_wakeup(NodeId n, SimTime when) {
  engine_.schedule(when, n, sim::EventKind::wakeup, [this, n] { wakeup(n); });
}

void SofaNetwork::set_pending(NodeId n, bool pending) { nodes_.at(n).pending = pending; }
void SofaNetwork::set_mass(NodeId n, std::int64_t mass) { nodes_.at(n).mass = mass; }

NodeView SofaNetwork::view(NodeId n) const {
  const auto& nd = nodes_.at(n);
  return NodeView{nd.phase, nd.pending, nd.mass};
}

std::int64_t SofaNetwork::total_mass() const {
  std::int64_t s = 0;
  for (const auto& nd : nodes_) s += nd.mass;
  return s;
}

const estreme::EstimatorState* SofaNetwork::estimator(NodeId n) const {
  const auto& nd = nodes_.at(n);
  return nd.est ? &*nd.est : nullptr;
}

std::uint64_t SofaNetwork::rejected_samples() const {
  std::uint64_t r = 0;
  for (const auto& nd : nodes_)
    if (nd.est) r += nd.est->rejected();
  return r;
}

void SofaNetwork::wake_chain(NodeId n) {
  const SimTime next = next_wakeup_time(engine_.now(), opt_.mac.W, nodes_[n].wake_rng, opt_.mac.jitter);
  engine_.schedule(next, n, sim::EventKind::wakeup, [this, n] { wake_chain(n); });
  wakeup(n);
}

void SofaNetwork::wakeup(NodeId n) {
  auto& nd = nodes_[n];
  auto& nm = engine_.metrics().nodes[n];
  if (nd.phase != Phase::sleeping) {
    if (counting()) ++nm.skipped_wakeups;
    return;
  }
  if (counting()) ++nm.wakeups;
  const std::uint64_t e = bump(n);
  nd.phase = Phase::listening;
  nd.initiator = false;
  nd.listen_start = engine_.now();
  medium_->set_radio(n, true);
  at(n, engine_.now() + opt_.mac.listen, e, &SofaNetwork::listen_check);
}

void SofaNetwork::listen_check(NodeId n, std::uint64_t epoch) {
  auto& nd = nodes_[n];
  if (nd.epoch != epoch || nd.phase != Phase::listening) return;
  if (medium_->channel_busy(n)) {
    // somebody is mid-frame: keep listening until it ends
    at(n, medium_->busy_until(n), epoch, &SofaNetwork::listen_check);
    return;
  }
  if (medium_->energy_since(n, nd.listen_start)) {
    go_sleep(n);  // channel in use, back off
    return;
  }
  if (nd.pending) {
    start_strobe(n);
  } else {
    go_sleep(n);
  }
}

void SofaNetwork::go_sleep(NodeId n) {
  auto& nd = nodes_[n];
  bump(n);
  nd.phase = Phase::sleeping;
  nd.initiator = false;
  nd.peer = kNoNode;
  medium_->set_radio(n, false);
}

void SofaNetwork::start_strobe(NodeId n) {
  auto& nd = nodes_[n];
  const std::uint64_t e = bump(n);
  nd.phase = Phase::strobing;
  nd.initiator = true;
  nd.beacon_idx = 0;
  nd.strobe_start = engine_.now();
  nd.exchange = next_exchange_++;
  if (counting()) ++engine_.metrics().nodes[n].strobes;
  Exchange ex;
  ex.initiator = n;
  ex.t0 = nd.strobe_start;
  ex.a = nd.mass;
  live_.emplace(nd.exchange, ex);
  if (opt_.mac.mode == MacMode::lpl_unicast) {
    const auto& nb = topo_.in_range_neighbors(n);
    if (nb.empty()) {
      give_up(n);
      return;
    }
    nd.dest = nb[nd.mac_rng.index(nb.size())];
  } else {
    nd.dest = kNoNode;
  }
  send_beacon(n, e);
}

void SofaNetwork::send_beacon(NodeId n, std::uint64_t epoch) {
  auto& nd = nodes_[n];
  if (nd.epoch != epoch || nd.phase != Phase::strobing) return;
  if (engine_.now() - nd.strobe_start >= opt_.mac.strobe_timeout()) {
    give_up(n);
    return;
  }
  Frame f;
  f.kind = FrameKind::beacon;
  f.dst = nd.dest;
  f.exchange = nd.exchange;
  f.beacon_idx = nd.beacon_idx++;
  transmit(n, f, opt_.mac.beacon_air);
  at(n, engine_.now() + opt_.mac.t_b, epoch, &SofaNetwork::send_beacon);
}

void SofaNetwork::give_up(NodeId n) {
  auto& nd = nodes_[n];
  auto it = live_.find(nd.exchange);
  if (it != live_.end()) {
    trials_.push_back(StrobeTrial{n, it->second.first_idx, it->second.first_count});
    live_.erase(it);
  }
  ExchangeOutcome o;
  o.time = engine_.now();
  o.initiator = n;
  o.first_beacon = nd.strobe_start;
  o.t_rendezvous_naive = engine_.now() - nd.strobe_start;
  o.result = ExchangeResult::aborted;
  exchanges_.push_back(o);
  if (counting()) ++engine_.metrics().nodes[n].aborted;
  nd.pending = false;  // no retransmission
  go_sleep(n);
}

void SofaNetwork::send_ack(NodeId n, NodeId to, std::uint64_t exchange, std::uint32_t idx) {
  auto& nd = nodes_[n];
  Frame f;
  f.kind = FrameKind::ack;
  f.dst = to;
  f.exchange = exchange;
  f.beacon_idx = idx;
  f.first_heard = nd.first_heard;
  f.piggy = engine_.now() - nd.listen_start;
  auto it = live_.find(exchange);
  if (it != live_.end()) {
    auto& ex = it->second;
    if (ex.first_idx < 0) {
      ex.first_idx = idx;
      ex.first_count = 1;
    } else if (ex.first_idx == static_cast<std::int64_t>(idx) && nd.rounds == 0) {
      ++ex.first_count;
    }
  }
  transmit(n, f, opt_.mac.ack_air);
  const std::uint64_t e = bump(n);
  // wait for D1, or the next beacon telling us the ack was lost
  const SimTime deadline = engine_.now() + opt_.mac.ack_air + std::max(opt_.mac.data_air, opt_.mac.t_b) + SimTime::from_ms(1);
  engine_.schedule(deadline, n, sim::EventKind::timer, [this, n, e] {
    if (nodes_[n].epoch == e) go_sleep(n);
  });
}

void SofaNetwork::on_tx_done(const Tx& tx) {
  if (tx.frame.kind != FrameKind::data_ack) return;
  const NodeId n = tx.sender;
  const std::uint64_t id = tx.frame.exchange;
  go_sleep(n);
  // settle after the responder has had its chance to decode the ack
  engine_.schedule(engine_.now(), n, sim::EventKind::timer, [this, id] { finalize_exchange(id); });
}

void SofaNetwork::on_rx(NodeId n, const Tx& tx, RxOutcome o) {
  if (o != RxOutcome::decoded) return;
  const auto& nd = nodes_[n];
  switch (nd.phase) {
    case Phase::sleeping: return;
    case Phase::listening: handle_listener_rx(n, tx.frame); return;
    default:
      if (nd.initiator) {
        handle_initiator_rx(n, tx.frame);
      } else {
        handle_responder_rx(n, tx.frame);
      }
  }
}

void SofaNetwork::handle_listener_rx(NodeId n, const Frame& f) {
  auto& nd = nodes_[n];
  const bool for_me = opt_.mac.mode == MacMode::sofa ? f.dst == kNoNode : f.dst == n;
  if (f.kind == FrameKind::beacon && for_me) {
    // role switch: a pending sender answers too and re-arms at the next T
    nd.pending = false;
    nd.phase = Phase::awaiting_data;
    nd.initiator = false;
    nd.peer = f.src;
    nd.exchange = f.exchange;
    nd.rounds = 0;
    nd.first_heard = f.beacon_idx;
    send_ack(n, f.src, f.exchange, f.beacon_idx);
    return;
  }
  // a rendezvous ack may still be lost at its initiator; keep listening
  if (f.kind == FrameKind::ack) return;
  go_sleep(n);  // overheard somebody else's exchange
}

void SofaNetwork::handle_responder_rx(NodeId n, const Frame& f) {
  auto& nd = nodes_[n];
  if (f.src != nd.peer || f.exchange != nd.exchange) return;
  if (nd.phase == Phase::awaiting_data) {
    if (f.kind == FrameKind::beacon) {
      // our ack did not get through
      if (opt_.mac.ack_contention == AckContention::sleep_on_collision) {
        go_sleep(n);
        return;
      }
      ++nd.rounds;
      if (nd.rounds >= opt_.mac.max_contention_rounds) {
        go_sleep(n);
        return;
      }
      if (nd.mac_rng.bernoulli(opt_.mac.retransmit_p)) {
        send_ack(n, f.src, f.exchange, f.beacon_idx);
      } else {
        go_sleep(n);
      }
      return;
    }
    if (f.kind == FrameKind::data_init) {
      if (f.dst != n) {
        go_sleep(n);  // initiator picked someone else
        return;
      }
      auto it = live_.find(nd.exchange);
      if (it == live_.end()) throw ProtocolError("data for unknown exchange");
      auto& ex = it->second;
      ex.d1_ok = true;
      ex.b = nd.mass;
      nd.phase = Phase::exchanging;
      const std::uint64_t e = bump(n);
      Frame d2;
      d2.kind = FrameKind::data_resp;
      d2.dst = nd.peer;
      d2.exchange = nd.exchange;
      d2.mass = nd.mass;
      if (nd.est) {
        if (auto m = nd.est->window_mean_us()) d2.window_mean_us = *m;
      }
      transmit(n, d2, opt_.mac.data_air);
      const SimTime deadline = engine_.now() + opt_.mac.data_air + opt_.mac.ack_air + SimTime::from_ms(1);
      engine_.schedule(deadline, n, sim::EventKind::timer, [this, n, e] {
        if (nodes_[n].epoch == e) go_sleep(n);
      });
    }
    return;
  }
  if (nd.phase == Phase::exchanging && f.kind == FrameKind::data_ack && f.dst == n) {
    auto it = live_.find(nd.exchange);
    if (it != live_.end()) it->second.a_ok = true;
    go_sleep(n);
  }
}

void SofaNetwork::handle_initiator_rx(NodeId n, const Frame& f) {
  auto& nd = nodes_[n];
  if (f.exchange != nd.exchange || f.dst != n) return;
  auto it = live_.find(nd.exchange);
  if (it == live_.end()) throw ProtocolError("initiator lost its exchange record");
  auto& ex = it->second;
  if (nd.phase == Phase::strobing && f.kind == FrameKind::ack) {
    const std::uint64_t e = bump(n);
    ex.responder = f.src;
    ex.naive = engine_.now() - ex.t0 + opt_.faults.delay_epsilon;
    // a responder that already heard the first beacon was awake before the
    // strobe: its wake-up is not a rendezvous observation
    const bool awake_before = f.first_heard == 0;
    auto s = estreme::corrected_sample(ex.naive, f.piggy, opt_.mac.ack_air);
    if (s && !awake_before) ex.corrected = s->corrected;
    if (nd.est) {
      if (awake_before) {
        nd.est->reject();
      } else {
        nd.est->corrected_rendezvous_sample(ex.naive, f.piggy);
      }
      if (!nd.observed[f.src]) {
        nd.observed[f.src] = 1;
        ++nd.n_observed;
      }
      log_estimate(n);
    }
    trials_.push_back(StrobeTrial{n, ex.first_idx, ex.first_count});
    nd.phase = Phase::exchanging;
    nd.peer = f.src;
    Frame d1;
    d1.kind = FrameKind::data_init;
    d1.dst = f.src;
    d1.exchange = nd.exchange;
    d1.mass = nd.mass;
    ex.a = nd.mass;
    transmit(n, d1, opt_.mac.data_air);
    const SimTime deadline = engine_.now() + opt_.mac.data_air * 2 + SimTime::from_ms(1);
    const std::uint64_t id = nd.exchange;
    engine_.schedule(deadline, n, sim::EventKind::timer, [this, n, e, id] {
      if (nodes_[n].epoch != e) return;
      go_sleep(n);
      finalize_exchange(id);
    });
    return;
  }
  if (nd.phase == Phase::exchanging && f.kind == FrameKind::data_resp && f.src == nd.peer) {
    bump(n);
    ex.d2_ok = true;
    if (nd.est && f.window_mean_us > 0) nd.est->add_neighbor_mean(f.window_mean_us);
    Frame a;
    a.kind = FrameKind::data_ack;
    a.dst = nd.peer;
    a.exchange = nd.exchange;
    transmit(n, a, opt_.mac.ack_air);
  }
}

void SofaNetwork::finalize_exchange(std::uint64_t id) {
  auto it = live_.find(id);
  if (it == live_.end()) return;
  const Exchange ex = it->second;
  live_.erase(it);
  ExchangeResult r = ExchangeResult::success;
  if (!ex.d1_ok || !ex.d2_ok) {
    r = ExchangeResult::negative_agreement;
  } else if (!ex.a_ok) {
    r = ExchangeResult::disagreement;
  }
  auto [a2, b2] = gossip_merge(ex.a, ex.b, r);
  if (r != ExchangeResult::negative_agreement) {
    nodes_[ex.initiator].mass = a2;
    nodes_[ex.responder].mass = b2;
  }
  ExchangeOutcome o;
  o.time = engine_.now();
  o.initiator = ex.initiator;
  o.responder = ex.responder;
  o.first_beacon = ex.t0;
  o.t_rendezvous_naive = ex.naive;
  o.corrected = ex.corrected;
  o.result = r;
  exchanges_.push_back(o);
  nodes_[ex.initiator].pending = false;
  if (!counting()) return;
  auto& mi = engine_.metrics().nodes[ex.initiator];
  auto& mr = engine_.metrics().nodes[ex.responder];
  switch (r) {
    case ExchangeResult::success:
      ++mi.initiator_successes;
      ++mr.responder_successes;
      ++selected_[ex.responder];
      break;
    case ExchangeResult::disagreement:
      ++mi.disagreements;
      break;
    case ExchangeResult::negative_agreement:
      ++mi.negative_agreements;
      break;
    case ExchangeResult::aborted:
      break;
  }
}

void SofaNetwork::app_tick(NodeId n) {
  nodes_[n].pending = true;
  engine_.schedule_in(opt_.mac.T, n, sim::EventKind::app_send, [this, n] { app_tick(n); });
}

void SofaNetwork::log_estimate(NodeId n) {
  const auto& nd = nodes_[n];
  EstimateRecord r;
  r.time = engine_.now();
  r.node = n;
  r.n_true = topo_.degree(n);
  r.n_observed = nd.n_observed;
  r.n_hat_t = nd.est->t_estimate();
  r.n_hat_s = nd.est->s_estimate();
  r.n_hat = nd.est->combined_estimate();
  estimates_.push_back(r);
}

}  // namespace ewsn::sofa
