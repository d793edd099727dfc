#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <string>
#include <vector>

#include "ewsn/errors.hpp"
#include "ewsn/radio/topology.hpp"
#include "ewsn/sim/engine.hpp"
#include "ewsn/sim/rng.hpp"

namespace ewsn::radio {

struct ChannelConfig {
  bool capture = false;
  double p_capture = 1.0;
  double link_loss = 0.0;  // independent per (frame, listener)
  void validate() const {
    if (p_capture < 0 || p_capture > 1) throw ConfigError("p_capture must be in [0,1]");
    if (link_loss < 0 || link_loss >= 1) throw ConfigError("link loss must be in [0,1)");
  }
};

enum class RxOutcome { decoded, collision, corrupted };

template <class Frame>
struct Transmission {
  std::uint64_t id = 0;
  NodeId sender = kNoNode;
  SimTime start;
  SimTime end;
  Frame frame;
};

// Shared broadcast channel. Frames are resolved at their end instant for every
// node that was in range of the sender when the frame started.
template <class Frame>
class Medium {
 public:
  using Tx = Transmission<Frame>;
  using RxHandler = std::function<void(NodeId listener, const Tx&, RxOutcome)>;
  using TxDoneHandler = std::function<void(const Tx&)>;
  // Returning true drops the frame at that listener (fault injection).
  using DropFilter = std::function<bool(NodeId listener, const Tx&)>;

  Medium(sim::Engine& engine, const Topology& topo, ChannelConfig cfg, std::uint64_t seed)
      : engine_(engine),
        topo_(topo),
        cfg_(cfg),
        rng_(seed, kNoNode, sim::StreamPurpose::capture),
        nodes_(topo.size()) {
    cfg_.validate();
  }

  void on_receive(RxHandler h) { rx_ = std::move(h); }
  void on_tx_done(TxDoneHandler h) { tx_done_ = std::move(h); }
  void set_drop_filter(DropFilter f) { drop_ = std::move(f); }

  void set_radio(NodeId n, bool on) {
    auto& s = node(n);
    const SimTime now = engine_.now();
    if (on && !s.on) {
      s.on = true;
      s.on_since = now;
    } else if (!on && s.on) {
      if (s.tx_until > now) throw ProtocolError("radio switched off while transmitting");
      s.on = false;
      s.accum += now - s.on_since;
    }
  }
  bool radio_on(NodeId n) const { return node(n).on; }
  SimTime radio_on_time(NodeId n) const {
    const auto& s = node(n);
    return s.on ? s.accum + (engine_.now() - s.on_since) : s.accum;
  }
  bool transmitting(NodeId n) const { return node(n).tx_until > engine_.now(); }

  std::uint64_t start_transmission(NodeId sender, Frame frame, SimTime airtime) {
    auto& s = node(sender);
    const SimTime now = engine_.now();
    if (!s.on) throw ProtocolError("node " + std::to_string(sender) + " transmits with radio off");
    if (s.tx_until > now) throw ProtocolError("node " + std::to_string(sender) + " already transmitting");
    if (airtime <= SimTime::zero()) throw ProtocolError("non-positive airtime");
    purge(now);
    Tx tx{next_id_++, sender, now, now + airtime, std::move(frame)};
    s.tx_until = tx.end;
    max_air_ = std::max(max_air_, airtime);
    const auto& rcpt = topo_.in_range_neighbors(sender);
    for (NodeId r : rcpt) nodes_[r].heard_until = std::max(nodes_[r].heard_until, tx.end);
    active_.push_back(Active{tx, rcpt});
    const std::uint64_t id = tx.id;
    engine_.schedule(tx.end, sender, sim::EventKind::tx_end, [this, id] { finish(id); });
    ++frames_sent_;
    return id;
  }

  // Outcome for `listener` of the frame with id `tx_id` (must still be recorded).
  // Pure function of the transmissions overlapping the frame, except for the
  // capture/loss draws.
  RxOutcome resolve_reception(NodeId listener, const Tx& tx) {
    const auto& s = node(listener);
    if (!s.on || s.on_since > tx.start) return RxOutcome::corrupted;
    bool interfered = false;
    bool nearest = true;
    const double my_d = topo_.has_positions() ? topo_.distance(tx.sender, listener) : 0.0;
    for (const auto& a : active_) {
      const Tx& o = a.tx;
      if (o.id == tx.id) continue;
      if (!(o.start < tx.end && o.end > tx.start)) continue;
      if (o.sender == listener) return RxOutcome::corrupted;  // half duplex
      if (!heard(a, listener)) continue;
      interfered = true;
      if (!topo_.has_positions() || topo_.distance(o.sender, listener) <= my_d) nearest = false;
    }
    if (interfered) {
      if (!(cfg_.capture && nearest && rng_.bernoulli(cfg_.p_capture))) return RxOutcome::collision;
    }
    if (cfg_.link_loss > 0 && rng_.bernoulli(cfg_.link_loss)) return RxOutcome::corrupted;
    if (drop_ && drop_(listener, tx)) return RxOutcome::corrupted;
    return RxOutcome::decoded;
  }

  // Some in-range sender is on the air right now.
  bool channel_busy(NodeId listener) const { return busy_until(listener) > engine_.now(); }
  SimTime busy_until(NodeId listener) const {
    SimTime until = engine_.now();
    for (const auto& a : active_) {
      if (a.tx.sender == listener || a.tx.end <= engine_.now()) continue;
      if (a.tx.start <= engine_.now() && heard(a, listener)) until = std::max(until, a.tx.end);
    }
    return until;
  }
  // Energy from an in-range sender during [from, to). Only looks back as far
  // as the retained history (a few frame lengths).
  bool activity_between(NodeId listener, SimTime from, SimTime to) const {
    for (const auto& a : active_) {
      if (a.tx.sender == listener) continue;
      if (a.tx.start < to && a.tx.end > from && heard(a, listener)) return true;
    }
    return false;
  }

  // Cheap form of activity_between(listener, from, now).
  bool energy_since(NodeId listener, SimTime from) const { return node(listener).heard_until > from; }

  std::uint64_t frames_sent() const { return frames_sent_; }
  std::uint64_t collisions() const { return collisions_; }
  std::uint64_t decoded() const { return decoded_; }

 private:
  struct NodeRadio {
    bool on = false;
    SimTime on_since;
    SimTime accum;
    SimTime tx_until;
    SimTime heard_until;  // latest end of any in-range frame started so far
  };
  struct Active {
    Tx tx;
    std::vector<NodeId> recipients;  // in range at tx start
  };

  NodeRadio& node(NodeId n) {
    if (n >= nodes_.size()) throw ProtocolError("unknown node " + std::to_string(n));
    return nodes_[n];
  }
  const NodeRadio& node(NodeId n) const {
    if (n >= nodes_.size()) throw ProtocolError("unknown node " + std::to_string(n));
    return nodes_[n];
  }
  bool heard(const Active& a, NodeId listener) const { return topo_.in_range(a.tx.sender, listener); }

  void finish(std::uint64_t id) {
    auto it = std::find_if(active_.begin(), active_.end(), [id](const Active& a) { return a.tx.id == id; });
    if (it == active_.end()) throw ProtocolError("lost transmission record");
    // copy: handlers may start new transmissions and grow active_
    const Active a = *it;
    if (tx_done_) tx_done_(a.tx);
    for (NodeId r : a.recipients) {
      if (!nodes_[r].on) continue;
      RxOutcome o = resolve_reception(r, a.tx);
      if (o == RxOutcome::corrupted && (!nodes_[r].on || nodes_[r].on_since > a.tx.start)) continue;
      if (o == RxOutcome::decoded) ++decoded_;
      if (o == RxOutcome::collision) ++collisions_;
      if (rx_) rx_(r, a.tx, o);
    }
  }

  void purge(SimTime now) {
    // anything that can still overlap a live frame is kept
    const SimTime horizon = max_air_ * 2 + SimTime::from_ms(20);
    while (!active_.empty() && active_.front().tx.end + horizon < now) active_.pop_front();
  }

  sim::Engine& engine_;
  const Topology& topo_;
  ChannelConfig cfg_;
  sim::RngStream rng_;
  std::vector<NodeRadio> nodes_;
  std::deque<Active> active_;
  std::uint64_t next_id_ = 0;
  SimTime max_air_;
  std::uint64_t frames_sent_ = 0;
  std::uint64_t collisions_ = 0;
  std::uint64_t decoded_ = 0;
  RxHandler rx_;
  TxDoneHandler tx_done_;
  DropFilter drop_;
};

}  // namespace ewsn::radio
