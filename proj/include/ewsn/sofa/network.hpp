#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "ewsn/analytics/run_metrics.hpp"
#include "ewsn/estreme/estimator.hpp"
#include "ewsn/faults.hpp"
#include "ewsn/radio/medium.hpp"
#include "ewsn/radio/topology.hpp"
#include "ewsn/sim/engine.hpp"
#include "ewsn/sim/rng.hpp"
#include "ewsn/sofa/config.hpp"
#include "ewsn/sofa/gossip.hpp"

namespace ewsn::sofa {

enum class FrameKind : std::uint8_t { beacon, ack, data_init, data_resp, data_ack };

struct Frame {
  FrameKind kind = FrameKind::beacon;
  NodeId src = kNoNode;
  NodeId dst = kNoNode;  // kNoNode = broadcast
  std::uint64_t exchange = 0;
  std::uint32_t beacon_idx = 0;
  std::uint32_t first_heard = 0;  // ack: first beacon index the responder decoded
  std::int64_t mass = 0;
  SimTime piggy;                // responder: wake-up to ack start
  double window_mean_us = -1;   // responder's estimator window mean, <0 if none
};

enum class Phase : std::uint8_t { sleeping, listening, strobing, awaiting_data, exchanging };

struct ExchangeOutcome {
  SimTime time;  // when the outcome was settled
  SimTime first_beacon;
  NodeId initiator = kNoNode;
  NodeId responder = kNoNode;
  SimTime t_rendezvous_naive;        // first beacon to ack decode
  std::optional<SimTime> corrected;  // after delay correction, if accepted
  ExchangeResult result = ExchangeResult::aborted;
};

struct EstimateRecord {
  SimTime time;
  NodeId node = kNoNode;
  std::size_t n_true = 0;
  std::size_t n_observed = 0;
  std::optional<double> n_hat_t;
  std::optional<double> n_hat_s;
  std::optional<double> n_hat;
};

// One strobe seen from the medium: index of the first beacon that drew an
// ack, and how many neighbours acked that beacon.
struct StrobeTrial {
  NodeId initiator = kNoNode;
  std::int64_t first_responded_beacon = -1;
  std::uint32_t responders = 0;
};

struct SofaOptions {
  MacConfig mac;
  radio::ChannelConfig channel;
  FaultConfig faults;
  bool estimator = false;
  estreme::EstimatorConfig estimator_cfg;
  SimTime warmup = SimTime::from_s(60);
  // test hooks: turn off the self-driven wake-up chain / traffic
  bool auto_wakeups = true;
  bool auto_traffic = true;
  std::int64_t initial_mass_step = 1000;  // node i starts with i * step
};

struct NodeView {
  Phase phase = Phase::sleeping;
  bool pending = false;
  std::int64_t mass = 0;
};

class SofaNetwork {
 public:
  SofaNetwork(SofaOptions opt, radio::Topology& topo, std::uint64_t seed);
  ~SofaNetwork();
  SofaNetwork(const SofaNetwork&) = delete;
  SofaNetwork& operator=(const SofaNetwork&) = delete;

  sim::Engine& engine() { return engine_; }
  radio::Medium<Frame>& medium() { return *medium_; }
  const radio::Topology& topology() const { return topo_; }

  void start();
  analytics::RunMetrics run_until(SimTime end);

  // test hooks
  void schedule_wakeup(NodeId n, SimTime at);
  void set_pending(NodeId n, bool pending);
  void set_mass(NodeId n, std::int64_t mass);

  NodeView view(NodeId n) const;
  std::int64_t total_mass() const;
  const std::vector<ExchangeOutcome>& exchanges() const { return exchanges_; }
  const std::vector<EstimateRecord>& estimates() const { return estimates_; }
  const std::vector<StrobeTrial>& strobe_trials() const { return trials_; }
  const estreme::EstimatorState* estimator(NodeId n) const;
  // responder id counts per initiator-success, for peer-sampling checks
  const std::vector<std::uint64_t>& selected_as_responder() const { return selected_; }
  std::uint64_t rejected_samples() const;

 private:
  struct Node;
  struct Exchange {
    NodeId initiator = kNoNode;
    NodeId responder = kNoNode;
    SimTime t0;  // first beacon
    SimTime naive;
    std::optional<SimTime> corrected;
    bool d1_ok = false;
    bool d2_ok = false;
    bool a_ok = false;
    std::int64_t a = 0;
    std::int64_t b = 0;
    std::int64_t first_idx = -1;
    std::uint32_t first_count = 0;
  };

  void wake_chain(NodeId n);
  void wakeup(NodeId n);
  void listen_check(NodeId n, std::uint64_t epoch);
  void go_sleep(NodeId n);
  void start_strobe(NodeId n);
  void send_beacon(NodeId n, std::uint64_t epoch);
  void give_up(NodeId n);
  void send_ack(NodeId n, NodeId to, std::uint64_t exchange, std::uint32_t idx);
  void on_rx(NodeId n, const radio::Transmission<Frame>& tx, radio::RxOutcome o);
  void on_tx_done(const radio::Transmission<Frame>& tx);
  void handle_initiator_rx(NodeId n, const Frame& f);
  void handle_responder_rx(NodeId n, const Frame& f);
  void handle_listener_rx(NodeId n, const Frame& f);
  void finalize_exchange(std::uint64_t id);
  void app_tick(NodeId n);
  void snapshot_warmup();
  void log_estimate(NodeId n);
  bool counting() const { return engine_.now() >= opt_.warmup; }
  std::uint64_t bump(NodeId n);
  void at(NodeId n, SimTime when, std::uint64_t epoch, void (SofaNetwork::*fn)(NodeId, std::uint64_t));
  void transmit(NodeId n, Frame f, SimTime air);

  SofaOptions opt_;
  radio::Topology& topo_;
  std::uint64_t seed_;
  sim::Engine engine_;
  std::unique_ptr<radio::Medium<Frame>> medium_;
  std::vector<Node> nodes_;
  std::unordered_map<std::uint64_t, Exchange> live_;
  std::uint64_t next_exchange_ = 1;
  sim::RngStream fault_rng_;
  std::vector<ExchangeOutcome> exchanges_;
  std::vector<EstimateRecord> estimates_;
  std::vector<StrobeTrial> trials_;
  std::vector<std::uint64_t> selected_;
  std::vector<SimTime> radio_at_warmup_;
  bool started_ = false;
};

}  // namespace ewsn::sofa
