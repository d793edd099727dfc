#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ewsn/analytics/run_metrics.hpp"
#include "ewsn/faults.hpp"
#include "ewsn/radio/medium.hpp"
#include "ewsn/radio/topology.hpp"
#include "ewsn/sim/engine.hpp"
#include "ewsn/sim/rng.hpp"
#include "ewsn/staffetta/policy.hpp"
#include "ewsn/staffetta/routing.hpp"

namespace ewsn::staffetta {

struct CollectionPacket {
  NodeId origin = kNoNode;
  std::uint32_t seq = 0;
  SimTime created;
  std::uint32_t hops = 0;
  SimTime arrived;        // at the current holder
  SimTime hop_delay_sum;  // residence time at every previous holder
};

enum class CFrameKind : std::uint8_t { beacon, ack, select };

// Beacons carry the packet itself plus the sender's routing state.
struct CFrame {
  CFrameKind kind = CFrameKind::beacon;
  NodeId src = kNoNode;
  NodeId dst = kNoNode;
  std::uint64_t strobe = 0;
  CollectionPacket pkt;
  double metric = 0;  // sender's routing metric (EDC s, queue length, omega)
};

struct CollectionMac {
  SimTime listen = SimTime::from_us(4000);  // one beacon period plus a beacon
  SimTime t_b = SimTime::from_us(2500);
  SimTime beacon_air = SimTime::from_us(1000);
  SimTime ack_air = SimTime::from_us(1100);
  SimTime select_air = SimTime::from_us(1000);
  SimTime strobe_timeout = SimTime::from_s(2);
  double retransmit_p = 0.5;
  int max_rounds = 5;
  void validate() const;
};

enum class Role : std::uint8_t { normal, sink, terminal };
enum class CPhase : std::uint8_t { sleeping, listening, idle, strobing, awaiting_select };

enum class PacketEvent : std::uint8_t { generated, forwarded, delivered, dropped, duplicate };
std::string to_string(PacketEvent e);

struct PacketLogEntry {
  SimTime time;
  NodeId origin = kNoNode;
  std::uint32_t seq = 0;
  PacketEvent event = PacketEvent::generated;
  NodeId holder = kNoNode;
  std::uint32_t hops = 0;
  std::optional<SimTime> latency;  // delivered only
};

struct OmegaSample {
  SimTime time;
  NodeId node = kNoNode;
  double omega = 0;  // +inf for always-on nodes
  bool floored = false;
};

struct Handoff {
  SimTime time;  // select end
  NodeId from = kNoNode;
  NodeId to = kNoNode;
  SimTime rendezvous;        // first beacon to ack decode
  SimTime forwarding_delay;  // wake-up to select end
};

struct SinkChange {
  SimTime time;
  NodeId sink = kNoNode;
};

struct CollectionOptions {
  CollectionMac mac;
  radio::ChannelConfig channel;
  FaultConfig faults;
  MetricKind metric = MetricKind::edc;
  double edc_margin = 0.0;  // seconds
  PolicyConfig policy;
  std::map<NodeId, PolicyConfig> policy_overrides;
  // First entry is the initial sink; with sink_period > 0 the role rotates
  // through the list.
  std::vector<NodeId> sinks{0};
  SimTime sink_period;
  // Duty-cycled nodes that absorb packets (count as delivered).
  std::vector<NodeId> terminals;
  // Sources: empty = every normal node.
  std::vector<NodeId> sources;
  SimTime gen_period = SimTime::from_s(10);  // zero = no periodic traffic
  std::uint32_t initial_backlog = 0;
  SimTime traffic_until = SimTime::max();
  std::size_t queue_capacity = 64;
  SimTime warmup = SimTime::from_s(60);
  SimTime omega_sample_period = SimTime::from_s(1);
  bool keep_packet_log = true;
  void validate(std::size_t nodes) const;
};

struct CollectionNodeView {
  Role role = Role::normal;
  CPhase phase = CPhase::sleeping;
  double omega = 0;
  std::optional<SimTime> forwarding_delay;
  std::size_t queue = 0;
};

class CollectionNetwork {
 public:
  CollectionNetwork(CollectionOptions opt, radio::Topology& topo, std::uint64_t seed);
  ~CollectionNetwork();
  CollectionNetwork(const CollectionNetwork&) = delete;
  CollectionNetwork& operator=(const CollectionNetwork&) = delete;

  sim::Engine& engine() { return engine_; }
  radio::Medium<CFrame>& medium() { return *medium_; }
  const radio::Topology& topology() const { return topo_; }

  void start();
  analytics::RunMetrics run_until(SimTime end);

  NodeId sink() const { return sink_; }
  CollectionNodeView view(NodeId n) const;
  const WakeupPolicy& policy(NodeId n) const;
  double routing_metric(NodeId n) const;
  // test hook: enqueue a locally generated packet now
  bool inject_packet(NodeId n);

  const std::vector<PacketLogEntry>& packet_log() const { return log_; }
  const std::vector<OmegaSample>& omega_samples() const { return omega_; }
  const std::vector<Handoff>& handoffs() const { return handoffs_; }
  const std::vector<SinkChange>& sink_changes() const { return sink_changes_; }

 private:
  struct Node;

  bool counting() const { return engine_.now() >= opt_.warmup; }
  std::uint64_t bump(NodeId n);
  void at(NodeId n, SimTime when, std::uint64_t epoch, void (CollectionNetwork::*fn)(NodeId, std::uint64_t));
  void transmit(NodeId n, CFrame f, SimTime air);
  bool absorbing(NodeId n) const;
  std::size_t queue_size(NodeId n) const;

  void schedule_wake(NodeId n, SimTime when);
  void wake(NodeId n, std::uint64_t token);
  void listen_check(NodeId n, std::uint64_t epoch);
  void go_idle(NodeId n);
  void try_strobe(NodeId n, std::uint64_t epoch);
  void start_strobe(NodeId n);
  void send_beacon(NodeId n, std::uint64_t epoch);
  void give_up(NodeId n);
  void push_edc(NodeId n, double v);
  void select_timeout(NodeId n, std::uint64_t epoch);

  void on_rx(NodeId n, const radio::Transmission<CFrame>& tx, radio::RxOutcome o);
  void on_tx_done(const radio::Transmission<CFrame>& tx);
  void handle_beacon(NodeId n, const CFrame& f);
  void handle_ack(NodeId n, const CFrame& f);
  void handle_select(NodeId n, const CFrame& f);
  void handoff_done(NodeId n);
  void take_packet(NodeId n, SimTime when);

  void app_tick(NodeId n);
  void generate(NodeId n);
  void enqueue(NodeId n, CollectionPacket p, bool relay, SimTime when);
  void deliver(NodeId n, const CollectionPacket& p, SimTime when);
  void record(SimTime t, const CollectionPacket& p, PacketEvent e, NodeId holder, std::optional<SimTime> lat = {});
  void sample_omega();
  void migrate_sink();
  void make_sink(NodeId n);
  void make_normal(NodeId n);
  void snapshot_warmup();

  struct PacketState {
    bool counted = false;  // created inside the measurement window
    bool delivered = false;
    bool dropped = false;
    std::uint32_t copies = 0;  // live copies in queues / in flight
  };
  static std::uint64_t key(NodeId origin, std::uint32_t seq) {
    return (static_cast<std::uint64_t>(origin) << 32) | seq;
  }

  CollectionOptions opt_;
  radio::Topology& topo_;
  std::uint64_t seed_;
  sim::Engine engine_;
  std::unique_ptr<radio::Medium<CFrame>> medium_;
  sim::RngStream fault_rng_;
  std::vector<Node> nodes_;
  NodeId sink_ = kNoNode;
  std::size_t sink_idx_ = 0;
  std::uint64_t next_strobe_ = 1;
  bool started_ = false;
  std::vector<SimTime> radio_at_warmup_;
  std::unordered_map<std::uint64_t, PacketState> packets_;
  std::vector<analytics::PacketStat> delivered_;
  std::uint64_t duplicates_ = 0;
  std::vector<PacketLogEntry> log_;
  std::vector<OmegaSample> omega_;
  std::vector<Handoff> handoffs_;
  std::vector<SinkChange> sink_changes_;
};

}  // namespace ewsn::staffetta
