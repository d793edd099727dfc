#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ewsn/sim/time.hpp"

namespace ewsn::analytics {

struct NodeMetrics {
  SimTime radio_on;
  std::uint64_t wakeups = 0;
  std::uint64_t skipped_wakeups = 0;
  std::uint64_t strobes = 0;
  // successful 3-way exchanges, split by role
  std::uint64_t initiator_successes = 0;
  std::uint64_t responder_successes = 0;
  std::uint64_t negative_agreements = 0;
  std::uint64_t disagreements = 0;
  std::uint64_t aborted = 0;
  // collection
  std::uint64_t generated = 0;
  std::uint64_t forwarded = 0;
  std::uint64_t dropped = 0;
  bool always_on = false;

  std::uint64_t exchanges() const { return initiator_successes + responder_successes; }
};

struct PacketStat {
  NodeId origin = kNoNode;
  std::uint64_t seq = 0;
  SimTime created;
  SimTime latency;
  std::uint32_t hops = 0;
  // sum of residence times at every holder on the path
  SimTime hop_delay_sum;
};

// Everything counted inside the measurement window [start, end).
struct RunMetrics {
  SimTime start;
  SimTime end;
  std::uint64_t dispatched = 0;
  std::vector<NodeMetrics> nodes;
  std::vector<PacketStat> packets;  // unique deliveries
  std::uint64_t generated = 0;
  std::uint64_t delivered = 0;
  std::uint64_t dropped = 0;
  std::uint64_t duplicates = 0;
  std::uint64_t in_queue_at_end = 0;
  std::uint64_t lost = 0;

  SimTime measured() const { return end - start; }
  double duty_cycle(NodeId n) const;
  double mean_duty_cycle() const;
  // successful exchanges per second summed over the network
  double global_exchange_rate() const;
  double mean_exchange_rate() const;
  std::uint64_t mass_successes() const;
  std::uint64_t disagreements() const;
  std::optional<double> delivery_ratio() const;
  std::optional<double> mass_delivery_ratio() const;
};

}  // namespace ewsn::analytics
