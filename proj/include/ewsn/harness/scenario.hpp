#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ewsn/errors.hpp"
#include "ewsn/radio/mobility.hpp"
#include "ewsn/staffetta/policy.hpp"
#include "ewsn/staffetta/routing.hpp"

namespace ewsn::harness {

// Scenario files are INI-style: [section] headers, "key = value" lines, and
// '#' or ';' comments. Every key is listed in scenario.cpp; anything else is
// rejected. docs live in scenarios/README.md.

enum class TopologyKind { clique, geometric, trace, chain };
enum class ProtocolKind { sofa, lpl_unicast, collection };

struct TopologySpec {
  TopologyKind kind = TopologyKind::clique;
  int nodes = 0;         // clique, geometric
  double arena_m = 0.0;  // square side, geometric and trace
  double range_m = 0.0;
  std::string file;      // trace: node positions at the first trace instant
  int layers = 0;        // chain
  int width = 0;
  // geometric: uniform, or the random-waypoint steady state (walkers then
  // continue their sampled leg)
  bool waypoint_placement = false;
  bool operator==(const TopologySpec&) const = default;
};

struct MobilitySpec {
  radio::MobilityKind kind = radio::MobilityKind::stationary;
  double speed_mps = 0.0;
  double pause_s = 0.0;
  std::string trace_file;
  double update_ms = 100.0;
  bool operator==(const MobilitySpec&) const = default;
};

struct MacSpec {
  double W_s = 1.0;
  double T_s = 2.0;
  std::optional<double> listen_ms;  // default: 10 ms for SOFA/LPL, 4 ms for collection
  double t_b_ms = 2.5;
  double beacon_air_ms = 1.0;
  double ack_air_ms = 1.1;
  double data_air_ms = 4.0;
  double select_air_ms = 1.0;
  bool retransmit = false;  // ack contention: false = sleep on collision
  double retransmit_p = 0.5;
  bool operator==(const MacSpec&) const = default;
};

struct EstimatorSpec {
  bool enabled = false;
  int w = 50;
  double alpha = 1.0;
  bool operator==(const EstimatorSpec&) const = default;
};

struct CollectionSpec {
  staffetta::MetricKind metric = staffetta::MetricKind::edc;
  staffetta::PolicyKind policy = staffetta::PolicyKind::staffetta;
  double fixed_hz = 1.0;
  double dc_max = 0.075;
  double omega_min = 0.1;
  std::vector<std::uint32_t> sinks{0};
  double sink_period_s = 0.0;
  double gen_period_s = 10.0;  // 0 = no traffic
  double traffic_until_s = 0.0;  // 0 = whole run
  int queue_capacity = 64;
  bool operator==(const CollectionSpec&) const = default;
};

struct FaultSpec {
  double link_loss = 0.0;
  double final_ack_loss = 0.0;
  double data_loss = 0.0;
  double select_loss = 0.0;
  double delay_epsilon_ms = 0.0;
  bool operator==(const FaultSpec&) const = default;
};

struct Scenario {
  std::string name;
  std::uint64_t seed = 1;
  double duration_s = 0.0;
  double warmup_s = 60.0;
  TopologySpec topology;
  MobilitySpec mobility;
  ProtocolKind protocol = ProtocolKind::sofa;
  MacSpec mac;
  EstimatorSpec estimator;
  CollectionSpec collection;
  FaultSpec faults;
  bool operator==(const Scenario&) const = default;

  double effective_listen_ms() const;
  std::size_t node_count() const;  // trace topologies: 0 until loaded
};

// Parse errors carry "<source>:<line>: " in what().
class ScenarioError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

// Relative file paths are resolved against base_dir.
Scenario parse_scenario(std::istream& in, const std::string& source_name = "<input>",
                        const std::filesystem::path& base_dir = {});
Scenario parse_scenario_file(const std::filesystem::path& path);
std::string serialize_scenario(const Scenario& s);

// Set one key (by "section.key") as if it had appeared in a file. Used by
// sweeps; `where` prefixes error messages.
void apply_override(Scenario& s, const std::string& dotted_key, const std::string& value,
                    const std::string& where, const std::filesystem::path& base_dir = {});
// Cross-field checks; throws ScenarioError naming the source.
void validate_scenario(const Scenario& s, const std::string& source_name = "<input>");

// A sweep file is a scenario plus [point] sections of "section.key = value"
// overrides (and an optional label). Each point is a complete scenario.
struct SweepPoint {
  std::string label;
  std::vector<std::pair<std::string, std::string>> overrides;
  Scenario scenario;
};
std::vector<SweepPoint> parse_sweep(std::istream& in, const std::string& source_name = "<input>",
                                    const std::filesystem::path& base_dir = {});
std::vector<SweepPoint> parse_sweep_file(const std::filesystem::path& path);

}  // namespace ewsn::harness
