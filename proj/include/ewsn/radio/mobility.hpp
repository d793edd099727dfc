#pragma once

#include <istream>
#include <string>
#include <vector>

#include "ewsn/radio/topology.hpp"
#include "ewsn/sim/engine.hpp"
#include "ewsn/sim/rng.hpp"

namespace ewsn::radio {

enum class MobilityKind { stationary, random_waypoint, trace };

struct TraceRow {
  double time_s = 0.0;
  NodeId node = 0;
  Position pos;
};

struct MobilityConfig {
  MobilityKind kind = MobilityKind::stationary;
  double speed_mps = 0.0;
  double pause_s = 0.0;
  std::string trace_file;
  SimTime update_period = SimTime::from_ms(100);
  void validate() const;
};

// "time_s node x y" rows, whitespace separated, '#' comments, sorted by time.
// Rows outside the arena or with unknown nodes throw ConfigError.
std::vector<TraceRow> parse_mobility_trace(std::istream& in, const Arena& arena, std::size_t nodes);

// Random-waypoint steady state (no pauses): pick a leg A->B with probability
// proportional to its length, then a point uniform on it. Placing nodes this
// way removes the drift towards the centre that a uniform start shows during
// the first legs; `target` lets a walker continue the sampled leg.
struct WaypointStart {
  Position pos;
  Position target;
};
std::vector<WaypointStart> sample_waypoint_steady_state(std::size_t n, const Arena& arena, sim::RngStream& rng);

class Mobility {
 public:
  Mobility(Topology& topo, MobilityConfig cfg, std::uint64_t seed);
  Mobility(Topology& topo, MobilityConfig cfg, std::uint64_t seed, std::vector<TraceRow> trace);

  // Move everybody to their position at `to`, then refresh adjacency.
  void advance_mobility(SimTime to);
  // Periodic updates driven by the engine; `on_update` runs after each move.
  void attach(sim::Engine& engine, SimTime end, std::function<void()> on_update = {});

  // test hook: force the next leg of a random-waypoint walker
  void set_waypoint(NodeId node, Position target);
  SimTime last_update() const { return last_; }

 private:
  struct Walker {
    Position target;
    double pause_left = 0.0;  // seconds still to pause before picking a new target
  };
  void step_walker(NodeId n, Position& p, double dt);
  Position pick_waypoint(NodeId n);
  void schedule_next(sim::Engine& engine, SimTime at, SimTime end, std::function<void()> on_update);

  Topology& topo_;
  MobilityConfig cfg_;
  std::vector<sim::RngStream> rng_;
  std::vector<Walker> walkers_;
  std::vector<TraceRow> trace_;
  std::size_t trace_next_ = 0;
  SimTime last_;
};

}  // namespace ewsn::radio
