#include "ewsn/radio/mobility.hpp"

#include <cmath>
#include <sstream>
#include <string>

#include "ewsn/errors.hpp"

namespace ewsn::radio {

void MobilityConfig::validate() const {
  if (speed_mps < 0) throw ConfigError("mobility speed must be >= 0");
  if (pause_s < 0) throw ConfigError("mobility pause must be >= 0");
  if (update_period <= SimTime::zero()) throw ConfigError("mobility update period must be positive");
  if (kind == MobilityKind::trace && trace_file.empty()) throw ConfigError("trace mobility needs a trace file");
}

std::vector<TraceRow> parse_mobility_trace(std::istream& in, const Arena& arena, std::size_t nodes) {
  std::vector<TraceRow> rows;
  std::string line;
  int lineno = 0;
  double last_t = 0.0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ss(line);
    TraceRow r;
    long long node = -1;
    if (!(ss >> r.time_s)) continue;  // blank line
    if (!(ss >> node >> r.pos.x >> r.pos.y))
      throw ConfigError("trace line " + std::to_string(lineno) + ": expected 'time_s node x y'");
    std::string extra;
    if (ss >> extra) throw ConfigError("trace line " + std::to_string(lineno) + ": trailing field '" + extra + "'");
    if (node < 0 || static_cast<std::size_t>(node) >= nodes)
      throw ConfigError("trace line " + std::to_string(lineno) + ": unknown node " + std::to_string(node));
    if (r.time_s < last_t) throw ConfigError("trace line " + std::to_string(lineno) + ": rows not sorted by time");
    if (!arena.contains(r.pos)) throw ConfigError("trace line " + std::to_string(lineno) + ": position outside the arena");
    last_t = r.time_s;
    r.node = static_cast<NodeId>(node);
    rows.push_back(r);
  }
  return rows;
}

std::vector<WaypointStart> sample_waypoint_steady_state(std::size_t n, const Arena& arena, sim::RngStream& rng) {
  if (arena.width <= 0 || arena.height <= 0) throw ConfigError("arena must have a positive size");
  const double diag = std::hypot(arena.width, arena.height);
  std::vector<WaypointStart> out;
  out.reserve(n);
  while (out.size() < n) {
    const Position a{rng.uniform(0.0, arena.width), rng.uniform(0.0, arena.height)};
    const Position b{rng.uniform(0.0, arena.width), rng.uniform(0.0, arena.height)};
    if (rng.uniform01() * diag > distance(a, b)) continue;  // length-biased leg
    const double f = rng.uniform01();
    out.push_back({{a.x + (b.x - a.x) * f, a.y + (b.y - a.y) * f}, b});
  }
  return out;
}

Mobility::Mobility(Topology& topo, MobilityConfig cfg, std::uint64_t seed)
    : Mobility(topo, std::move(cfg), seed, {}) {}

Mobility::Mobility(Topology& topo, MobilityConfig cfg, std::uint64_t seed, std::vector<TraceRow> trace)
    : topo_(topo), cfg_(std::move(cfg)), trace_(std::move(trace)) {
  if (cfg_.kind != MobilityKind::trace) cfg_.validate();
  if (cfg_.kind != MobilityKind::stationary && !topo_.has_positions())
    throw ConfigError("mobility needs a geometric topology");
  for (NodeId n = 0; n < topo_.size(); ++n) rng_.emplace_back(seed, n, sim::StreamPurpose::mobility);
  walkers_.resize(topo_.size());
  if (cfg_.kind == MobilityKind::random_waypoint)
    for (NodeId n = 0; n < topo_.size(); ++n) walkers_[n].target = pick_waypoint(n);
  if (cfg_.kind == MobilityKind::trace) advance_mobility(SimTime::zero());
}

Position Mobility::pick_waypoint(NodeId n) {
  const Arena& a = topo_.arena();
  return Position{rng_[n].uniform(0.0, a.width), rng_[n].uniform(0.0, a.height)};
}

void Mobility::set_waypoint(NodeId n, Position target) {
  if (n >= walkers_.size()) throw ProtocolError("unknown node");
  if (!topo_.arena().contains(target)) throw ConfigError("waypoint outside the arena");
  walkers_[n].target = target;
  walkers_[n].pause_left = 0.0;
}

void Mobility::step_walker(NodeId n, Position& p, double dt) {
  auto& w = walkers_[n];
  double left = dt;
  for (int guard = 0; left > 0 && guard < 64; ++guard) {
    if (w.pause_left > 0) {
      const double used = std::min(w.pause_left, left);
      w.pause_left -= used;
      left -= used;
      continue;
    }
    if (cfg_.speed_mps <= 0) break;
    const double d = distance(p, w.target);
    const double need = d / cfg_.speed_mps;
    if (need <= left) {
      p = w.target;
      left -= need;
      w.pause_left = cfg_.pause_s;
      w.target = pick_waypoint(n);
    } else {
      const double f = left * cfg_.speed_mps / d;
      p.x += (w.target.x - p.x) * f;
      p.y += (w.target.y - p.y) * f;
      left = 0;
    }
  }
  // clamp float noise at the borders
  const Arena& a = topo_.arena();
  p.x = std::min(std::max(p.x, 0.0), a.width);
  p.y = std::min(std::max(p.y, 0.0), a.height);
}

void Mobility::advance_mobility(SimTime to) {
  if (to < last_) throw ProtocolError("mobility cannot move backwards in time");
  switch (cfg_.kind) {
    case MobilityKind::stationary:
      break;
    case MobilityKind::random_waypoint: {
      const double dt = (to - last_).seconds();
      if (dt > 0) {
        auto pos = topo_.positions();
        for (NodeId n = 0; n < topo_.size(); ++n) step_walker(n, pos[n], dt);
        topo_.set_positions(std::move(pos));
      }
      break;
    }
    case MobilityKind::trace: {
      bool moved = false;
      auto pos = topo_.positions();
      while (trace_next_ < trace_.size() && SimTime::from_s(trace_[trace_next_].time_s) <= to) {
        pos[trace_[trace_next_].node] = trace_[trace_next_].pos;
        ++trace_next_;
        moved = true;
      }
      if (moved) topo_.set_positions(std::move(pos));
      break;
    }
  }
  last_ = to;
}

void Mobility::attach(sim::Engine& engine, SimTime end, std::function<void()> on_update) {
  if (cfg_.kind == MobilityKind::stationary) return;
  schedule_next(engine, engine.now() + cfg_.update_period, end, std::move(on_update));
}

void Mobility::schedule_next(sim::Engine& engine, SimTime at, SimTime end, std::function<void()> on_update) {
  if (at > end) return;
  engine.schedule(at, kNoNode, sim::EventKind::mobility, [this, &engine, at, end, on_update] {
    advance_mobility(at);
    if (on_update) on_update();
    schedule_next(engine, at + cfg_.update_period, end, on_update);
  });
}

}  // namespace ewsn::radio
