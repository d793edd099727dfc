#include "ewsn/radio/topology.hpp"

#include <cmath>
#include <deque>
#include <numeric>
#include <string>

#include "ewsn/errors.hpp"

namespace ewsn::radio {

double distance(Position a, Position b) { return std::hypot(a.x - b.x, a.y - b.y); }

Topology Topology::clique(std::size_t n) {
  if (n == 0) throw ConfigError("topology needs at least one node");
  Topology t;
  t.mode_ = TopologyMode::clique;
  t.n_ = n;
  t.matrix_.assign(n * n, 1);
  for (std::size_t i = 0; i < n; ++i) t.matrix_[i * n + i] = 0;
  t.rebuild();
  return t;
}

Topology Topology::geometric(std::vector<Position> positions, Arena arena, double range_m) {
  if (positions.empty()) throw ConfigError("topology needs at least one node");
  if (!(range_m > 0)) throw ConfigError("radio range must be positive");
  if (!(arena.width > 0 && arena.height > 0)) throw ConfigError("arena must have positive size");
  for (const auto& p : positions)
    if (!arena.contains(p)) throw ConfigError("node position outside the arena");
  Topology t;
  t.mode_ = TopologyMode::geometric;
  t.n_ = positions.size();
  t.arena_ = arena;
  t.range_ = range_m;
  t.pos_ = std::move(positions);
  t.matrix_.assign(t.n_ * t.n_, 0);
  t.rebuild();
  return t;
}

Topology Topology::random_geometric(std::size_t n, Arena arena, double range_m, sim::RngStream& rng) {
  std::vector<Position> p(n);
  for (auto& q : p) {
    q.x = rng.uniform(0.0, arena.width);
    q.y = rng.uniform(0.0, arena.height);
  }
  return geometric(std::move(p), arena, range_m);
}

Topology Topology::explicit_adjacency(std::vector<std::vector<NodeId>> adj, bool allow_asymmetric) {
  if (adj.empty()) throw ConfigError("topology needs at least one node");
  Topology t;
  t.mode_ = TopologyMode::explicit_list;
  t.n_ = adj.size();
  t.matrix_.assign(t.n_ * t.n_, 0);
  for (std::size_t i = 0; i < adj.size(); ++i) {
    for (NodeId j : adj[i]) {
      if (j >= t.n_) throw ConfigError("adjacency names unknown node " + std::to_string(j));
      if (j == i) continue;
      t.matrix_[i * t.n_ + j] = 1;
    }
  }
  if (!allow_asymmetric) {
    for (std::size_t i = 0; i < t.n_; ++i)
      for (std::size_t j = 0; j < t.n_; ++j)
        if (t.matrix_[i * t.n_ + j] != t.matrix_[j * t.n_ + i])
          throw ConfigError("asymmetric link " + std::to_string(i) + "-" + std::to_string(j));
  }
  t.rebuild();
  return t;
}

void Topology::check(NodeId node) const {
  if (node >= n_) throw ProtocolError("unknown node " + std::to_string(node));
}

void Topology::rebuild() {
  if (mode_ == TopologyMode::geometric) {
    const double r2 = range_ * range_;
    for (std::size_t i = 0; i < n_; ++i) {
      matrix_[i * n_ + i] = 0;
      for (std::size_t j = i + 1; j < n_; ++j) {
        const double dx = pos_[i].x - pos_[j].x;
        const double dy = pos_[i].y - pos_[j].y;
        const std::uint8_t v = (dx * dx + dy * dy) <= r2 ? 1 : 0;
        matrix_[i * n_ + j] = v;
        matrix_[j * n_ + i] = v;
      }
    }
  }
  adj_.assign(n_, {});
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j)
      if (matrix_[i * n_ + j]) adj_[i].push_back(static_cast<NodeId>(j));
}

const std::vector<NodeId>& Topology::in_range_neighbors(NodeId node) const {
  check(node);
  return adj_[node];
}

bool Topology::in_range(NodeId a, NodeId b) const {
  check(a);
  check(b);
  return matrix_[static_cast<std::size_t>(a) * n_ + b] != 0;
}

double Topology::mean_degree() const {
  std::size_t s = 0;
  for (const auto& a : adj_) s += a.size();
  return static_cast<double>(s) / static_cast<double>(n_);
}

Position Topology::position(NodeId node) const {
  check(node);
  if (pos_.empty()) throw ProtocolError("topology has no positions");
  return pos_[node];
}

double Topology::distance(NodeId a, NodeId b) const { return radio::distance(position(a), position(b)); }

void Topology::set_positions(std::vector<Position> p) {
  if (mode_ != TopologyMode::geometric) throw ConfigError("only geometric topologies can move");
  if (p.size() != n_) throw ConfigError("position count mismatch");
  for (const auto& q : p)
    if (!arena_.contains(q)) throw ConfigError("position outside the arena");
  pos_ = std::move(p);
  rebuild();
}

void Topology::set_position(NodeId node, Position p) {
  check(node);
  auto all = pos_;
  all[node] = p;
  set_positions(std::move(all));
}

std::vector<int> Topology::hop_distances(NodeId from) const {
  check(from);
  std::vector<int> d(n_, -1);
  std::deque<NodeId> q{from};
  d[from] = 0;
  while (!q.empty()) {
    NodeId u = q.front();
    q.pop_front();
    for (NodeId v : adj_[u]) {
      if (d[v] < 0) {
        d[v] = d[u] + 1;
        q.push_back(v);
      }
    }
  }
  return d;
}

bool Topology::connected() const {
  for (int h : hop_distances(0))
    if (h < 0) return false;
  return true;
}

}  // namespace ewsn::radio
