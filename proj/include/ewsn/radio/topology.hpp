#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ewsn/sim/rng.hpp"
#include "ewsn/sim/time.hpp"

namespace ewsn::radio {

struct Position {
  double x = 0.0;
  double y = 0.0;
};

double distance(Position a, Position b);

struct Arena {
  double width = 0.0;
  double height = 0.0;
  bool contains(Position p) const { return p.x >= 0 && p.y >= 0 && p.x <= width && p.y <= height; }
};

enum class TopologyMode { clique, geometric, explicit_list };

class Topology {
 public:
  static Topology clique(std::size_t n);
  static Topology geometric(std::vector<Position> positions, Arena arena, double range_m);
  // Uniform placement in the arena.
  static Topology random_geometric(std::size_t n, Arena arena, double range_m, sim::RngStream& rng);
  // Adjacency given as lists; must be symmetric unless allow_asymmetric.
  static Topology explicit_adjacency(std::vector<std::vector<NodeId>> adj, bool allow_asymmetric = false);

  TopologyMode mode() const { return mode_; }
  std::size_t size() const { return n_; }
  const Arena& arena() const { return arena_; }
  double range() const { return range_; }
  bool has_positions() const { return !pos_.empty(); }

  // Throws ProtocolError for an unknown node.
  const std::vector<NodeId>& in_range_neighbors(NodeId node) const;
  bool in_range(NodeId a, NodeId b) const;
  std::size_t degree(NodeId node) const { return in_range_neighbors(node).size(); }
  double mean_degree() const;

  Position position(NodeId node) const;
  double distance(NodeId a, NodeId b) const;
  // Moving nodes invalidates and rebuilds the neighbour cache.
  void set_positions(std::vector<Position> p);
  void set_position(NodeId node, Position p);
  const std::vector<Position>& positions() const { return pos_; }

  // Hop distance from `from` (BFS); unreachable = -1.
  std::vector<int> hop_distances(NodeId from) const;
  bool connected() const;

 private:
  void check(NodeId node) const;
  void rebuild();

  TopologyMode mode_ = TopologyMode::clique;
  std::size_t n_ = 0;
  Arena arena_;
  double range_ = 0.0;
  std::vector<Position> pos_;
  std::vector<std::vector<NodeId>> adj_;
  std::vector<std::uint8_t> matrix_;  // n*n, 1 = in range
};

}  // namespace ewsn::radio
