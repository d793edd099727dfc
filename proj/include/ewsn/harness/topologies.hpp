#pragma once

#include <cstdint>
#include <vector>

#include "ewsn/radio/topology.hpp"

namespace ewsn::harness {

// Node 0 is the sink; then `layers` groups of `width` nodes. Every layer is a
// clique and consecutive layers (sink = layer 0) are fully connected.
radio::Topology chain_of_cliques(int layers, int width);
// layer of a node in chain_of_cliques (0 for the sink)
int chain_layer(NodeId n, int width);

int diameter(const radio::Topology& t);
int eccentricity(const radio::Topology& t, NodeId n);

// Sparse multi-hop field shaped like a 28-node office testbed: uniform
// placement in 100x100 m with 35 m range, redrawn until connected, diameter 5
// and mean degree in [7.5, 9.5].
struct SparseField {
  radio::Topology topo;
  NodeId edge_sink = 0;  // a node of maximum eccentricity
  int draws = 0;
};
SparseField sparse_testbed_field(std::uint64_t seed);

// Three well-connected (degree >= 4) nodes spread apart by hop distance:
// the most eccentric one, the farthest from it, and the one maximizing the
// smaller distance to the first two.
std::vector<NodeId> spread_sinks(const radio::Topology& t);

}  // namespace ewsn::harness
