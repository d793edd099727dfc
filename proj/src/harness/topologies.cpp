#include "ewsn/harness/topologies.hpp"

#include <algorithm>
#include <cstdlib>

#include "ewsn/errors.hpp"
#include "ewsn/sim/rng.hpp"

namespace ewsn::harness {

int chain_layer(NodeId n, int width) { return n == 0 ? 0 : static_cast<int>((n - 1) / width) + 1; }

radio::Topology chain_of_cliques(int layers, int width) {
  if (layers < 1 || width < 1) throw ConfigError("chain needs at least one layer of one node");
  const std::size_t n = 1 + static_cast<std::size_t>(layers) * width;
  std::vector<std::vector<NodeId>> adj(n);
  for (NodeId a = 0; a < n; ++a)
    for (NodeId b = 0; b < n; ++b) {
      if (a == b) continue;
      const int la = chain_layer(a, width), lb = chain_layer(b, width);
      if (std::abs(la - lb) == 1 || (la == lb && la > 0)) adj[a].push_back(b);
    }
  return radio::Topology::explicit_adjacency(std::move(adj));
}

int eccentricity(const radio::Topology& t, NodeId n) {
  const auto h = t.hop_distances(n);
  return *std::max_element(h.begin(), h.end());
}

int diameter(const radio::Topology& t) {
  int d = 0;
  for (NodeId i = 0; i < t.size(); ++i) d = std::max(d, eccentricity(t, i));
  return d;
}

SparseField sparse_testbed_field(std::uint64_t seed) {
  const radio::Arena arena{100, 100};
  sim::RngStream rng(seed, kNoNode, sim::StreamPurpose::topology);
  auto shaped = [](const radio::Topology& t) {
    return t.connected() && diameter(t) == 5 && t.mean_degree() >= 7.5 && t.mean_degree() <= 9.5;
  };
  int draws = 1;
  auto topo = radio::Topology::random_geometric(28, arena, 35, rng);
  while (!shaped(topo)) {
    if (++draws > 100000) throw SimulationError("could not draw a testbed-shaped topology");
    topo = radio::Topology::random_geometric(28, arena, 35, rng);
  }
  NodeId sink = 0;
  int best = -1;
  for (NodeId i = 0; i < topo.size(); ++i) {
    const int e = eccentricity(topo, i);
    if (e > best) {
      best = e;
      sink = i;
    }
  }
  return {std::move(topo), sink, draws};
}

std::vector<NodeId> spread_sinks(const radio::Topology& t) {
  auto ok = [&](NodeId i) { return t.degree(i) >= 4; };
  NodeId a = kNoNode;
  int best = -1;
  for (NodeId i = 0; i < t.size(); ++i) {
    if (!ok(i)) continue;
    const int e = eccentricity(t, i);
    if (e > best) {
      best = e;
      a = i;
    }
  }
  if (a == kNoNode) throw ConfigError("no node of degree >= 4 to host a sink");
  const auto ha = t.hop_distances(a);
  NodeId b = a;
  best = -1;
  for (NodeId i = 0; i < t.size(); ++i)
    if (ok(i) && ha[i] > best) {
      best = ha[i];
      b = i;
    }
  const auto hb = t.hop_distances(b);
  NodeId c = a;
  best = -1;
  for (NodeId i = 0; i < t.size(); ++i) {
    if (!ok(i)) continue;
    const int d = std::min(ha[i], hb[i]);
    if (d > best) {
      best = d;
      c = i;
    }
  }
  return {a, b, c};
}

}  // namespace ewsn::harness
