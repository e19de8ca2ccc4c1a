#pragma once

#include <cstdint>
#include <unordered_set>
#include <utility>
#include <vector>

#include "common.hpp"
#include "graph.hpp"
#include "rng.hpp"

namespace wicmax {

/// Directed G(n, m): m distinct ordered pairs drawn uniformly, no self-loops.
/// Probabilities and weights are left at 0.
inline WicGraph random_gnm(std::size_t n, std::size_t m, std::uint64_t seed) {
  if (n == 0) throw Error("random_gnm needs at least one node");
  const std::uint64_t max_edges = static_cast<std::uint64_t>(n) * (n - 1);
  if (m > max_edges) throw Error("random_gnm: too many edges for " + std::to_string(n) + " nodes");
  Rng rng(seed);
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(m * 2);
  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(m);
  while (edges.size() < m) {
    const auto u = static_cast<NodeId>(rng.below(n));
    const auto v = static_cast<NodeId>(rng.below(n));
    if (u == v) continue;
    if (seen.insert(static_cast<std::uint64_t>(u) * n + v).second) edges.emplace_back(u, v);
  }
  return WicGraph::from_edges(n, std::move(edges));
}

/// Writes g as a SNAP edge list (original labels).
inline void write_edge_list(std::ostream& out, const WicGraph& g) {
  out << "# nodes " << g.node_count() << " edges " << g.edge_count() << '\n';
  for (NodeId u = 0; u < g.node_count(); ++u) {
    for (NodeId v : g.out_targets(u)) out << g.label(u) << '\t' << g.label(v) << '\n';
  }
}

}  // namespace wicmax
