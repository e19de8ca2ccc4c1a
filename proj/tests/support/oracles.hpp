#pragma once

// Test-only reference computations. Everything here is written
// independently of the library's algorithms (recursion instead of explicit
// stacks, fixed-point reachability instead of BFS, subset tables instead of
// incremental bookkeeping) so the checks do not share a code path.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include <wicmax/cascade.hpp>
#include <wicmax/graph.hpp>
#include <wicmax/rng.hpp>

namespace wicmax::testing {

/// Graph from (u, v, p) triples with the given weights.
inline WicGraph make_graph(std::size_t n, const std::vector<std::tuple<NodeId, NodeId, double>>& edges,
                           std::vector<double> weights) {
  std::vector<std::pair<NodeId, NodeId>> pairs;
  for (const auto& [u, v, p] : edges) pairs.emplace_back(u, v);
  auto g = WicGraph::from_edges(n, pairs);
  std::vector<double> probs(g.edge_count());
  for (const auto& [u, v, p] : edges) probs[*g.find_edge(u, v)] = p;
  return g.with_probabilities(std::move(probs)).with_weights(std::move(weights));
}

/// u=0 -> v=1 (0.5), u=0 -> w=2 (0.5), w=2 -> v=1 (0.5); unit weights.
inline WicGraph two_path_graph(double weight_v = 1.0) {
  return make_graph(3, {{0, 1, 0.5}, {0, 2, 0.5}, {2, 1, 0.5}}, {1.0, weight_v, 1.0});
}

/// Hub A=0 with certain edges to 1, 2, 3; isolated E=4 of weight `e_weight`.
inline WicGraph hub_and_millionaire(double e_weight) {
  return make_graph(5, {{0, 1, 1.0}, {0, 2, 1.0}, {0, 3, 1.0}}, {1, 1, 1, 1, e_weight});
}

/// n in [2, max_nodes], up to max_edges distinct non-loop edges,
/// p in {0.1, ..., 0.9}, weights in {1, ..., 10}.
inline WicGraph random_small_graph(Rng& rng, std::size_t max_nodes, std::size_t max_edges) {
  const std::size_t n = 2 + rng.below(max_nodes - 1);
  std::vector<std::pair<NodeId, NodeId>> all;
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v = 0; v < n; ++v)
      if (u != v) all.emplace_back(u, v);
  for (std::size_t i = 0; i < all.size(); ++i) {
    std::swap(all[i], all[i + rng.below(all.size() - i)]);
  }
  const std::size_t m = rng.below(std::min(max_edges, all.size()) + 1);
  all.resize(m);
  std::vector<std::tuple<NodeId, NodeId, double>> edges;
  for (const auto& [u, v] : all) edges.emplace_back(u, v, 0.1 * static_cast<double>(1 + rng.below(9)));
  std::vector<double> weights(n);
  for (double& w : weights) w = static_cast<double>(1 + rng.below(10));
  return make_graph(n, edges, weights);
}

/// Expected activated weight by recursing over every edge's live/blocked
/// state; reachability by fixed-point iteration.
inline double live_edge_expectation(const WicGraph& g, std::span<const NodeId> seeds) {
  const std::size_t m = g.edge_count();
  std::vector<char> live(m, 0);
  std::function<double(std::size_t, double)> rec = [&](std::size_t e, double prob) -> double {
    if (e == m) {
      std::vector<char> on(g.node_count(), 0);
      for (NodeId s : seeds) on[s] = 1;
      bool changed = true;
      while (changed) {
        changed = false;
        for (std::size_t i = 0; i < m; ++i) {
          const NodeId a = g.edge_source(i), b = g.edge_target(i);
          if (live[i] && on[a] && !on[b]) on[b] = changed = true;
        }
      }
      double value = 0.0;
      for (NodeId v = 0; v < g.node_count(); ++v)
        if (on[v]) value += g.weight(v);
      return prob * value;
    }
    const double p = g.edge_prob(e);
    live[e] = 1;
    const double with = rec(e + 1, prob * p);
    live[e] = 0;
    return with + rec(e + 1, prob * (1.0 - p));
  };
  return rec(0, 1.0);
}

/// p_r(source, v) for every v: collect all simple-path probabilities by
/// recursion, then combine per target as 1 - prod(1 - q).
inline std::map<NodeId, double> brute_force_reach(const WicGraph& g, NodeId source) {
  std::map<NodeId, std::vector<double>> paths;
  std::vector<char> on_path(g.node_count(), 0);
  std::function<void(NodeId, double)> walk = [&](NodeId u, double q) {
    on_path[u] = 1;
    auto targets = g.out_targets(u);
    auto probs = g.out_probs(u);
    for (std::size_t i = 0; i < targets.size(); ++i) {
      const NodeId v = targets[i];
      if (on_path[v] || probs[i] == 0.0) continue;
      paths[v].push_back(q * probs[i]);
      walk(v, q * probs[i]);
    }
    on_path[u] = 0;
  };
  walk(source, 1.0);
  std::map<NodeId, double> out;
  for (const auto& [v, qs] : paths) {
    double miss = 1.0;
    for (double q : qs) miss *= 1.0 - q;
    out[v] = 1.0 - miss;
  }
  return out;
}

/// exact_sigma of every subset, indexed by bitmask (node count <= 10).
inline std::vector<double> sigma_table(const WicGraph& g) {
  const std::size_t n = g.node_count();
  std::vector<double> table(std::size_t{1} << n);
  std::vector<NodeId> seeds;
  for (std::size_t mask = 0; mask < table.size(); ++mask) {
    seeds.clear();
    for (NodeId v = 0; v < n; ++v)
      if (mask >> v & 1) seeds.push_back(v);
    table[mask] = exact_sigma(g, seeds);
  }
  return table;
}

/// Best value over all k-subsets of a subset table.
inline double exhaustive_optimum(const std::vector<double>& table, std::size_t k) {
  double best = 0.0;
  for (std::size_t mask = 0; mask < table.size(); ++mask) {
    if (static_cast<std::size_t>(std::popcount(mask)) == k) best = std::max(best, table[mask]);
  }
  return best;
}

}  // namespace wicmax::testing
