#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "common.hpp"
#include "graph.hpp"
#include "greedy.hpp"
#include "rng.hpp"

namespace wicmax {

struct PageRankConfig {
  double damping = 0.85;
  std::size_t max_iters = 10'000;
  /// Stop once the L1 change between successive score vectors drops below this.
  double tolerance = 0.001;
  /// Start each node with w_u votes and teleport in proportion to weight.
  bool weighted_votes = false;
};

struct PageRankResult {
  std::vector<double> scores;
  std::size_t iterations = 0;
  double last_delta = 0.0;
};

/// Power iteration where u passes rank to v with probability
/// p(u,v) / sum_i p(u,v_i). Nodes without outgoing probability mass are
/// dangling and hand their rank to the teleport vector, which is uniform,
/// or proportional to weight when `weighted_votes` is set.
inline PageRankResult pagerank_scores(const WicGraph& g, const PageRankConfig& cfg = {}) {
  if (!(cfg.damping > 0.0 && cfg.damping < 1.0)) throw Error("damping must lie in (0, 1)");
  if (!(cfg.tolerance > 0.0)) throw Error("tolerance must be positive");
  const std::size_t n = g.node_count();

  std::vector<double> teleport(n, 1.0 / static_cast<double>(n));
  if (cfg.weighted_votes) {
    const double total = std::accumulate(g.weights().begin(), g.weights().end(), 0.0);
    if (total > 0.0) {
      for (NodeId v = 0; v < n; ++v) teleport[v] = g.weight(v) / total;
    }
  }

  std::vector<double> out_mass(n, 0.0);
  for (NodeId u = 0; u < n; ++u) {
    for (double p : g.out_probs(u)) out_mass[u] += p;
  }

  PageRankResult res;
  std::vector<double> x = teleport;
  std::vector<double> next(n);
  const auto count = static_cast<std::int64_t>(n);
  while (res.iterations < cfg.max_iters) {
    double dangling = 0.0;
    for (NodeId u = 0; u < n; ++u) {
      if (out_mass[u] == 0.0) dangling += x[u];
    }
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < count; ++i) {
      const auto v = static_cast<NodeId>(i);
      double inflow = 0.0;
      auto sources = g.in_sources(v);
      auto probs = g.in_probs(v);
      for (std::size_t j = 0; j < sources.size(); ++j) {
        const NodeId u = sources[j];
        if (out_mass[u] > 0.0) inflow += x[u] * probs[j] / out_mass[u];
      }
      next[v] = cfg.damping * (inflow + dangling * teleport[v]) + (1.0 - cfg.damping) * teleport[v];
    }
    double delta = 0.0;
    for (NodeId v = 0; v < n; ++v) delta += std::abs(next[v] - x[v]);
    x.swap(next);
    ++res.iterations;
    res.last_delta = delta;
    if (delta < cfg.tolerance) break;
  }
  res.scores = std::move(x);
  return res;
}

/// Top-k nodes by PageRank score, ties to the smaller id.
inline SeedResult pagerank_select(const WicGraph& g, std::size_t k, const PageRankConfig& cfg = {}) {
  detail::check_k(k, g.node_count());
  Stopwatch clock;
  const auto pr = pagerank_scores(g, cfg);
  std::vector<NodeId> order(g.node_count());
  std::iota(order.begin(), order.end(), NodeId{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](NodeId a, NodeId b) { return pr.scores[a] > pr.scores[b]; });
  SeedResult out;
  const double elapsed = clock.elapsed_ms();
  for (std::size_t i = 0; i < k; ++i) {
    out.seeds.push_back(order[i]);
    out.step_scores.push_back(pr.scores[order[i]]);
    out.step_ms.push_back(elapsed);
  }
  return out;
}

/// k distinct nodes, uniformly at random: the first k entries of a
/// Fisher-Yates shuffle, so smaller k is always a prefix of larger k.
inline SeedResult random_select(const WicGraph& g, std::size_t k, std::uint64_t rng_seed) {
  detail::check_k(k, g.node_count());
  Stopwatch clock;
  std::vector<NodeId> nodes(g.node_count());
  std::iota(nodes.begin(), nodes.end(), NodeId{0});
  Rng rng(rng_seed);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + rng.below(nodes.size() - i);
    std::swap(nodes[i], nodes[j]);
  }
  SeedResult out;
  out.seeds.assign(nodes.begin(), nodes.begin() + static_cast<std::ptrdiff_t>(k));
  out.step_scores.assign(k, 0.0);
  out.step_ms.assign(k, clock.elapsed_ms());
  return out;
}

}  // namespace wicmax
