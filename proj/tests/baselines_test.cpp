#include <gtest/gtest.h>

#include <numeric>
#include <set>

#include <wicmax/baselines.hpp>
#include <wicmax/generators.hpp>

#include "support/oracles.hpp"

namespace wicmax {
namespace {

using testing::make_graph;

// Dense Google-matrix power iteration: column-stochastic matrix with
// dangling columns replaced by the teleport vector.
std::vector<double> dense_pagerank(const WicGraph& g, double damping, bool weighted, int iters) {
  const std::size_t n = g.node_count();
  std::vector<double> tele(n, 1.0 / n);
  if (weighted) {
    double total = 0;
    for (double w : g.weights()) total += w;
    for (std::size_t v = 0; v < n; ++v) tele[v] = g.weight(v) / total;
  }
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  for (NodeId u = 0; u < n; ++u) {
    double mass = 0;
    for (double p : g.out_probs(u)) mass += p;
    if (mass == 0) {
      for (std::size_t v = 0; v < n; ++v) m[v][u] = tele[v];
      continue;
    }
    auto t = g.out_targets(u);
    auto p = g.out_probs(u);
    for (std::size_t i = 0; i < t.size(); ++i) m[t[i]][u] += p[i] / mass;
  }
  std::vector<double> x = tele, y(n);
  for (int it = 0; it < iters; ++it) {
    for (std::size_t v = 0; v < n; ++v) {
      double s = 0;
      for (std::size_t u = 0; u < n; ++u) s += m[v][u] * x[u];
      y[v] = damping * s + (1 - damping) * tele[v];
    }
    x.swap(y);
  }
  return x;
}

TEST(PageRank, SymmetricTwoCycle) {
  auto g = make_graph(2, {{0, 1, 0.3}, {1, 0, 0.3}}, {1, 1});
  auto pr = pagerank_scores(g);
  EXPECT_NEAR(pr.scores[0], 0.5, 1e-12);
  EXPECT_NEAR(pr.scores[1], 0.5, 1e-12);
  EXPECT_EQ(pagerank_select(g, 1).seeds, std::vector<NodeId>{0});
}

TEST(PageRank, WeightedVotesFavorHeavyIsolatedNode) {
  auto g = make_graph(2, {}, {1.0, 10.0});
  PageRankConfig cfg;
  cfg.weighted_votes = true;
  EXPECT_EQ(pagerank_select(g, 1, cfg).seeds, std::vector<NodeId>{1});
  EXPECT_NEAR(pagerank_scores(g, cfg).scores[1], 10.0 / 11.0, 1e-12);
}

TEST(PageRank, StarIntoCenter) {
  auto g = make_graph(3, {{1, 0, 0.5}, {2, 0, 0.5}}, {1, 1, 1});
  PageRankConfig cfg;
  cfg.tolerance = 1e-14;
  auto pr = pagerank_scores(g, cfg);
  auto want = dense_pagerank(g, 0.85, false, 500);
  for (NodeId v = 0; v < 3; ++v) EXPECT_NEAR(pr.scores[v], want[v], 1e-12);
  EXPECT_GT(pr.scores[0], pr.scores[1]);
  EXPECT_EQ(pagerank_select(g, 1, cfg).seeds, std::vector<NodeId>{0});
}

TEST(PageRank, MatchesDenseOracleOnRandomGraphs) {
  Rng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    auto g = testing::random_small_graph(rng, 9, 30);
    for (bool weighted : {false, true}) {
      PageRankConfig cfg;
      cfg.tolerance = 1e-14;
      cfg.weighted_votes = weighted;
      auto pr = pagerank_scores(g, cfg);
      auto want = dense_pagerank(g, 0.85, weighted, 2000);
      for (NodeId v = 0; v < g.node_count(); ++v) EXPECT_NEAR(pr.scores[v], want[v], 1e-10);
    }
  }
}

TEST(PageRank, ScoresSumToOne) {
  auto g = assign_probabilities(random_gnm(200, 600, 2), Trivalency{}, 3);
  g = assign_weights(g, RandomIntWeight{10}, 4);
  for (std::size_t iters : {1, 2, 5, 50}) {
    for (bool weighted : {false, true}) {
      PageRankConfig cfg;
      cfg.max_iters = iters;
      cfg.weighted_votes = weighted;
      auto pr = pagerank_scores(g, cfg);
      EXPECT_NEAR(std::accumulate(pr.scores.begin(), pr.scores.end(), 0.0), 1.0, 1e-9);
      EXPECT_LE(pr.iterations, iters);
    }
  }
}

TEST(PageRank, ConvergesOnStronglyConnectedGraph) {
  // Ring plus chords.
  std::vector<std::tuple<NodeId, NodeId, double>> edges;
  for (NodeId i = 0; i < 10; ++i) {
    edges.emplace_back(i, (i + 1) % 10, 0.5);
    edges.emplace_back(i, (i + 3) % 10, 0.2);
  }
  auto g = make_graph(10, edges, std::vector<double>(10, 1.0));
  auto pr = pagerank_scores(g);
  EXPECT_LT(pr.last_delta, 0.001);
  EXPECT_LT(pr.iterations, 10'000u);
}

TEST(PageRank, UnitWeightsMatchUnweighted) {
  auto g = assign_weights(assign_probabilities(random_gnm(100, 400, 5), Trivalency{}, 1),
                          UniformWeight{1.0}, 0);
  PageRankConfig plain, weighted;
  weighted.weighted_votes = true;
  auto a = pagerank_scores(g, plain);
  auto b = pagerank_scores(g, weighted);
  for (NodeId v = 0; v < g.node_count(); ++v) EXPECT_NEAR(a.scores[v], b.scores[v], 1e-12);
}

TEST(PageRank, InvalidConfig) {
  auto g = testing::two_path_graph();
  PageRankConfig cfg;
  cfg.damping = 1.0;
  EXPECT_THROW(pagerank_scores(g, cfg), Error);
  cfg.damping = 0.85;
  cfg.tolerance = 0.0;
  EXPECT_THROW(pagerank_scores(g, cfg), Error);
  EXPECT_THROW(pagerank_select(g, 4), Error);
}

TEST(RandomSelect, Properties) {
  auto g = random_gnm(50, 100, 1);
  auto all = random_select(g, 50, 9).seeds;
  EXPECT_EQ(std::set<NodeId>(all.begin(), all.end()).size(), 50u);
  EXPECT_EQ(random_select(g, 10, 9).seeds, random_select(g, 10, 9).seeds);
  auto five = random_select(g, 5, 9).seeds;
  EXPECT_TRUE(std::equal(five.begin(), five.end(), all.begin()));
  EXPECT_NE(random_select(g, 10, 9).seeds, random_select(g, 10, 10).seeds);
  EXPECT_THROW(random_select(g, 51, 9), Error);
}

TEST(RandomSelect, SingleNode) {
  auto g = make_graph(1, {}, {1.0});
  EXPECT_EQ(random_select(g, 1, 0).seeds, std::vector<NodeId>{0});
}

TEST(RandomSelect, RoughlyUniform) {
  auto g = make_graph(10, {}, std::vector<double>(10, 1.0));
  std::vector<int> hits(10, 0);
  for (std::uint64_t s = 0; s < 20'000; ++s) ++hits[random_select(g, 1, s).seeds[0]];
  // Binomial(20000, 0.1): sd ~ 42.
  for (int h : hits) EXPECT_NEAR(h, 2000, 250);
}

}  // namespace
}  // namespace wicmax
