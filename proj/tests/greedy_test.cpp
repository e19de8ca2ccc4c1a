#include <gtest/gtest.h>

#include <numbers>

#include <wicmax/generators.hpp>
#include <wicmax/greedy.hpp>

#include "support/oracles.hpp"

namespace wicmax {
namespace {

using testing::hub_and_millionaire;
using testing::make_graph;

auto exact_oracle(const WicGraph& g) {
  return [&g](std::span<const NodeId> s) { return exact_sigma(g, s); };
}

TEST(Greedy, HeavyIsolatedNodeWinsUnderWeights) {
  auto g = hub_and_millionaire(100.0);
  const NodeId hub[] = {0}, heavy[] = {4};
  ASSERT_EQ(exact_sigma(g, hub), 4.0);
  ASSERT_EQ(exact_sigma(g, heavy), 100.0);
  auto res = greedy_select(g, {1, 2000, 7, false});
  EXPECT_EQ(res.seeds, std::vector<NodeId>{4});
}

TEST(Greedy, HubWinsWithUnitWeights) {
  auto g = hub_and_millionaire(1.0);
  auto res = greedy_select(g, {1, 2000, 7, false});
  EXPECT_EQ(res.seeds, std::vector<NodeId>{0});
  EXPECT_DOUBLE_EQ(res.step_scores[0], 4.0);
}

TEST(Greedy, KEqualsNodeCountSelectsEverything) {
  auto g = testing::two_path_graph();
  auto res = greedy_select(g, {3, 500, 1, false});
  std::vector<NodeId> sorted = res.seeds;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(sorted, (std::vector<NodeId>{0, 1, 2}));
  EXPECT_EQ(res.step_ms.size(), 3u);
}

TEST(Greedy, KTooLarge) {
  EXPECT_THROW(greedy_select(testing::two_path_graph(), {4, 10, 1, false}), Error);
  EXPECT_THROW(greedy_with_oracle(3, 4, [](std::span<const NodeId>) { return 0.0; }), Error);
}

TEST(Greedy, Deterministic) {
  auto g = assign_weights(assign_probabilities(random_gnm(80, 300, 3), Trivalency{}, 4),
                          RandomIntWeight{10}, 5);
  auto a = greedy_select(g, {5, 300, 11, false});
  auto b = greedy_select(g, {5, 300, 11, false});
  EXPECT_EQ(a.seeds, b.seeds);
  EXPECT_EQ(a.step_scores, b.step_scores);
}

TEST(Greedy, LazyMatchesPlainOnMonteCarloWorlds) {
  // With the worlds fixed, the estimated objective is itself submodular.
  auto g = assign_weights(assign_probabilities(random_gnm(60, 240, 8), ConstantProb{0.15}, 0),
                          RandomIntWeight{10}, 2);
  auto plain = greedy_select(g, {8, 400, 5, false});
  auto lazy = greedy_select(g, {8, 400, 5, true});
  EXPECT_EQ(plain.seeds, lazy.seeds);
}

TEST(Greedy, StepScoresTrackEstimatedSigma) {
  auto g = assign_weights(assign_probabilities(random_gnm(30, 90, 12), ConstantProb{0.2}, 0),
                          RandomIntWeight{5}, 1);
  auto res = greedy_select(g, {4, 1000, 21, false});
  for (std::size_t i = 0; i < res.seeds.size(); ++i) {
    std::span<const NodeId> prefix(res.seeds.data(), i + 1);
    EXPECT_NEAR(res.step_scores[i], estimate_sigma(g, prefix, 1000, 21).mean, 1e-9);
  }
}

TEST(MarginalGain, IsolatedNode) {
  auto g = make_graph(2, {}, {3.0, 1.0});
  EXPECT_EQ(marginal_gain(g, {}, 0, 100, 1), 3.0);
}

TEST(MarginalGain, CoveredDownstreamNodeGainsNothing) {
  auto g = make_graph(3, {{0, 1, 1.0}, {1, 2, 1.0}}, {1, 4, 2});
  const NodeId s[] = {0};
  EXPECT_LE(marginal_gain(g, s, 2, 100, 1), g.weight(2));
  EXPECT_EQ(marginal_gain(g, s, 2, 100, 1), 0.0);
}

TEST(MarginalGain, TwoPathMatchesExact) {
  auto g = testing::two_path_graph();
  const double gain = marginal_gain(g, {}, 0, 200'000, 3);
  const NodeId u[] = {0};
  const auto est = estimate_sigma(g, u, 200'000, 3);
  EXPECT_DOUBLE_EQ(gain, est.mean);  // same streams
  EXPECT_NEAR(gain, 2.125, 4 * est.std_error);
}

TEST(MarginalGain, EqualsDifferenceOfEstimates) {
  auto g = assign_weights(assign_probabilities(random_gnm(40, 160, 2), ConstantProb{0.3}, 0),
                          RandomIntWeight{10}, 3);
  const NodeId s[] = {1, 5};
  const NodeId sv[] = {1, 5, 9};
  const double direct = estimate_sigma(g, sv, 2000, 4).mean - estimate_sigma(g, s, 2000, 4).mean;
  EXPECT_NEAR(marginal_gain(g, s, 9, 2000, 4), direct, 1e-9);
}

TEST(MarginalGain, RejectsExistingSeed) {
  const NodeId s[] = {0};
  EXPECT_THROW(marginal_gain(testing::two_path_graph(), s, 0, 10, 1), Error);
}

TEST(GreedyOracle, LazyAndPlainAgreeWithExactGains) {
  Rng rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    auto g = testing::random_small_graph(rng, 7, 10);
    const std::size_t k = std::min<std::size_t>(3, g.node_count());
    auto plain = greedy_with_oracle(g.node_count(), k, exact_oracle(g), false);
    auto lazy = greedy_with_oracle(g.node_count(), k, exact_oracle(g), true);
    EXPECT_EQ(plain.seeds, lazy.seeds) << "trial " << trial;
  }
}

TEST(GreedyOracle, WithinOneMinusInverseEOfOptimum) {
  Rng rng(8);
  const double ratio = 1.0 - 1.0 / std::numbers::e;
  for (int trial = 0; trial < 25; ++trial) {
    auto g = testing::random_small_graph(rng, 8, 10);
    const auto table = testing::sigma_table(g);
    for (std::size_t k = 1; k <= std::min<std::size_t>(3, g.node_count()); ++k) {
      auto res = greedy_with_oracle(g.node_count(), k, exact_oracle(g));
      EXPECT_GE(exact_sigma(g, res.seeds), ratio * testing::exhaustive_optimum(table, k) - 1e-12);
    }
  }
}

}  // namespace
}  // namespace wicmax
