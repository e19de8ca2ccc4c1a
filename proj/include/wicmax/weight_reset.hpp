#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "common.hpp"
#include "graph.hpp"
#include "greedy.hpp"
#include "reachability.hpp"

namespace wicmax {

/// Mutable bookkeeping of a weight-reset run, observable between rounds.
struct SelectionState {
  /// Copy of the node weights, zeroed for seeds and discounted by
  /// (1 - p_r(seed, v)) for everything a seed reaches.
  std::vector<double> residual_weights;
  /// V_u = sum over stored v of p_r(u, v) * residual_weights[v].
  std::vector<double> values;
  std::vector<NodeId> selected;
  std::vector<char> is_selected;
};

struct SelectionOptions {
  /// Rank candidates by V_u + residual weight of u (the seed's own activation
  /// counts toward its value). false ranks by V_u alone.
  bool score_with_self = true;
  /// Called after every round with the updated state.
  std::function<void(const SelectionState&)> on_round;
};

/// Residual weights below this are treated as exhausted.
inline constexpr double kWeightFloor = 1e-12;
/// Relative slack under which two candidate scores count as tied.
inline constexpr double kTieTolerance = 1e-9;

/// V_u for every node from scratch.
inline std::vector<double> node_values(const ReachStore& store, std::span<const double> weights) {
  std::vector<double> values(store.node_count(), 0.0);
  for (NodeId u = 0; u < store.node_count(); ++u) {
    double v = 0.0;
    for (const auto& e : store.successors(u)) v += e.prob * weights[e.node];
    values[u] = v;
  }
  return values;
}

namespace detail {

enum class ValueUpdate {
  /// Recompute V from scratch for every node whose tree saw a weight change.
  FullRecompute,
  /// Subtract p_r * (weight change) from each stored predecessor.
  Incremental,
};

inline double recompute_value(const ReachStore& store, std::span<const double> residual,
                              NodeId u) {
  double v = 0.0;
  for (const auto& e : store.successors(u)) v += e.prob * residual[e.node];
  return v;
}

inline NodeId pick_candidate(const SelectionState& s, bool with_self, double& score_out) {
  NodeId best = 0;
  bool found = false;
  double best_score = 0.0;
  for (NodeId v = 0; v < s.values.size(); ++v) {
    if (s.is_selected[v]) continue;
    const double score = s.values[v] + (with_self ? s.residual_weights[v] : 0.0);
    if (!found ||
        score > best_score + kTieTolerance * std::max(1.0, std::abs(best_score))) {
      best = v;
      best_score = score;
      found = true;
    }
  }
  score_out = best_score;
  return best;
}

template <ValueUpdate Mode>
SeedResult weight_reset(const WicGraph& g, const ReachStore& store, std::size_t k,
                        const SelectionOptions& opts, const Stopwatch& clock) {
  const std::size_t n = g.node_count();
  check_k(k, n);
  if (store.node_count() != n) throw Error("reach store does not match graph");

  SelectionState s;
  s.residual_weights.assign(g.weights().begin(), g.weights().end());
  s.values = node_values(store, s.residual_weights);
  s.is_selected.assign(n, 0);
  auto& r = s.residual_weights;
  auto& V = s.values;

  std::vector<char> dirty(n, 0);
  std::vector<NodeId> dirty_list;
  auto mark_dirty = [&](NodeId x) {
    if (!dirty[x]) {
      dirty[x] = 1;
      dirty_list.push_back(x);
    }
  };

  SeedResult out;
  for (std::size_t round = 0; round < k; ++round) {
    double score = 0.0;
    const NodeId u = pick_candidate(s, opts.score_with_self, score);
    s.selected.push_back(u);
    s.is_selected[u] = 1;

    if constexpr (Mode == ValueUpdate::FullRecompute) {
      r[u] = 0.0;
      for (const auto& pred : store.predecessors(u)) V[pred.node] = recompute_value(store, r, pred.node);
      for (const auto& succ : store.successors(u)) {
        const double old = r[succ.node];
        double now = (1.0 - succ.prob) * old;
        if (now < kWeightFloor) now = 0.0;
        if (now == old) continue;
        r[succ.node] = now;
        for (const auto& pred : store.predecessors(succ.node)) mark_dirty(pred.node);
      }
      for (NodeId x : dirty_list) {
        V[x] = recompute_value(store, r, x);
        dirty[x] = 0;
      }
      dirty_list.clear();
    } else {
      for (const auto& pred : store.predecessors(u)) V[pred.node] -= r[u] * pred.prob;
      for (const auto& succ : store.successors(u)) {
        const double old = r[succ.node];
        double now = (1.0 - succ.prob) * old;
        if (now < kWeightFloor) now = 0.0;
        const double delta = old - now;
        if (delta == 0.0) continue;
        r[succ.node] = now;
        for (const auto& pred : store.predecessors(succ.node)) V[pred.node] -= pred.prob * delta;
      }
      r[u] = 0.0;
    }

    out.seeds.push_back(u);
    out.step_scores.push_back(score);
    out.step_ms.push_back(clock.elapsed_ms());
    if (opts.on_round) opts.on_round(s);
  }
  return out;
}

}  // namespace detail

/// Weight Reset node selection on an unbounded store (theta = 0).
///
/// Each round takes the best-scoring unselected node u, zeroes its residual
/// weight and recomputes V for everything in WDT(u), discounts each v in
/// IVT(u) by (1 - p_r(u, v)), then recomputes V for every node whose tree
/// contains a discounted node.
inline SeedResult wr_select(const WicGraph& g, const ReachStore& store, std::size_t k,
                            const SelectionOptions& opts = {}) {
  if (store.theta() != 0.0) throw Error("wr_select needs an unbounded store (theta = 0)");
  Stopwatch clock;
  return detail::weight_reset<detail::ValueUpdate::FullRecompute>(g, store, k, opts, clock);
}

/// Runs the unbounded pre-treatment and then wr_select; step_ms includes
/// the pre-treatment.
inline SeedResult wr_select(const WicGraph& g, std::size_t k, const SelectionOptions& opts = {},
                            std::uint64_t path_budget = 0) {
  detail::check_k(k, g.node_count());
  Stopwatch clock;
  const auto store = ReachStore::build(g, {0.0, path_budget});
  return detail::weight_reset<detail::ValueUpdate::FullRecompute>(g, store, k, opts, clock);
}

/// Bounded Weight Reset selection on a prebuilt store (usually built with
/// the same theta). V values are maintained incrementally: the chosen node's
/// contribution is removed from every BWDT member, and each weight discount
/// in BIVT(u) is pushed to the discounted node's predecessors.
inline SeedResult bwr_select(const WicGraph& g, const ReachStore& store, std::size_t k,
                             const SelectionOptions& opts = {}) {
  Stopwatch clock;
  return detail::weight_reset<detail::ValueUpdate::Incremental>(g, store, k, opts, clock);
}

/// Full BWR: theta-bounded pre-treatment from every source, then selection.
inline SeedResult bwr_select(const WicGraph& g, std::size_t k, double theta,
                             const SelectionOptions& opts = {}, std::uint64_t path_budget = 0) {
  if (!(theta >= 0.0 && theta < 1.0)) throw Error("theta must lie in [0, 1)");
  detail::check_k(k, g.node_count());
  Stopwatch clock;
  const auto store = ReachStore::build(g, {theta, path_budget});
  return detail::weight_reset<detail::ValueUpdate::Incremental>(g, store, k, opts, clock);
}

// ---------------------------------------------------------------------------
// Choosing theta
//
// With mean edge probability p, mean out-degree d and influence horizon
// alpha, the expected node value is (pd + (pd)^2 + ... + (pd)^alpha) * w.
// Bounding paths by theta truncates the sum at alpha' = log_p(theta), and
// the WR/BWR solution ratio is at most (1 - (pd)^alpha) / (1 - (pd)^alpha').

struct ThetaAnalysis {
  double p = 0.0;
  double d = 0.0;
  double alpha = 0.0;
  double epsilon = 0.0;
  /// Largest theta meeting the (1 + epsilon) target.
  double theta = 0.0;
  /// alpha' = log_p(theta).
  double horizon = 0.0;
  /// (1 - (pd)^alpha) / (1 - (pd)^alpha').
  double ratio_bound = 0.0;
  /// 1 - (pd)^alpha': the bound's reciprocal when (pd)^alpha is taken as 0.
  double ratio_floor = 0.0;
  /// 1 / ratio_bound.
  double beta = 0.0;
};

/// alpha' = log_p(theta).
inline double implied_horizon(double p, double theta) { return std::log(theta) / std::log(p); }

/// (1 - (pd)^alpha) / (1 - (pd)^horizon).
inline double ratio_bound(double p, double d, double alpha, double horizon) {
  const double pd = p * d;
  return (1.0 - std::pow(pd, alpha)) / (1.0 - std::pow(pd, horizon));
}

inline ThetaAnalysis suggest_theta(double p, double d, double alpha, double epsilon) {
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("p must lie in (0, 1)");
  if (!(d > 0.0)) throw std::invalid_argument("d must be positive");
  if (!(alpha >= 1.0)) throw std::invalid_argument("alpha must be at least 1");
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");

  const double pd = p * d;
  const double one_minus_inv_e = 1.0 - 1.0 / std::numbers::e;
  const double ratio_term = (1.0 - std::pow(pd, alpha)) / (one_minus_inv_e * (1.0 + epsilon));
  const double base = 1.0 - ratio_term;
  if (!(base > 0.0)) {
    throw std::invalid_argument(
        "base 1 - (1-(pd)^alpha)/((1-1/e)(1+epsilon)) = " + std::to_string(base) +
        " is not > 0: (1-(pd)^alpha) >= (1-1/e)(1+epsilon); increase epsilon");
  }
  if (!(base < 1.0)) {
    throw std::invalid_argument("base 1 - (1-(pd)^alpha)/((1-1/e)(1+epsilon)) = " +
                                std::to_string(base) + " is not < 1: needs p*d < 1 (p*d = " +
                                std::to_string(pd) + ")");
  }
  // 1 + 1/log_d(p) = ln(pd) / ln(p), positive whenever pd < 1.
  const double exponent = std::log(p) / std::log(pd);

  ThetaAnalysis a;
  a.p = p;
  a.d = d;
  a.alpha = alpha;
  a.epsilon = epsilon;
  a.theta = std::pow(base, exponent);
  a.horizon = implied_horizon(p, a.theta);
  a.ratio_bound = ratio_bound(p, d, alpha, a.horizon);
  a.ratio_floor = 1.0 - std::pow(pd, a.horizon);
  a.beta = 1.0 / a.ratio_bound;
  return a;
}

}  // namespace wicmax
