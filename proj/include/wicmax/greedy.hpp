#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <queue>
#include <span>
#include <vector>

#include "cascade.hpp"
#include "common.hpp"
#include "graph.hpp"

namespace wicmax {

struct GreedyConfig {
  std::size_t k = 1;
  /// Simulations per candidate evaluation.
  std::size_t repetitions = 10'000;
  std::uint64_t rng_seed = 0;
  /// CELF-style lazy re-evaluation of stale gains.
  bool lazy = false;
};

namespace detail {

inline void check_k(std::size_t k, std::size_t n) {
  if (k > n) {
    throw Error("k = " + std::to_string(k) + " exceeds node count " + std::to_string(n));
  }
}

/// Hill climbing over nodes [0, n).
///
/// `gain(v)` returns the marginal value of v against the current seed set and
/// must be safe to call concurrently when `parallel` is set. `commit(v)` adds v
/// and returns the step score recorded for it. Ties go to the smallest id.
template <class Gain, class Commit>
SeedResult hill_climb(std::size_t n, std::size_t k, bool lazy, bool parallel, Gain&& gain,
                      Commit&& commit) {
  check_k(k, n);
  Stopwatch clock;
  SeedResult out;
  std::vector<char> chosen(n, 0);
  std::vector<double> gains(n, 0.0);
  const auto count = static_cast<std::int64_t>(n);

  auto evaluate_all = [&] {
#pragma omp parallel for schedule(dynamic, 64) if (parallel)
    for (std::int64_t v = 0; v < count; ++v) {
      if (!chosen[v]) gains[v] = gain(static_cast<NodeId>(v));
    }
  };
  auto take = [&](NodeId v) {
    chosen[v] = 1;
    out.seeds.push_back(v);
    out.step_scores.push_back(commit(v));
    out.step_ms.push_back(clock.elapsed_ms());
  };

  if (!lazy) {
    for (std::size_t round = 0; round < k; ++round) {
      evaluate_all();
      NodeId best = 0;
      bool found = false;
      for (NodeId v = 0; v < n; ++v) {
        if (chosen[v]) continue;
        if (!found || gains[v] > gains[best]) {
          best = v;
          found = true;
        }
      }
      take(best);
    }
    return out;
  }

  struct Entry {
    double gain;
    NodeId node;
    std::size_t round;
  };
  auto worse = [](const Entry& a, const Entry& b) {
    if (a.gain != b.gain) return a.gain < b.gain;
    return a.node > b.node;
  };
  std::priority_queue<Entry, std::vector<Entry>, decltype(worse)> heap(worse);
  if (k == 0) return out;
  evaluate_all();
  for (NodeId v = 0; v < n; ++v) heap.push({gains[v], v, 0});
  std::size_t round = 0;
  while (out.seeds.size() < k) {
    Entry top = heap.top();
    heap.pop();
    if (top.round == round) {
      take(top.node);
      ++round;
    } else {
      heap.push({gain(top.node), top.node, round});
    }
  }
  return out;
}

/// R fixed live-edge worlds together with the set reached by the current
/// seeds in each. Under common random numbers the cascade of S + {v} in
/// world j reaches reach_j(S) united with reach_j(v), so a candidate's gain
/// is the weight of what v reaches outside reach_j(S).
class LiveWorlds {
 public:
  LiveWorlds(const WicGraph& g, std::size_t repetitions, std::uint64_t rng_seed)
      : g_(&g),
        words_((g.node_count() + 63) / 64),
        bits_(repetitions * words_, 0),
        base_(repetitions, 0.0) {
    if (repetitions == 0) throw Error("at least one repetition is required");
    streams_.reserve(repetitions);
    for (std::size_t j = 0; j < repetitions; ++j) {
      streams_.push_back(CascadeStream::repetition(rng_seed, j));
    }
  }

  std::size_t repetitions() const { return streams_.size(); }

  bool reached(std::size_t world, NodeId v) const {
    return bits_[world * words_ + v / 64] >> (v % 64) & 1;
  }

  /// Mean activated weight of the current seed set.
  double mean_value() const {
    double sum = 0.0;
    for (double b : base_) sum += b;
    return sum / static_cast<double>(base_.size());
  }

  void add_seed(NodeId v) {
    std::vector<NodeId> stack;
    for (std::size_t j = 0; j < streams_.size(); ++j) {
      if (reached(j, v)) continue;
      std::uint64_t* world = bits_.data() + j * words_;
      world[v / 64] |= std::uint64_t{1} << (v % 64);
      base_[j] += g_->weight(v);
      stack.assign(1, v);
      while (!stack.empty()) {
        const NodeId u = stack.back();
        stack.pop_back();
        for (std::size_t e = g_->edge_begin(u); e < g_->edge_end(u); ++e) {
          const NodeId x = g_->edge_target(e);
          if (world[x / 64] >> (x % 64) & 1) continue;
          if (streams_[j].live(e, g_->edge_prob(e))) {
            world[x / 64] |= std::uint64_t{1} << (x % 64);
            base_[j] += g_->weight(x);
            stack.push_back(x);
          }
        }
      }
    }
  }

  /// Mean extra weight v activates beyond the current seed set.
  double gain(NodeId v, VisitMarks& marks, std::vector<NodeId>& stack) const {
    double sum = 0.0;
    for (std::size_t j = 0; j < streams_.size(); ++j) {
      if (reached(j, v)) continue;
      marks.next_epoch();
      marks.test_and_set(v);
      double extra = g_->weight(v);
      stack.assign(1, v);
      while (!stack.empty()) {
        const NodeId u = stack.back();
        stack.pop_back();
        for (std::size_t e = g_->edge_begin(u); e < g_->edge_end(u); ++e) {
          const NodeId x = g_->edge_target(e);
          if (marks.test(x) || reached(j, x)) continue;
          if (streams_[j].live(e, g_->edge_prob(e))) {
            marks.test_and_set(x);
            extra += g_->weight(x);
            stack.push_back(x);
          }
        }
      }
      sum += extra;
    }
    return sum / static_cast<double>(streams_.size());
  }

 private:
  const WicGraph* g_;
  std::size_t words_;
  std::vector<std::uint64_t> bits_;
  std::vector<double> base_;
  std::vector<CascadeStream> streams_;
};

struct GainScratch {
  explicit GainScratch(std::size_t n) : marks(n) {}
  VisitMarks marks;
  std::vector<NodeId> stack;
};

inline int thread_index() {
#ifdef _OPENMP
  return omp_get_thread_num();
#else
  return 0;
#endif
}

inline int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace detail

/// Greedy seed selection with Monte Carlo marginal gains.
///
/// Each round adds the node whose addition maximizes the estimated expected
/// activated weight. All rounds share the same R live-edge worlds, so
/// estimates of sigma(S + {v}) for different v are paired. step_scores holds
/// the estimated sigma of the seed prefix after each pick.
inline SeedResult greedy_select(const WicGraph& g, const GreedyConfig& cfg) {
  detail::check_k(cfg.k, g.node_count());
  if (cfg.repetitions == 0) throw Error("greedy needs at least one repetition");
  detail::LiveWorlds worlds(g, cfg.repetitions, cfg.rng_seed);
  std::vector<detail::GainScratch> scratch;
  for (int t = 0; t < detail::max_threads(); ++t) scratch.emplace_back(g.node_count());

  auto gain = [&](NodeId v) {
    auto& s = scratch[static_cast<std::size_t>(detail::thread_index())];
    return worlds.gain(v, s.marks, s.stack);
  };
  auto commit = [&](NodeId v) {
    worlds.add_seed(v);
    return worlds.mean_value();
  };
  return detail::hill_climb(g.node_count(), cfg.k, cfg.lazy, true, gain, commit);
}

/// Estimated sigma(S + {v}) - sigma(S) with both terms read from the same
/// live-edge worlds.
inline double marginal_gain(const WicGraph& g, std::span<const NodeId> seeds, NodeId v,
                            std::size_t repetitions, std::uint64_t rng_seed) {
  detail::check_seeds(g, seeds);
  detail::check_seeds(g, std::span<const NodeId>(&v, 1));
  if (std::find(seeds.begin(), seeds.end(), v) != seeds.end()) {
    throw Error("marginal_gain: node " + std::to_string(v) + " is already a seed");
  }
  detail::LiveWorlds worlds(g, repetitions, rng_seed);
  for (NodeId s : seeds) worlds.add_seed(s);
  detail::GainScratch scratch(g.node_count());
  return worlds.gain(v, scratch.marks, scratch.stack);
}

/// Greedy hill climbing against an arbitrary set function `sigma`, called as
/// sigma(std::span<const NodeId>). Used with exact_sigma on small graphs.
template <class Sigma>
SeedResult greedy_with_oracle(std::size_t node_count, std::size_t k, Sigma&& sigma,
                              bool lazy = false) {
  std::vector<NodeId> current;
  double base = sigma(std::span<const NodeId>(current));
  auto gain = [&](NodeId v) {
    std::vector<NodeId> with = current;
    with.push_back(v);
    return sigma(std::span<const NodeId>(with)) - base;
  };
  auto commit = [&](NodeId v) {
    current.push_back(v);
    base = sigma(std::span<const NodeId>(current));
    return base;
  };
  return detail::hill_climb(node_count, k, lazy, false, gain, commit);
}

}  // namespace wicmax
