#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

#include "common.hpp"
#include "graph.hpp"
#include "rng.hpp"

namespace wicmax {

/// Randomness of one cascade.
///
/// Whether edge e is live is decided by the (e+1)-th output of a SplitMix64
/// stream keyed by `key`: live iff to_unit(output) < p_e. Each edge is
/// attempted at most once per cascade, so deciding its outcome up front is
/// equivalent to drawing at attempt time, and makes the outcome independent
/// of the order in which activations are processed.
struct CascadeStream {
  std::uint64_t key = 0;

  /// Stream of repetition `rep` under a master seed.
  static CascadeStream repetition(std::uint64_t master_seed, std::uint64_t rep) {
    return {derive_seed(master_seed, rep)};
  }

  bool live(std::size_t edge, double p) const noexcept {
    return to_unit(stream_at(key, edge + 1)) < p;
  }
};

struct CascadeOutcome {
  /// Activated nodes in activation order (seeds first, ascending).
  std::vector<NodeId> activated;
  /// Total weight of the activated nodes.
  double value = 0.0;
};

struct SpreadEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t repetitions = 0;
  /// Mean number of activated nodes.
  double activated_mean = 0.0;
};

namespace detail {

inline void check_seeds(const WicGraph& g, std::span<const NodeId> seeds) {
  for (NodeId s : seeds) {
    if (s >= g.node_count()) {
      throw Error("seed " + std::to_string(s) + " out of range (node count " +
                  std::to_string(g.node_count()) + ")");
    }
  }
}

/// Reusable visited marks; reset is O(touched) via an epoch counter.
class VisitMarks {
 public:
  explicit VisitMarks(std::size_t n = 0) : stamp_(n, 0) {}

  void next_epoch() {
    if (++epoch_ == 0) {
      std::fill(stamp_.begin(), stamp_.end(), 0);
      epoch_ = 1;
    }
  }
  bool test_and_set(NodeId v) {
    if (stamp_[v] == epoch_) return false;
    stamp_[v] = epoch_;
    return true;
  }
  bool test(NodeId v) const { return stamp_[v] == epoch_; }

 private:
  std::vector<std::uint32_t> stamp_;
  std::uint32_t epoch_ = 0;
};

struct CascadeWorkspace {
  explicit CascadeWorkspace(std::size_t n) : marks(n) {}
  VisitMarks marks;
  std::vector<NodeId> frontier;
  std::vector<NodeId> next;
  std::vector<NodeId> activated;
};

/// Round-synchronous diffusion: round 1 activates the seeds, every node
/// activated in round t tries each out-edge once in round t+1, and the
/// process halts on the first round that activates nothing. Nodes within a
/// round are processed in ascending id order.
inline double cascade(const WicGraph& g, std::span<const NodeId> seeds, CascadeStream stream,
                      CascadeWorkspace& ws) {
  ws.marks.next_epoch();
  ws.frontier.clear();
  ws.activated.clear();
  double value = 0.0;
  for (NodeId s : seeds) {
    if (ws.marks.test_and_set(s)) ws.frontier.push_back(s);
  }
  std::sort(ws.frontier.begin(), ws.frontier.end());
  while (!ws.frontier.empty()) {
    ws.next.clear();
    for (NodeId u : ws.frontier) {
      ws.activated.push_back(u);
      value += g.weight(u);
      for (std::size_t e = g.edge_begin(u); e < g.edge_end(u); ++e) {
        const NodeId v = g.edge_target(e);
        if (ws.marks.test(v)) continue;
        if (stream.live(e, g.edge_prob(e))) {
          ws.marks.test_and_set(v);
          ws.next.push_back(v);
        }
      }
    }
    std::sort(ws.next.begin(), ws.next.end());
    std::swap(ws.frontier, ws.next);
  }
  return value;
}

}  // namespace detail

inline CascadeOutcome run_cascade(const WicGraph& g, std::span<const NodeId> seeds,
                                  CascadeStream stream) {
  detail::check_seeds(g, seeds);
  detail::CascadeWorkspace ws(g.node_count());
  CascadeOutcome out;
  out.value = detail::cascade(g, seeds, stream, ws);
  out.activated = ws.activated;
  return out;
}

/// Monte Carlo estimate of the expected activated weight of `seeds`.
/// Repetition j uses CascadeStream::repetition(rng_seed, j), so the result
/// does not depend on the number of worker threads.
inline SpreadEstimate estimate_sigma(const WicGraph& g, std::span<const NodeId> seeds,
                                     std::size_t repetitions, std::uint64_t rng_seed) {
  if (repetitions == 0) throw Error("estimate_sigma needs at least one repetition");
  detail::check_seeds(g, seeds);
  std::vector<double> values(repetitions);
  std::vector<std::uint32_t> counts(repetitions);
  const auto reps = static_cast<std::int64_t>(repetitions);

#pragma omp parallel
  {
    detail::CascadeWorkspace ws(g.node_count());
#pragma omp for schedule(static)
    for (std::int64_t j = 0; j < reps; ++j) {
      values[j] = detail::cascade(g, seeds, CascadeStream::repetition(rng_seed, j), ws);
      counts[j] = static_cast<std::uint32_t>(ws.activated.size());
    }
  }

  double sum = 0.0;
  double count_sum = 0.0;
  for (std::size_t j = 0; j < repetitions; ++j) {
    sum += values[j];
    count_sum += counts[j];
  }
  SpreadEstimate est;
  est.repetitions = repetitions;
  est.mean = sum / static_cast<double>(repetitions);
  est.activated_mean = count_sum / static_cast<double>(repetitions);
  if (repetitions > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - est.mean) * (v - est.mean);
    const double var = ss / static_cast<double>(repetitions - 1);
    est.std_error = std::sqrt(var / static_cast<double>(repetitions));
  }
  return est;
}

inline constexpr std::size_t kExactSigmaMaxEdges = 25;

/// Exact expected activated weight by enumerating all 2^m live-edge subgraphs.
inline double exact_sigma(const WicGraph& g, std::span<const NodeId> seeds) {
  const std::size_t m = g.edge_count();
  if (m > kExactSigmaMaxEdges) {
    throw Error("exact_sigma enumerates 2^m live-edge subgraphs; limit is m <= " +
                std::to_string(kExactSigmaMaxEdges) + ", graph has m = " + std::to_string(m));
  }
  detail::check_seeds(g, seeds);
  const std::size_t n = g.node_count();
  std::vector<char> active(n);
  std::vector<NodeId> stack;
  double total = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask) {
    double prob = 1.0;
    for (std::size_t e = 0; e < m && prob > 0.0; ++e) {
      prob *= (mask >> e & 1) ? g.edge_prob(e) : 1.0 - g.edge_prob(e);
    }
    if (prob == 0.0) continue;
    std::fill(active.begin(), active.end(), 0);
    stack.clear();
    double value = 0.0;
    for (NodeId s : seeds) {
      if (!active[s]) {
        active[s] = 1;
        stack.push_back(s);
        value += g.weight(s);
      }
    }
    while (!stack.empty()) {
      const NodeId u = stack.back();
      stack.pop_back();
      for (std::size_t e = g.edge_begin(u); e < g.edge_end(u); ++e) {
        const NodeId v = g.edge_target(e);
        if ((mask >> e & 1) && !active[v]) {
          active[v] = 1;
          stack.push_back(v);
          value += g.weight(v);
        }
      }
    }
    total += prob * value;
  }
  return total;
}

}  // namespace wicmax
