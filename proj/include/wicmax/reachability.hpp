#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "common.hpp"
#include "graph.hpp"

namespace wicmax {

/// Accumulated reachability probability p_r(source, node).
struct ReachEntry {
  NodeId node = 0;
  double prob = 0.0;

  friend bool operator==(const ReachEntry&, const ReachEntry&) = default;
};

struct ReachOptions {
  /// A path is extended into a neighbor only while the extended path
  /// probability stays strictly above theta. 0 disables the bound.
  double theta = 0.0;
  /// Maximum number of path extensions per source; 0 means unlimited.
  /// Exceeding it raises PathBudgetExceeded instead of running on.
  std::uint64_t path_budget = 0;
};

class PathBudgetExceeded : public Error {
 public:
  PathBudgetExceeded(NodeId source, std::uint64_t budget)
      : Error("simple-path budget of " + std::to_string(budget) +
              " extensions exceeded from source " + std::to_string(source) +
              "; raise the budget or use a positive theta") {}
};

/// Scratch space for one source at a time; reuse it across sources.
class ReachWorkspace {
 public:
  explicit ReachWorkspace(std::size_t n) : prob_(n, 0.0), on_path_(n, 0) {}

 private:
  struct Frame {
    NodeId node;
    std::size_t next_edge;
    double path_prob;
  };

  std::vector<double> prob_;
  std::vector<char> on_path_;
  std::vector<NodeId> touched_;
  std::vector<Frame> stack_;

  friend std::vector<ReachEntry> gen_pr_bounded(const WicGraph&, NodeId, double,
                                                std::uint64_t, ReachWorkspace&);
};

/// Enumerates every simple path out of `source` depth first and folds each
/// path into p_r(source, v) by noisy-or: p <- 1 - (1 - p)(1 - q), where q is
/// the product of edge probabilities along the path. Before descending from
/// v into neighbor w the extended probability q * p_vw must exceed theta.
///
/// Nodes already on the current path are skipped, so cycles are cut and
/// p_r(source, source) is never produced. The recursion runs on an explicit
/// stack. Entries come back sorted by node.
inline std::vector<ReachEntry> gen_pr_bounded(const WicGraph& g, NodeId source, double theta,
                                              std::uint64_t path_budget, ReachWorkspace& ws) {
  if (!(theta >= 0.0 && theta < 1.0)) throw Error("theta must lie in [0, 1)");
  if (source >= g.node_count()) throw Error("source out of range");
  std::uint64_t extensions = 0;

  ws.stack_.clear();
  ws.stack_.push_back({source, g.edge_begin(source), 1.0});
  ws.on_path_[source] = 1;
  while (!ws.stack_.empty()) {
    auto& top = ws.stack_.back();
    if (top.next_edge == g.edge_end(top.node)) {
      ws.on_path_[top.node] = 0;
      ws.stack_.pop_back();
      continue;
    }
    const std::size_t e = top.next_edge++;
    const NodeId w = g.edge_target(e);
    if (ws.on_path_[w]) continue;
    const double q = top.path_prob * g.edge_prob(e);
    if (!(q > theta)) continue;
    if (path_budget != 0 && ++extensions > path_budget) {
      for (const auto& f : ws.stack_) ws.on_path_[f.node] = 0;
      for (NodeId t : ws.touched_) ws.prob_[t] = 0.0;
      ws.touched_.clear();
      throw PathBudgetExceeded(source, path_budget);
    }
    double& p = ws.prob_[w];
    if (p == 0.0) ws.touched_.push_back(w);
    p = p + q - p * q;
    ws.on_path_[w] = 1;
    ws.stack_.push_back({w, g.edge_begin(w), q});
  }

  std::sort(ws.touched_.begin(), ws.touched_.end());
  std::vector<ReachEntry> out;
  out.reserve(ws.touched_.size());
  for (NodeId t : ws.touched_) {
    out.push_back({t, ws.prob_[t]});
    ws.prob_[t] = 0.0;
  }
  ws.touched_.clear();
  return out;
}

inline std::vector<ReachEntry> gen_pr_bounded(const WicGraph& g, NodeId source, double theta,
                                              std::uint64_t path_budget = 0) {
  ReachWorkspace ws(g.node_count());
  return gen_pr_bounded(g, source, theta, path_budget, ws);
}

/// Unbounded form: every simple path contributes.
inline std::vector<ReachEntry> gen_pr(const WicGraph& g, NodeId source,
                                      std::uint64_t path_budget = 0) {
  return gen_pr_bounded(g, source, 0.0, path_budget);
}

/// Sparse p_r for all ordered pairs, with a transposed copy for predecessor
/// lookups. Only entries with p_r > theta are held.
class ReachStore {
 public:
  ReachStore() = default;

  /// Runs the pre-treatment from every source. Sources are processed in
  /// parallel; shards are assembled in source order.
  static ReachStore build(const WicGraph& g, const ReachOptions& opts = {}) {
    const std::size_t n = g.node_count();
    std::vector<std::vector<ReachEntry>> rows(n);
    const auto count = static_cast<std::int64_t>(n);
    bool failed = false;
    std::string failure;
#pragma omp parallel
    {
      ReachWorkspace ws(n);
#pragma omp for schedule(dynamic, 16)
      for (std::int64_t u = 0; u < count; ++u) {
        bool skip = false;
#pragma omp atomic read
        skip = failed;
        if (skip) continue;
        try {
          rows[u] = gen_pr_bounded(g, static_cast<NodeId>(u), opts.theta, opts.path_budget, ws);
        } catch (const Error& ex) {
#pragma omp critical(wicmax_reach_failure)
          {
            if (!failed) failure = ex.what();
            failed = true;
          }
        }
      }
    }
    if (failed) throw Error(failure);
    return from_rows(std::move(rows), opts.theta);
  }

  /// rows[u] lists (v, p_r(u, v)) sorted by v.
  static ReachStore from_rows(std::vector<std::vector<ReachEntry>> rows, double theta) {
    ReachStore s;
    const std::size_t n = rows.size();
    s.theta_ = theta;
    s.out_offsets_.assign(n + 1, 0);
    for (std::size_t u = 0; u < n; ++u) s.out_offsets_[u + 1] = s.out_offsets_[u] + rows[u].size();
    s.out_.reserve(s.out_offsets_[n]);
    for (auto& row : rows) {
      s.out_.insert(s.out_.end(), row.begin(), row.end());
      std::vector<ReachEntry>().swap(row);
    }
    s.build_transpose();
    return s;
  }

  std::size_t node_count() const { return out_offsets_.empty() ? 0 : out_offsets_.size() - 1; }
  std::size_t size() const { return out_.size(); }
  double theta() const { return theta_; }

  /// (v, p_r(u, v)) for every stored v, ascending.
  std::span<const ReachEntry> successors(NodeId u) const {
    return {out_.data() + out_offsets_[u], out_offsets_[u + 1] - out_offsets_[u]};
  }
  /// (v, p_r(v, u)) for every stored v, ascending.
  std::span<const ReachEntry> predecessors(NodeId u) const {
    return {in_.data() + in_offsets_[u], in_offsets_[u + 1] - in_offsets_[u]};
  }

  /// p_r(u, v), or 0 when not stored.
  double get(NodeId u, NodeId v) const {
    auto row = successors(u);
    auto it = std::lower_bound(row.begin(), row.end(), v,
                               [](const ReachEntry& e, NodeId x) { return e.node < x; });
    return (it != row.end() && it->node == v) ? it->prob : 0.0;
  }

  friend bool operator==(const ReachStore&, const ReachStore&) = default;

 private:
  void build_transpose() {
    const std::size_t n = node_count();
    in_offsets_.assign(n + 1, 0);
    for (const auto& e : out_) ++in_offsets_[e.node + 1];
    for (std::size_t i = 0; i < n; ++i) in_offsets_[i + 1] += in_offsets_[i];
    in_.resize(out_.size());
    std::vector<std::size_t> cursor(in_offsets_.begin(), in_offsets_.end() - 1);
    for (NodeId u = 0; u < n; ++u) {
      for (const auto& e : successors(u)) in_[cursor[e.node]++] = {u, e.prob};
    }
  }

  double theta_ = 0.0;
  std::vector<std::size_t> out_offsets_;
  std::vector<ReachEntry> out_;
  std::vector<std::size_t> in_offsets_;
  std::vector<ReachEntry> in_;
};

/// Influence value tree (successors) and weight discount tree
/// (predecessors), with their theta-bounded variants. Only (node, p_r) pairs
/// are kept; the path structure is never needed.
enum class TreeKind { IVT, WDT, BIVT, BWDT };

struct InfluenceTree {
  NodeId root = 0;
  TreeKind kind = TreeKind::IVT;
  std::vector<ReachEntry> entries;
  /// V_root = sum p_r(root, v) * w_v for IVT kinds;
  /// W_root = sum p_r(v, root) * w_root for WDT kinds.
  double value = 0.0;
};

/// Materializes a tree from the store. Bounded kinds keep entries with
/// p_r > store.theta(), which for a store built at that theta is all of them.
inline InfluenceTree build_tree(const ReachStore& store, const WicGraph& g, NodeId root,
                                TreeKind kind) {
  InfluenceTree t;
  t.root = root;
  t.kind = kind;
  const bool outward = kind == TreeKind::IVT || kind == TreeKind::BIVT;
  const bool bounded = kind == TreeKind::BIVT || kind == TreeKind::BWDT;
  auto source = outward ? store.successors(root) : store.predecessors(root);
  for (const auto& e : source) {
    if (bounded && !(e.prob > store.theta())) continue;
    t.entries.push_back(e);
    t.value += outward ? e.prob * g.weight(e.node) : e.prob * g.weight(root);
  }
  return t;
}

// ---------------------------------------------------------------------------
// On-disk cache
//
// Layout (little-endian): 8-byte magic "WICPR\0\0\1", u64 graph hash,
// f64 theta, u64 node count, u64 record count, then records of
// (u32 source, u32 target, f64 p_r) in (source, target) order.

inline constexpr char kReachCacheMagic[8] = {'W', 'I', 'C', 'P', 'R', 0, 0, 1};

namespace detail {

template <class T>
void write_le(std::ostream& out, T value) {
  static_assert(std::endian::native == std::endian::little, "cache format assumes little-endian");
  out.write(reinterpret_cast<const char*>(&value), sizeof value);
}

template <class T>
T read_le(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof value);
  if (!in) throw Error("reach cache truncated");
  return value;
}

}  // namespace detail

inline void save_reach_store(const std::string& path, const ReachStore& store,
                             std::uint64_t graph_key) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp);
    out.write(kReachCacheMagic, sizeof kReachCacheMagic);
    detail::write_le<std::uint64_t>(out, graph_key);
    detail::write_le<double>(out, store.theta());
    detail::write_le<std::uint64_t>(out, store.node_count());
    detail::write_le<std::uint64_t>(out, store.size());
    for (NodeId u = 0; u < store.node_count(); ++u) {
      for (const auto& e : store.successors(u)) {
        detail::write_le<std::uint32_t>(out, u);
        detail::write_le<std::uint32_t>(out, e.node);
        detail::write_le<double>(out, e.prob);
      }
    }
    if (!out) throw Error("failed writing " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw Error("cannot move cache to " + path);
}

/// Loads a cache written by save_reach_store. Fails if the key or theta
/// does not match what the caller expects.
inline ReachStore load_reach_store(const std::string& path, std::uint64_t graph_key,
                                   double theta) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kReachCacheMagic, sizeof magic) != 0) {
    throw Error(path + ": not a reachability cache");
  }
  if (detail::read_le<std::uint64_t>(in) != graph_key) throw Error(path + ": graph hash mismatch");
  if (std::bit_cast<std::uint64_t>(detail::read_le<double>(in)) !=
      std::bit_cast<std::uint64_t>(theta)) {
    throw Error(path + ": theta mismatch");
  }
  const auto n = detail::read_le<std::uint64_t>(in);
  const auto records = detail::read_le<std::uint64_t>(in);
  std::vector<std::vector<ReachEntry>> rows(n);
  for (std::uint64_t i = 0; i < records; ++i) {
    const auto u = detail::read_le<std::uint32_t>(in);
    const auto v = detail::read_le<std::uint32_t>(in);
    const auto p = detail::read_le<double>(in);
    if (u >= n || v >= n) throw Error(path + ": record out of range");
    rows[u].push_back({v, p});
  }
  return ReachStore::from_rows(std::move(rows), theta);
}

}  // namespace wicmax
