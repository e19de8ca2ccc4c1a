#pragma once

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "common.hpp"
#include "rng.hpp"

namespace wicmax {

/// Directed graph under the weighted independent cascade model.
///
/// Forward adjacency is stored in CSR form with targets ascending per source,
/// so the edge index (position in the forward arrays) enumerates edges in
/// (source, target) order. The reverse adjacency is the exact transpose and
/// keeps, for each entry, the index of its forward edge.
///
/// Instances are immutable once parameterized; `with_probabilities` and
/// `with_weights` return modified copies.
class WicGraph {
 public:
  WicGraph() = default;

  /// Builds from dense endpoint pairs. Self-loops are dropped and duplicate
  /// ordered pairs collapse to one edge. Probabilities and weights start at 0.
  static WicGraph from_edges(std::size_t node_count,
                             std::vector<std::pair<NodeId, NodeId>> edges,
                             std::vector<std::uint64_t> labels = {}) {
    if (node_count == 0) throw Error("graph has no nodes");
    if (!labels.empty() && labels.size() != node_count) {
      throw Error("label table size does not match node count");
    }
    std::erase_if(edges, [](const auto& e) { return e.first == e.second; });
    for (const auto& [u, v] : edges) {
      if (u >= node_count || v >= node_count) throw Error("edge endpoint out of range");
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    WicGraph g;
    g.offsets_.assign(node_count + 1, 0);
    for (const auto& e : edges) ++g.offsets_[e.first + 1];
    for (std::size_t i = 0; i < node_count; ++i) g.offsets_[i + 1] += g.offsets_[i];
    g.targets_.reserve(edges.size());
    for (const auto& e : edges) g.targets_.push_back(e.second);
    g.probs_.assign(edges.size(), 0.0);
    g.weights_.assign(node_count, 0.0);
    if (labels.empty()) {
      labels.resize(node_count);
      for (std::size_t i = 0; i < node_count; ++i) labels[i] = i;
    }
    g.labels_ = std::move(labels);
    g.build_reverse();
    return g;
  }

  std::size_t node_count() const noexcept { return weights_.size(); }
  std::size_t edge_count() const noexcept { return targets_.size(); }

  /// Index of u's first out-edge; out-edges of u are [edge_begin(u), edge_begin(u+1)).
  std::size_t edge_begin(NodeId u) const { return offsets_[u]; }
  std::size_t edge_end(NodeId u) const { return offsets_[u + 1]; }
  NodeId edge_source(std::size_t e) const {
    auto it = std::upper_bound(offsets_.begin(), offsets_.end(), e);
    return static_cast<NodeId>(it - offsets_.begin() - 1);
  }
  NodeId edge_target(std::size_t e) const { return targets_[e]; }
  double edge_prob(std::size_t e) const { return probs_[e]; }

  std::span<const NodeId> out_targets(NodeId u) const {
    return {targets_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
  }
  std::span<const double> out_probs(NodeId u) const {
    return {probs_.data() + offsets_[u], offsets_[u + 1] - offsets_[u]};
  }
  std::span<const NodeId> in_sources(NodeId v) const {
    return {rsources_.data() + roffsets_[v], roffsets_[v + 1] - roffsets_[v]};
  }
  std::span<const double> in_probs(NodeId v) const {
    return {rprobs_.data() + roffsets_[v], roffsets_[v + 1] - roffsets_[v]};
  }
  /// Forward edge index of each reverse entry of v.
  std::span<const std::size_t> in_edges(NodeId v) const {
    return {redges_.data() + roffsets_[v], roffsets_[v + 1] - roffsets_[v]};
  }

  std::span<const double> probabilities() const noexcept { return probs_; }
  std::span<const double> weights() const noexcept { return weights_; }
  double weight(NodeId u) const { return weights_[u]; }

  std::span<const std::uint64_t> labels() const noexcept { return labels_; }
  std::uint64_t label(NodeId u) const { return labels_[u]; }

  std::optional<NodeId> find_label(std::uint64_t raw) const {
    // Labels are ascending after load_edge_list; fall back to a scan otherwise.
    if (std::is_sorted(labels_.begin(), labels_.end())) {
      auto it = std::lower_bound(labels_.begin(), labels_.end(), raw);
      if (it != labels_.end() && *it == raw) return static_cast<NodeId>(it - labels_.begin());
      return std::nullopt;
    }
    auto it = std::find(labels_.begin(), labels_.end(), raw);
    if (it == labels_.end()) return std::nullopt;
    return static_cast<NodeId>(it - labels_.begin());
  }

  /// Forward edge index of u->v, if present.
  std::optional<std::size_t> find_edge(NodeId u, NodeId v) const {
    auto first = targets_.begin() + static_cast<std::ptrdiff_t>(offsets_[u]);
    auto last = targets_.begin() + static_cast<std::ptrdiff_t>(offsets_[u + 1]);
    auto it = std::lower_bound(first, last, v);
    if (it == last || *it != v) return std::nullopt;
    return static_cast<std::size_t>(it - targets_.begin());
  }

  /// Copy with per-edge probabilities given in edge-index order.
  [[nodiscard]] WicGraph with_probabilities(std::vector<double> probs) const {
    if (probs.size() != edge_count()) throw Error("probability vector size mismatch");
    for (double p : probs) {
      if (!(p >= 0.0 && p <= 1.0)) throw Error("edge probability outside [0,1]");
    }
    WicGraph g = *this;
    g.probs_ = std::move(probs);
    for (std::size_t i = 0; i < g.redges_.size(); ++i) g.rprobs_[i] = g.probs_[g.redges_[i]];
    return g;
  }

  [[nodiscard]] WicGraph with_weights(std::vector<double> weights) const {
    if (weights.size() != node_count()) throw Error("weight vector size mismatch");
    for (double w : weights) {
      if (!(w >= 0.0) || !std::isfinite(w)) {
        throw Error("node weight must be finite and non-negative");
      }
    }
    WicGraph g = *this;
    g.weights_ = std::move(weights);
    return g;
  }

  friend bool operator==(const WicGraph&, const WicGraph&) = default;

 private:
  void build_reverse() {
    const std::size_t n = node_count();
    roffsets_.assign(n + 1, 0);
    for (NodeId t : targets_) ++roffsets_[t + 1];
    for (std::size_t i = 0; i < n; ++i) roffsets_[i + 1] += roffsets_[i];
    rsources_.resize(targets_.size());
    redges_.resize(targets_.size());
    rprobs_.resize(targets_.size());
    std::vector<std::size_t> cursor(roffsets_.begin(), roffsets_.end() - 1);
    for (NodeId u = 0; u < n; ++u) {
      for (std::size_t e = offsets_[u]; e < offsets_[u + 1]; ++e) {
        const std::size_t slot = cursor[targets_[e]]++;
        rsources_[slot] = u;
        redges_[slot] = e;
        rprobs_[slot] = probs_[e];
      }
    }
  }

  std::vector<std::size_t> offsets_;
  std::vector<NodeId> targets_;
  std::vector<double> probs_;
  std::vector<std::size_t> roffsets_;
  std::vector<NodeId> rsources_;
  std::vector<std::size_t> redges_;
  std::vector<double> rprobs_;
  std::vector<double> weights_;
  std::vector<std::uint64_t> labels_;
};

// ---------------------------------------------------------------------------
// Parameter schemes

/// Each edge draws uniformly from {0.001, 0.01, 0.1}.
struct Trivalency {};
struct ConstantProb {
  double p = 0.1;
};
/// Lines of "<u-label> <v-label> <p>".
struct ProbFile {
  std::string path;
};
using ProbScheme = std::variant<Trivalency, ConstantProb, ProbFile>;

struct UniformWeight {
  double value = 1.0;
};
/// Each node draws uniformly from {1, ..., max}.
struct RandomIntWeight {
  std::uint32_t max = 10;
};
/// Lines of "<u-label> <weight>".
struct WeightFile {
  std::string path;
};
using WeightScheme = std::variant<UniformWeight, RandomIntWeight, WeightFile>;

inline constexpr double kTrivalencyLevels[3] = {0.001, 0.01, 0.1};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < s.size() && s[j] != ' ' && s[j] != '\t' && s[j] != '\r') ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

template <class T>
std::optional<T> parse_number(std::string_view token) {
  T value{};
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(token.data(), end, value);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

/// Calls fn(line_number, tokens) for every non-blank, non-comment line.
template <class Fn>
void for_each_record(std::istream& in, Fn&& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto body = trim(line);
    if (body.empty() || body.front() == '#') continue;
    fn(line_no, split_ws(body));
  }
}

inline std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  return in;
}

inline std::uint64_t parse_label(const std::string& source, std::size_t line,
                                 std::string_view token) {
  auto v = parse_number<std::uint64_t>(token);
  if (!v) throw ParseError(source, line, "expected a non-negative integer label, got '" +
                                             std::string(token) + "'");
  return *v;
}

}  // namespace detail

/// Reads a SNAP-style edge list: "<u> <v>" per line, '#' starts a comment.
/// Raw labels are remapped to dense ids in ascending label order.
inline WicGraph read_edge_list(std::istream& in, bool undirected,
                               const std::string& source = "<stream>") {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> raw;
  detail::for_each_record(in, [&](std::size_t line, const auto& tokens) {
    if (tokens.size() != 2) {
      throw ParseError(source, line, "expected two labels, got " +
                                         std::to_string(tokens.size()) + " tokens");
    }
    raw.emplace_back(detail::parse_label(source, line, tokens[0]),
                     detail::parse_label(source, line, tokens[1]));
  });
  if (raw.empty()) throw Error(source + ": empty graph");

  std::vector<std::uint64_t> labels;
  labels.reserve(raw.size() * 2);
  for (const auto& [a, b] : raw) {
    labels.push_back(a);
    labels.push_back(b);
  }
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  auto dense = [&](std::uint64_t l) {
    return static_cast<NodeId>(std::lower_bound(labels.begin(), labels.end(), l) -
                               labels.begin());
  };

  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(raw.size() * (undirected ? 2 : 1));
  for (const auto& [a, b] : raw) {
    edges.emplace_back(dense(a), dense(b));
    if (undirected) edges.emplace_back(dense(b), dense(a));
  }
  const std::size_t n = labels.size();
  return WicGraph::from_edges(n, std::move(edges), std::move(labels));
}

inline WicGraph load_edge_list(const std::string& path, bool undirected) {
  auto in = detail::open_input(path);
  return read_edge_list(in, undirected, path);
}

/// Sets every edge probability per `scheme`. Random draws consume one
/// SplitMix64 stream in edge-index order, i.e. (source, target) ascending.
inline WicGraph assign_probabilities(const WicGraph& g, const ProbScheme& scheme,
                                     std::uint64_t rng_seed) {
  std::vector<double> probs(g.edge_count());
  if (std::holds_alternative<Trivalency>(scheme)) {
    Rng rng(rng_seed);
    for (double& p : probs) p = kTrivalencyLevels[rng.below(3)];
  } else if (const auto* c = std::get_if<ConstantProb>(&scheme)) {
    if (!(c->p >= 0.0 && c->p <= 1.0)) throw Error("constant probability outside [0,1]");
    std::fill(probs.begin(), probs.end(), c->p);
  } else {
    const auto& path = std::get<ProbFile>(scheme).path;
    auto in = detail::open_input(path);
    std::vector<char> seen(g.edge_count(), 0);
    detail::for_each_record(in, [&](std::size_t line, const auto& tokens) {
      if (tokens.size() != 3) throw ParseError(path, line, "expected '<u> <v> <p>'");
      const auto u = g.find_label(detail::parse_label(path, line, tokens[0]));
      const auto v = g.find_label(detail::parse_label(path, line, tokens[1]));
      const auto p = detail::parse_number<double>(tokens[2]);
      if (!p || !(*p >= 0.0 && *p <= 1.0)) {
        throw ParseError(path, line, "probability must be a number in [0,1]");
      }
      if (!u || !v) throw ParseError(path, line, "unknown node label");
      const auto e = g.find_edge(*u, *v);
      if (!e) throw ParseError(path, line, "edge is not in the graph");
      probs[*e] = *p;
      seen[*e] = 1;
    });
    for (std::size_t e = 0; e < seen.size(); ++e) {
      if (!seen[e]) {
        throw Error(path + ": missing probability for edge " +
                    std::to_string(g.label(g.edge_source(e))) + " " +
                    std::to_string(g.label(g.edge_target(e))));
      }
    }
  }
  return g.with_probabilities(std::move(probs));
}

/// Sets every node weight per `scheme`; random draws go in node-id order.
inline WicGraph assign_weights(const WicGraph& g, const WeightScheme& scheme,
                               std::uint64_t rng_seed) {
  std::vector<double> weights(g.node_count());
  if (const auto* u = std::get_if<UniformWeight>(&scheme)) {
    std::fill(weights.begin(), weights.end(), u->value);
  } else if (const auto* r = std::get_if<RandomIntWeight>(&scheme)) {
    if (r->max == 0) throw Error("random weight maximum must be positive");
    Rng rng(rng_seed);
    for (double& w : weights) w = static_cast<double>(1 + rng.below(r->max));
  } else {
    const auto& path = std::get<WeightFile>(scheme).path;
    auto in = detail::open_input(path);
    std::vector<char> seen(g.node_count(), 0);
    detail::for_each_record(in, [&](std::size_t line, const auto& tokens) {
      if (tokens.size() != 2) throw ParseError(path, line, "expected '<u> <weight>'");
      const auto node = g.find_label(detail::parse_label(path, line, tokens[0]));
      const auto w = detail::parse_number<double>(tokens[1]);
      if (!node) throw ParseError(path, line, "unknown node label");
      if (!w || !(*w >= 0.0)) throw ParseError(path, line, "weight must be non-negative");
      weights[*node] = *w;
      seen[*node] = 1;
    });
    for (NodeId v = 0; v < g.node_count(); ++v) {
      if (!seen[v]) throw Error(path + ": missing weight for node " + std::to_string(g.label(v)));
    }
  }
  return g.with_weights(std::move(weights));
}

/// FNV-1a over structure and edge probabilities (weights excluded; they do
/// not affect reachability).
inline std::uint64_t graph_hash(const WicGraph& g) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  auto feed = [&h](std::uint64_t x) {
    for (int i = 0; i < 8; ++i) {
      h ^= (x >> (8 * i)) & 0xff;
      h *= 0x100000001b3ULL;
    }
  };
  feed(g.node_count());
  for (NodeId u = 0; u < g.node_count(); ++u) {
    for (std::size_t e = g.edge_begin(u); e < g.edge_end(u); ++e) {
      feed(u);
      feed(g.edge_target(e));
      feed(std::bit_cast<std::uint64_t>(g.edge_prob(e)));
    }
  }
  return h;
}

/// Parses "trivalency", "const:<p>" or "file:<path>".
inline ProbScheme parse_prob_scheme(std::string_view text) {
  if (text == "trivalency") return Trivalency{};
  if (text.starts_with("const:")) {
    auto p = detail::parse_number<double>(text.substr(6));
    if (!p || !(*p >= 0.0 && *p <= 1.0)) throw Error("bad constant probability: " + std::string(text));
    return ConstantProb{*p};
  }
  if (text.starts_with("file:")) return ProbFile{std::string(text.substr(5))};
  throw Error("unknown probability scheme: " + std::string(text));
}

/// Parses "uniform:<w>", "randint:<max>" or "file:<path>".
inline WeightScheme parse_weight_scheme(std::string_view text) {
  if (text.starts_with("uniform:")) {
    auto w = detail::parse_number<double>(text.substr(8));
    if (!w || !(*w >= 0.0)) throw Error("bad uniform weight: " + std::string(text));
    return UniformWeight{*w};
  }
  if (text.starts_with("randint:")) {
    auto m = detail::parse_number<std::uint32_t>(text.substr(8));
    if (!m || *m == 0) throw Error("bad random weight maximum: " + std::string(text));
    return RandomIntWeight{*m};
  }
  if (text.starts_with("file:")) return WeightFile{std::string(text.substr(5))};
  throw Error("unknown weight scheme: " + std::string(text));
}

}  // namespace wicmax
