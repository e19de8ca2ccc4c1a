#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include "baselines.hpp"
#include "cascade.hpp"
#include "common.hpp"
#include "graph.hpp"
#include "greedy.hpp"
#include "weight_reset.hpp"

namespace wicmax {

enum class Model { IC, WIC };
enum class Algorithm { Greedy, WR, BWR, PageRank, Random };

inline std::string_view to_string(Model m) { return m == Model::IC ? "ic" : "wic"; }

inline std::string_view to_string(Algorithm a) {
  switch (a) {
    case Algorithm::Greedy: return "greedy";
    case Algorithm::WR: return "wr";
    case Algorithm::BWR: return "bwr";
    case Algorithm::PageRank: return "pagerank";
    case Algorithm::Random: return "random";
  }
  return "?";
}

inline Model parse_model(std::string_view s) {
  if (s == "ic") return Model::IC;
  if (s == "wic") return Model::WIC;
  throw Error("unknown model '" + std::string(s) + "' (expected ic or wic)");
}

inline Algorithm parse_algorithm(std::string_view s) {
  for (auto a : {Algorithm::Greedy, Algorithm::WR, Algorithm::BWR, Algorithm::PageRank,
                 Algorithm::Random}) {
    if (s == to_string(a)) return a;
  }
  throw Error("unknown algorithm '" + std::string(s) +
              "' (expected greedy, wr, bwr, pagerank or random)");
}

struct ExperimentConfig {
  std::string dataset;
  bool undirected = false;
  Model model = Model::WIC;
  ProbScheme prob_scheme = Trivalency{};
  /// Used under the WIC model; IC always uses unit weights.
  WeightScheme weight_scheme = RandomIntWeight{10};
  Algorithm algorithm = Algorithm::BWR;
  std::vector<std::size_t> k_schedule{1, 2, 5, 10, 20, 30, 40, 50};
  double theta = 1e-4;
  std::size_t r_select = 10'000;
  std::size_t r_eval = 20'000;
  std::uint64_t rng_seed = 42;
  bool lazy = false;
  bool score_with_self = true;
  std::uint64_t path_budget = 0;
  /// Allow greedy on graphs above kGreedyNodeLimit.
  bool force = false;
  /// Allow graphs above kLargeNodeLimit.
  bool large = false;
  PageRankConfig pagerank{};
};

inline constexpr std::size_t kGreedyNodeLimit = 50'000;
inline constexpr std::size_t kLargeNodeLimit = 200'000;

struct ResultRow {
  std::string algorithm;
  std::string model;
  std::size_t k = 0;
  double sigma_mean = 0.0;
  double sigma_stderr = 0.0;
  double activated_count_mean = 0.0;
  double select_time_ms = 0.0;
  double eval_time_ms = 0.0;
  double theta = 0.0;
  std::uint64_t rng_seed = 0;
  /// Seeds in selection order, as original labels.
  std::vector<std::uint64_t> seeds;
};

/// Independent streams derived from the master seed. Evaluation depends
/// only on the master seed, so every algorithm on the same dataset and model
/// is scored on the same cascades.
struct StreamSeeds {
  std::uint64_t probabilities;
  std::uint64_t weights;
  std::uint64_t selection;
  std::uint64_t evaluation;

  static StreamSeeds from(std::uint64_t master) {
    return {derive_seed(master, 1), derive_seed(master, 2), derive_seed(master, 3),
            derive_seed(master, 4)};
  }
};

inline void validate(const ExperimentConfig& cfg) {
  if (cfg.k_schedule.empty()) throw Error("k schedule is empty");
  for (std::size_t i = 0; i < cfg.k_schedule.size(); ++i) {
    if (cfg.k_schedule[i] == 0) throw Error("k values must be positive");
    if (i > 0 && cfg.k_schedule[i] <= cfg.k_schedule[i - 1]) {
      throw Error("k schedule must be strictly increasing");
    }
  }
  if (cfg.r_eval == 0) throw Error("R-eval must be at least 1");
  if (cfg.r_select == 0) throw Error("R-select must be at least 1");
  if (!(cfg.theta >= 0.0 && cfg.theta < 1.0)) throw Error("theta must lie in [0, 1)");
}

inline void check_scale(const WicGraph& g, const ExperimentConfig& cfg, Algorithm algo) {
  if (g.node_count() > kLargeNodeLimit && !cfg.large) {
    throw Error("graph has " + std::to_string(g.node_count()) +
                " nodes; runs above " + std::to_string(kLargeNodeLimit) + " need --large");
  }
  if (algo == Algorithm::Greedy && g.node_count() > kGreedyNodeLimit && !cfg.force) {
    throw Error("greedy on " + std::to_string(g.node_count()) +
                " nodes would take days; use bwr, or pass --force");
  }
  if (cfg.k_schedule.back() > g.node_count()) {
    throw Error("largest k (" + std::to_string(cfg.k_schedule.back()) + ") exceeds node count " +
                std::to_string(g.node_count()));
  }
}

/// Applies the configured probabilities, and weights per `model`.
inline WicGraph parameterize(const WicGraph& raw, const ExperimentConfig& cfg, Model model) {
  const auto streams = StreamSeeds::from(cfg.rng_seed);
  auto g = assign_probabilities(raw, cfg.prob_scheme, streams.probabilities);
  const WeightScheme weights =
      model == Model::IC ? WeightScheme{UniformWeight{1.0}} : cfg.weight_scheme;
  return assign_weights(g, weights, streams.weights);
}

inline SeedResult select_seeds(const WicGraph& g, Algorithm algo, std::size_t k,
                               const ExperimentConfig& cfg, double theta) {
  const auto streams = StreamSeeds::from(cfg.rng_seed);
  SelectionOptions opts;
  opts.score_with_self = cfg.score_with_self;
  switch (algo) {
    case Algorithm::Greedy:
      return greedy_select(g, {k, cfg.r_select, streams.selection, cfg.lazy});
    case Algorithm::WR:
      return wr_select(g, k, opts, cfg.path_budget);
    case Algorithm::BWR:
      return bwr_select(g, k, theta, opts, cfg.path_budget);
    case Algorithm::PageRank: {
      // Weighted votes follow the model: under IC all weights are 1 anyway.
      auto pr = cfg.pagerank;
      pr.weighted_votes = true;
      return pagerank_select(g, k, pr);
    }
    case Algorithm::Random:
      return random_select(g, k, streams.selection);
  }
  throw Error("unhandled algorithm");
}

/// One row per k, scoring each seed prefix with R_eval fresh cascades.
inline std::vector<ResultRow> evaluate_schedule(const WicGraph& g, const SeedResult& sel,
                                                const ExperimentConfig& cfg, Algorithm algo,
                                                Model model, double theta) {
  const auto streams = StreamSeeds::from(cfg.rng_seed);
  std::vector<ResultRow> rows;
  for (std::size_t k : cfg.k_schedule) {
    ResultRow row;
    row.algorithm = std::string(to_string(algo));
    row.model = std::string(to_string(model));
    row.k = k;
    row.theta = algo == Algorithm::BWR ? theta : 0.0;
    row.rng_seed = cfg.rng_seed;
    row.select_time_ms = sel.step_ms.at(k - 1);
    std::span<const NodeId> prefix(sel.seeds.data(), k);
    Stopwatch clock;
    const auto est = estimate_sigma(g, prefix, cfg.r_eval, streams.evaluation);
    row.eval_time_ms = clock.elapsed_ms();
    row.sigma_mean = est.mean;
    row.sigma_stderr = est.std_error;
    row.activated_count_mean = est.activated_mean;
    for (NodeId s : prefix) row.seeds.push_back(g.label(s));
    rows.push_back(std::move(row));
  }
  return rows;
}

/// Runs cfg.algorithm over the k schedule on an unparameterized graph.
inline std::vector<ResultRow> run_experiment(const WicGraph& raw, const ExperimentConfig& cfg) {
  validate(cfg);
  check_scale(raw, cfg, cfg.algorithm);
  const auto g = parameterize(raw, cfg, cfg.model);
  const auto sel = select_seeds(g, cfg.algorithm, cfg.k_schedule.back(), cfg, cfg.theta);
  return evaluate_schedule(g, sel, cfg, cfg.algorithm, cfg.model, cfg.theta);
}

inline std::vector<ResultRow> run_experiment(const ExperimentConfig& cfg) {
  validate(cfg);
  return run_experiment(load_edge_list(cfg.dataset, cfg.undirected), cfg);
}

inline const std::vector<double> kDefaultThetaSweep{1e-1, 1e-2, 1e-3, 1e-4, 1e-5};

/// BWR over each theta in the given order, one row per (theta, k).
inline std::vector<ResultRow> theta_sweep(const WicGraph& raw, const ExperimentConfig& cfg,
                                          const std::vector<double>& thetas) {
  validate(cfg);
  check_scale(raw, cfg, Algorithm::BWR);
  const auto g = parameterize(raw, cfg, cfg.model);
  std::vector<ResultRow> rows;
  for (double theta : thetas) {
    if (!(theta >= 0.0 && theta < 1.0)) throw Error("theta must lie in [0, 1)");
    const auto sel = select_seeds(g, Algorithm::BWR, cfg.k_schedule.back(), cfg, theta);
    auto part = evaluate_schedule(g, sel, cfg, Algorithm::BWR, cfg.model, theta);
    rows.insert(rows.end(), part.begin(), part.end());
  }
  return rows;
}

struct ModelComparisonRow {
  std::string algorithm;
  std::size_t k = 0;
  /// Seeds chosen with unit weights, scored under the WIC weights.
  double ic_seeds_wic_sigma = 0.0;
  /// Seeds chosen with the WIC weights, scored under the WIC weights.
  double wic_seeds_wic_sigma = 0.0;
  /// wic_seeds_wic_sigma / ic_seeds_wic_sigma.
  double ratio = 0.0;
  /// Seeds chosen with unit weights, scored with unit weights.
  double ic_seeds_ic_sigma = 0.0;
  std::uint64_t rng_seed = 0;
};

/// Runs each algorithm with weight-blind (IC) and weight-aware (WIC)
/// selection on the same probabilities and scores both under WIC weights.
inline std::vector<ModelComparisonRow> compare_models(const WicGraph& raw,
                                                      const ExperimentConfig& cfg,
                                                      const std::vector<Algorithm>& algorithms) {
  validate(cfg);
  const auto streams = StreamSeeds::from(cfg.rng_seed);
  const auto ic = parameterize(raw, cfg, Model::IC);
  const auto wic = parameterize(raw, cfg, Model::WIC);
  std::vector<ModelComparisonRow> rows;
  for (Algorithm algo : algorithms) {
    check_scale(raw, cfg, algo);
    const auto ic_sel = select_seeds(ic, algo, cfg.k_schedule.back(), cfg, cfg.theta);
    const auto wic_sel = select_seeds(wic, algo, cfg.k_schedule.back(), cfg, cfg.theta);
    for (std::size_t k : cfg.k_schedule) {
      std::span<const NodeId> ic_seeds(ic_sel.seeds.data(), k);
      std::span<const NodeId> wic_seeds(wic_sel.seeds.data(), k);
      ModelComparisonRow row;
      row.algorithm = std::string(to_string(algo));
      row.k = k;
      row.rng_seed = cfg.rng_seed;
      row.ic_seeds_wic_sigma = estimate_sigma(wic, ic_seeds, cfg.r_eval, streams.evaluation).mean;
      row.wic_seeds_wic_sigma = estimate_sigma(wic, wic_seeds, cfg.r_eval, streams.evaluation).mean;
      row.ic_seeds_ic_sigma = estimate_sigma(ic, ic_seeds, cfg.r_eval, streams.evaluation).mean;
      row.ratio = row.ic_seeds_wic_sigma > 0.0 ? row.wic_seeds_wic_sigma / row.ic_seeds_wic_sigma
                                               : 0.0;
      rows.push_back(row);
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// CSV output. Floats carry 6 significant digits. The results file holds only
// seeded quantities so identical configs give byte-identical files; wall
// times go to a separate timings file.

inline constexpr std::string_view kResultsSchema = "# wicmax-results v1";
inline constexpr std::string_view kTimingsSchema = "# wicmax-timings v1";
inline constexpr std::string_view kCompareSchema = "# wicmax-compare v1";

inline std::string format_g6(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

inline std::string join_labels(const std::vector<std::uint64_t>& labels) {
  std::string s;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) s += ' ';
    s += std::to_string(labels[i]);
  }
  return s;
}

inline void write_results_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kResultsSchema << '\n'
      << "algorithm,model,k,theta,rng_seed,sigma_mean,sigma_stderr,activated_count_mean,seeds\n";
  for (const auto& r : rows) {
    out << r.algorithm << ',' << r.model << ',' << r.k << ',' << format_g6(r.theta) << ','
        << r.rng_seed << ',' << format_g6(r.sigma_mean) << ',' << format_g6(r.sigma_stderr) << ','
        << format_g6(r.activated_count_mean) << ',' << join_labels(r.seeds) << '\n';
  }
}

inline void write_timings_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
  out << kTimingsSchema << '\n' << "algorithm,model,k,theta,select_time_ms,eval_time_ms\n";
  for (const auto& r : rows) {
    out << r.algorithm << ',' << r.model << ',' << r.k << ',' << format_g6(r.theta) << ','
        << format_g6(r.select_time_ms) << ',' << format_g6(r.eval_time_ms) << '\n';
  }
}

inline void write_compare_csv(std::ostream& out, const std::vector<ModelComparisonRow>& rows) {
  out << kCompareSchema << '\n'
      << "algorithm,k,rng_seed,ic_seeds_wic_sigma,wic_seeds_wic_sigma,wic_over_ic,"
         "ic_seeds_ic_sigma\n";
  for (const auto& r : rows) {
    out << r.algorithm << ',' << r.k << ',' << r.rng_seed << ',' << format_g6(r.ic_seeds_wic_sigma)
        << ',' << format_g6(r.wic_seeds_wic_sigma) << ',' << format_g6(r.ratio) << ','
        << format_g6(r.ic_seeds_ic_sigma) << '\n';
  }
}

/// Writes through a temporary file and renames it into place.
template <class Writer>
void write_file_atomically(const std::string& path, Writer&& writer) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp);
    writer(out);
    out.flush();
    if (!out) throw Error("failed writing " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) throw Error("cannot move output to " + path);
}

}  // namespace wicmax
