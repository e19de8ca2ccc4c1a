// wicmax: seed selection experiments on edge-list graphs.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include <wicmax/wicmax.hpp>

namespace {

using namespace wicmax;

struct Common {
  std::string dataset;
  bool undirected = false;
  std::string model = "wic";
  std::string probs = "trivalency";
  std::string weights = "randint:10";
  std::vector<std::size_t> k{1, 2, 5, 10, 20, 30, 40, 50};
  double theta = 1e-4;
  std::size_t r_select = 10'000;
  std::size_t r_eval = 20'000;
  std::uint64_t seed = 42;
  std::string out;
  bool lazy = false;
  bool score_without_self = false;
  std::uint64_t path_budget = 0;
  bool force = false;
  bool large = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--dataset", c.dataset, "SNAP-style edge list")->required()->check(CLI::ExistingFile);
  cmd->add_flag("--undirected", c.undirected, "Add both directions of every edge");
  cmd->add_option("--model", c.model, "ic or wic")->check(CLI::IsMember({"ic", "wic"}));
  cmd->add_option("--probs", c.probs, "trivalency | const:P | file:PATH");
  cmd->add_option("--weights", c.weights, "randint:M | uniform:W | file:PATH (WIC only)");
  cmd->add_option("--k", c.k, "Seed set sizes, strictly increasing")->delimiter(',');
  cmd->add_option("--theta", c.theta, "Path probability bound for bwr");
  cmd->add_option("--R-select", c.r_select, "Simulations per greedy gain estimate");
  cmd->add_option("--R-eval", c.r_eval, "Simulations per spread estimate");
  cmd->add_option("--seed", c.seed, "Master RNG seed");
  cmd->add_option("--out", c.out, "Output CSV (stdout if omitted)");
  cmd->add_flag("--lazy", c.lazy, "Lazy greedy evaluation");
  cmd->add_flag("--score-without-self", c.score_without_self,
                "Rank wr/bwr candidates by V alone, without their own weight");
  cmd->add_option("--path-budget", c.path_budget,
                  "Abort reachability after this many path extensions per source (0 = none)");
  cmd->add_flag("--force", c.force, "Allow greedy on very large graphs");
  cmd->add_flag("--large", c.large, "Allow graphs above the desk-scale node limit");
}

ExperimentConfig to_config(const Common& c) {
  ExperimentConfig cfg;
  cfg.dataset = c.dataset;
  cfg.undirected = c.undirected;
  cfg.model = parse_model(c.model);
  cfg.prob_scheme = parse_prob_scheme(c.probs);
  cfg.weight_scheme = parse_weight_scheme(c.weights);
  cfg.k_schedule = c.k;
  cfg.theta = c.theta;
  cfg.r_select = c.r_select;
  cfg.r_eval = c.r_eval;
  cfg.rng_seed = c.seed;
  cfg.lazy = c.lazy;
  cfg.score_with_self = !c.score_without_self;
  cfg.path_budget = c.path_budget;
  cfg.force = c.force;
  cfg.large = c.large;
  return cfg;
}

template <class Writer>
void emit(const std::string& out, Writer&& writer) {
  if (out.empty() || out == "-") {
    writer(std::cout);
  } else {
    write_file_atomically(out, writer);
  }
}

void emit_rows(const std::string& out, const std::vector<ResultRow>& rows) {
  emit(out, [&](std::ostream& os) { write_results_csv(os, rows); });
  if (!out.empty() && out != "-") {
    write_file_atomically(out + ".timings.csv", [&](std::ostream& os) { write_timings_csv(os, rows); });
  }
}

int thread_count_from_env() {
  const char* env = std::getenv("WICMAX_THREADS");
  if (!env || !*env) return 0;
  try {
    return std::stoi(env);
  } catch (const std::exception&) {
    throw Error(std::string("WICMAX_THREADS is not an integer: ") + env);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Influence maximization under the weighted independent cascade model"};
  app.require_subcommand(1);
  app.fallthrough();
  int threads = -1;
  app.add_option("--threads", threads, "Worker threads (default: WICMAX_THREADS or all cores)");

  Common run_opts;
  std::string algo = "bwr";
  auto* run = app.add_subcommand("run", "Select seeds over a k schedule and score them");
  add_common(run, run_opts);
  run->add_option("--algo", algo, "greedy, wr, bwr, pagerank or random")
      ->check(CLI::IsMember({"greedy", "wr", "bwr", "pagerank", "random"}));

  Common sweep_opts;
  std::vector<double> thetas = kDefaultThetaSweep;
  auto* sweep = app.add_subcommand("theta-sweep", "Run bwr for each theta");
  add_common(sweep, sweep_opts);
  sweep->add_option("--thetas", thetas, "Comma-separated theta values")->delimiter(',');

  Common cmp_opts;
  std::vector<std::string> algos{"bwr", "pagerank"};
  auto* cmp = app.add_subcommand("compare-models",
                                 "Score weight-blind and weight-aware seeds under WIC weights");
  add_common(cmp, cmp_opts);
  cmp->add_option("--algos", algos, "Algorithms to compare")->delimiter(',');

  double p = 0.1, d = 6.6, alpha = 3.0, epsilon = 0.5;
  auto* suggest = app.add_subcommand("suggest-theta", "Suggest theta for a target approximation slack");
  suggest->add_option("--p", p, "Mean edge probability");
  suggest->add_option("--d", d, "Mean out-degree");
  suggest->add_option("--alpha", alpha, "Influence horizon in steps");
  suggest->add_option("--epsilon", epsilon, "Target slack");

  std::size_t gen_n = 6000, gen_m = 21000;
  std::uint64_t gen_seed = 1;
  std::string gen_out;
  auto* gen = app.add_subcommand("generate", "Write a directed G(n, m) edge list");
  gen->add_option("--nodes", gen_n, "Node count");
  gen->add_option("--edges", gen_m, "Edge count");
  gen->add_option("--seed", gen_seed, "RNG seed");
  gen->add_option("--out", gen_out, "Output path (stdout if omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    set_thread_count(threads >= 0 ? threads : thread_count_from_env());

    if (*run) {
      auto cfg = to_config(run_opts);
      cfg.algorithm = parse_algorithm(algo);
      emit_rows(run_opts.out, run_experiment(cfg));
    } else if (*sweep) {
      auto cfg = to_config(sweep_opts);
      cfg.algorithm = Algorithm::BWR;
      validate(cfg);
      emit_rows(sweep_opts.out, theta_sweep(load_edge_list(cfg.dataset, cfg.undirected), cfg, thetas));
    } else if (*cmp) {
      auto cfg = to_config(cmp_opts);
      std::vector<Algorithm> list;
      for (const auto& a : algos) list.push_back(parse_algorithm(a));
      validate(cfg);
      const auto rows = compare_models(load_edge_list(cfg.dataset, cfg.undirected), cfg, list);
      emit(cmp_opts.out, [&](std::ostream& os) { write_compare_csv(os, rows); });
    } else if (*suggest) {
      const auto a = suggest_theta(p, d, alpha, epsilon);
      nlohmann::ordered_json j;
      j["p"] = a.p;
      j["d"] = a.d;
      j["alpha"] = a.alpha;
      j["epsilon"] = a.epsilon;
      j["theta"] = a.theta;
      j["horizon"] = a.horizon;
      j["ratio_bound"] = a.ratio_bound;
      j["ratio_floor"] = a.ratio_floor;
      j["beta"] = a.beta;
      std::cout << j.dump(2) << '\n';
    } else if (*gen) {
      const auto g = random_gnm(gen_n, gen_m, gen_seed);
      emit(gen_out, [&](std::ostream& os) { write_edge_list(os, g); });
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "wicmax: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "wicmax: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
