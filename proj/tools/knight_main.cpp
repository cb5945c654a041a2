#include <cstdio>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "knight/errors.hpp"
#include "knight/experiment.hpp"

namespace {

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s + ",") {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"equilibrium experiments for the monitoring game"};

  std::string config_path, graph, alpha, beta, k, out, prob;
  int c1 = 0, c2 = 0, samples = 0, max_iters = 0, reps = 0, workers = 0;
  int prescreen = 0, rescore = 0, restarts = 0, moves = 0;
  double epsilon = 0.0, interval = 0.0;
  long long seed = 0, exhaustive_cap = 0;
  bool no_timing = false;

  app.add_option("--config", config_path, "key = value config file");
  app.add_option("--graph", graph, "edge list file (src dst [prob])");
  app.add_option("--alpha", alpha, "outbreak thresholds, comma separated, integers or fractions of |V|");
  app.add_option("--beta", beta, "detection thresholds, comma separated");
  app.add_option("--k", k, "monitor budgets, comma separated");
  app.add_option("--c1", c1, "attacker seed budget");
  app.add_option("--c2", c2, "attacker edge-override budget");
  app.add_option("--samples", samples, "Monte Carlo samples per payoff entry");
  app.add_option("--epsilon", epsilon, "double-oracle convergence threshold");
  app.add_option("--seed", seed, "master RNG seed");
  app.add_option("--max-iters", max_iters, "double-oracle iteration cap");
  app.add_option("--reps", reps, "repetitions per parameter cell");
  app.add_option("--out", out, "results CSV path");
  app.add_option("--workers", workers, "worker threads for sampling");
  app.add_option("--prob", prob, "edge probability: 'uniform' or a constant");
  app.add_option("--interval", interval, "half-width of attacker-adjustable probability intervals");
  app.add_flag("--no-timing", no_timing, "write wall_ms=0 for byte-stable output");
  app.add_option("--exhaustive-cap", exhaustive_cap, "candidate count above which the attacker oracle falls back to local search");
  app.add_option("--prescreen-samples", prescreen, "sample count for the attacker prescreen pass");
  app.add_option("--rescore-top", rescore, "prescreen survivors rescored at full samples");
  app.add_option("--fallback-restarts", restarts, "local-search restarts");
  app.add_option("--fallback-moves", moves, "local-search move budget per restart");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    knight::ExperimentSpec spec;
    if (app.count("--config")) spec = knight::load_experiment_config(config_path);
    if (app.count("--graph")) spec.graph_path = graph;
    if (app.count("--alpha")) spec.alpha = split_commas(alpha);
    if (app.count("--beta")) spec.beta = split_commas(beta);
    if (app.count("--k")) spec.k = split_commas(k);
    if (app.count("--c1")) spec.base.c1 = c1;
    if (app.count("--c2")) spec.base.c2 = c2;
    if (app.count("--samples")) spec.base.sample_count = samples;
    if (app.count("--epsilon")) spec.base.epsilon = epsilon;
    if (app.count("--seed")) spec.base.master_seed = uint64_t(seed);
    if (app.count("--max-iters")) spec.base.max_iterations = max_iters;
    if (app.count("--reps")) spec.repetitions = reps;
    if (app.count("--out")) spec.out_path = out;
    if (app.count("--workers")) spec.base.workers = workers;
    if (app.count("--prob"))
      spec.prob_constant = prob == "uniform" ? -1.0 : std::stod(prob);
    if (app.count("--interval")) spec.interval_width = interval;
    if (no_timing) spec.timing = false;
    if (app.count("--exhaustive-cap")) spec.base.exhaustive_cap = exhaustive_cap;
    if (app.count("--prescreen-samples")) spec.base.prescreen_samples = prescreen;
    if (app.count("--rescore-top")) spec.base.rescore_top = rescore;
    if (app.count("--fallback-restarts")) spec.base.fallback_restarts = restarts;
    if (app.count("--fallback-moves")) spec.base.fallback_moves = moves;

    knight::run_experiment(spec);
    std::printf("results: %s\n", spec.out_path.c_str());
    std::printf("plot data: %s\n", knight::plot_path(spec.out_path).c_str());
    return 0;
  } catch (const knight::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
