#include "knight/double_oracle.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>

#include "knight/errors.hpp"

namespace knight {

double convergence_gap(double value, double do_value, double ao_value) {
  return std::max({do_value - value, value - ao_value, 0.0});
}

namespace {

// Deterministic starting points: the attacker gets the single-seed attack
// at the highest out-degree node, the defender the greedy set against a
// uniform mix over all single-seed attacks (estimated on a reduced batch;
// the arbitrary-start contract only needs something reasonable).
AttackStrategy initial_theta(const Network& net) {
  int best = 0;
  for (int v = 1; v < net.node_count; ++v)
    if (net.adjacency[v].size() > net.adjacency[best].size()) best = v;
  AttackStrategy theta;
  theta.seeds = {best};
  return theta;
}

MonitorSet initial_monitors(
    const Network& net, const GameConfig& cfg,
    const std::function<GreedyResult(const Network&,
                                     const std::vector<AttackStrategy>&,
                                     const std::vector<double>&,
                                     const GameConfig&)>& defender_oracle) {
  std::vector<AttackStrategy> thetas(net.node_count);
  std::vector<double> weights(net.node_count, 1.0 / net.node_count);
  for (int v = 0; v < net.node_count; ++v) thetas[v].seeds = {v};
  GameConfig reduced = cfg;
  reduced.sample_count = std::min(cfg.sample_count, 500);
  return defender_oracle(net, thetas, weights, reduced).monitors;
}

void progress_line(std::ostream* out, const IterationStats& it) {
  if (!out) return;
  char buf[160];
  std::snprintf(buf, sizeof buf, "%d,%.10g,%.10g,%.10g,%.10g,%d,%d\n",
                it.iteration, it.value, it.do_value, it.ao_value, it.gap,
                it.monitor_count, it.theta_count);
  *out << buf;
}

}  // namespace

EquilibriumResult run_knight(const Network& net, const GameConfig& cfg,
                             const KnightHooks& hooks, std::ostream* progress) {
  validate_config(cfg, net);

  auto rho = hooks.rho;
  if (!rho)
    rho = [](const Network& n, const AttackStrategy& theta,
             const MonitorSet& m, const GameConfig& c) {
      return estimate_rho(n, theta, m, c).mean;
    };
  auto defender = hooks.defender_oracle;
  if (!defender)
    defender = [](const Network& n, const std::vector<AttackStrategy>& thetas,
                  const std::vector<double>& weights, const GameConfig& c) {
      OracleObjective obj = build_oracle_objective(n, thetas, weights, c);
      return greedy_monitor_selection(n, obj, c.k, c);
    };
  auto attacker = hooks.attacker_oracle;
  if (!attacker)
    attacker = [](const Network& n, const std::vector<MonitorSet>& support,
                  const std::vector<double>& weights, const GameConfig& c) {
      return attacker_best_response(n, support, weights, c);
    };

  EquilibriumResult result;
  if (!hooks.rho && cfg.epsilon < 3.0 * hoeffding_half_width(cfg.sample_count)) {
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "epsilon %.4g below 3x estimator half-width %.4g; "
                  "convergence may chase noise",
                  cfg.epsilon, 3.0 * hoeffding_half_width(cfg.sample_count));
    result.warnings.push_back(buf);
    if (progress) *progress << "# warning: " << buf << "\n";
  }

  result.monitor_sets.push_back(initial_monitors(net, cfg, defender));
  result.thetas.push_back(initial_theta(net));

  // The payoff cache: one frozen estimate per (monitor set, theta) pair,
  // grown as the restricted sets grow.
  PayoffMatrix& matrix = result.payoff;
  matrix.row_ids = {0};
  matrix.col_ids = {0};
  matrix.values = {
      {rho(net, result.thetas[0], result.monitor_sets[0], cfg)}};

  auto fill_missing = [&]() {
    for (size_t i = 0; i < result.monitor_sets.size(); ++i) {
      if (i >= matrix.values.size()) {
        matrix.values.emplace_back();
        matrix.row_ids.push_back(int(i));
      }
      for (size_t j = matrix.values[i].size(); j < result.thetas.size(); ++j)
        matrix.values[i].push_back(
            rho(net, result.thetas[j], result.monitor_sets[i], cfg));
    }
    for (size_t j = matrix.col_ids.size(); j < result.thetas.size(); ++j)
      matrix.col_ids.push_back(int(j));
  };

  GameSolution sol;
  for (int iter = 1; iter <= cfg.max_iterations; ++iter) {
    sol = solve_zero_sum(matrix);

    // Defender oracle against the attacker's current mix.
    std::vector<AttackStrategy> y_support;
    for (int id : sol.attacker_mix.support)
      y_support.push_back(result.thetas[id]);
    GreedyResult do_res =
        defender(net, y_support, sol.attacker_mix.weights, cfg);
    bool do_known =
        std::find(result.monitor_sets.begin(), result.monitor_sets.end(),
                  do_res.monitors) != result.monitor_sets.end();

    // Attacker oracle against the defender's mix from the same solve.
    std::vector<MonitorSet> x_support;
    for (int id : sol.defender_mix.support)
      x_support.push_back(result.monitor_sets[id]);
    AttackerResponse ao_res =
        attacker(net, x_support, sol.defender_mix.weights, cfg);
    bool ao_known = std::find(result.thetas.begin(), result.thetas.end(),
                              ao_res.theta) != result.thetas.end();

    IterationStats stats;
    stats.iteration = iter;
    stats.value = sol.value;
    stats.do_value = do_res.value;
    stats.ao_value = ao_res.value;
    stats.gap = convergence_gap(sol.value, do_res.value, ao_res.value);
    stats.monitor_count = int(result.monitor_sets.size());
    stats.theta_count = int(result.thetas.size());
    result.history.push_back(stats);
    progress_line(progress, stats);

    result.iterations = iter;
    result.gap = stats.gap;
    bool do_done = do_known || do_res.value - sol.value <= cfg.epsilon;
    bool ao_done = ao_known || sol.value - ao_res.value <= cfg.epsilon;
    if (do_done && ao_done) {
      result.converged = true;
      break;
    }
    if (!do_known) result.monitor_sets.push_back(do_res.monitors);
    if (!ao_known) result.thetas.push_back(ao_res.theta);
    fill_missing();
  }

  result.value = sol.value;
  result.defender_mix = sol.defender_mix;
  result.attacker_mix = sol.attacker_mix;
  return result;
}

}  // namespace knight
