#pragma once

#include <string>
#include <vector>

#include "knight/strategy.hpp"

namespace knight {

// A sweep over (alpha, beta, k) cells on one graph. Sweep values are kept
// as text until the graph is loaded: tokens containing '.' are resolved as
// fractions of the node count, plain integers pass through.
struct ExperimentSpec {
  std::string graph_path;
  std::vector<std::string> alpha{"1"};
  std::vector<std::string> beta{"1"};
  std::vector<std::string> k{"1"};
  GameConfig base;           // alpha/beta/k fields ignored; rest applies
  int repetitions = 5;
  std::string out_path = "results.csv";
  double prob_constant = -1.0;   // < 0: seeded-uniform probabilities
  double interval_width = 0.0;   // symmetric offset l = r
  bool timing = true;            // false: wall_ms column written as 0
};

// max(1, round(f*n)) for fraction tokens in (0,1], passthrough for
// integers in [1,n]; anything else is a config error.
int resolve_fractional(const std::string& token, int n);

// "key = value" lines, '#' comments. Unknown keys are config errors.
ExperimentSpec parse_experiment_config(const std::string& text);
ExperimentSpec load_experiment_config(const std::string& path);

// Derived output names: results land at out_path, plot data and per-cell
// progress logs next to it.
std::string plot_path(const std::string& out_path);
std::string progress_path(const std::string& out_path, int alpha, int beta,
                          int k);

// Runs every cell `repetitions` times (seeds master_seed + rep), writing:
//   - results CSV "alpha,beta,k,rep,defender_value,iterations,gap,wall_ms"
//     with one aggregate mean row per cell (rep column "mean") and a '#'
//     comment line after any non-converged row;
//   - plot CSV "alpha,k,beta,mean_value";
//   - per-cell progress CSV "rep,iter,U,do_value,ao_value,gap,m_count,
//     theta_count".
// Output bytes depend only on the spec (and timing flag), not on workers.
void run_experiment(const ExperimentSpec& spec);

}  // namespace knight
