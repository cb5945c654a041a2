#pragma once

#include <vector>

#include "knight/diffusion.hpp"

namespace knight {

// The defender-side objective sum_theta y_theta * rho_hat_theta(M), backed
// by one pre-drawn detector batch per theta. Every candidate monitor set is
// scored against the same worlds, so the objective is exactly monotone and
// submodular and greedy runs are deterministic.
struct OracleObjective {
  std::vector<AttackStrategy> thetas;
  std::vector<double> weights;        // nonnegative, sum to 1
  std::vector<DetectorBatch> batches;
};

// Draws the batches (cfg.sample_count worlds per theta unless overridden)
// and normalizes the weights. Weights must already sum to 1 within 1e-9.
OracleObjective build_oracle_objective(const Network& net,
                                       std::vector<AttackStrategy> thetas,
                                       std::vector<double> weights,
                                       const GameConfig& cfg,
                                       int sample_count = -1);

double objective_value(const OracleObjective& obj, const MonitorSet& m);

struct GreedyResult {
  MonitorSet monitors;
  std::vector<int> order;  // nodes in selection order
  double value = 0.0;      // sampled objective at the final set
};

// Lazy greedy (CELF): stale queue bounds are valid upper bounds because the
// batch objective is submodular, and the (gain, lowest node id) ordering
// reproduces the naive sweep exactly, ties included. Always returns
// min(k, |V|) monitors; once gains hit zero that pads with the lowest
// unused node ids.
GreedyResult greedy_monitor_selection(const Network& net,
                                      const OracleObjective& obj, int k,
                                      const GameConfig& cfg);

// Reference implementation: full marginal-gain sweep at every step.
GreedyResult naive_greedy_monitor_selection(const Network& net,
                                            const OracleObjective& obj, int k,
                                            const GameConfig& cfg);

// Exact maximizer over all size-min(k,|V|) sets, first in lexicographic
// order among ties. Refuses when C(|V|, k) exceeds 1e6.
GreedyResult brute_force_monitor_selection(const Network& net,
                                           const OracleObjective& obj, int k,
                                           const GameConfig& cfg);

}  // namespace knight
