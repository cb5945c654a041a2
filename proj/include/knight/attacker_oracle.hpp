#pragma once

#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "knight/diffusion.hpp"

namespace knight {

// The endpoint-restricted attack space: seed sets of size 1..c1 crossed
// with interval-endpoint assignments over subsets of the adjustable
// (non-degenerate-interval) edges, at most c2 per strategy. With alpha == 1
// the space narrows to single seeds with lower endpoints only.
struct CandidateSpace {
  static constexpr long long kUncountable =
      std::numeric_limits<long long>::max();

  long long count = 0;  // saturates at kUncountable
  bool fast_path = false;
  int node_count = 0;
  int c1 = 1;
  int c2 = 0;
  std::vector<int> adjustable_edges;               // ascending edge ids
  std::vector<std::pair<double, double>> endpoints;  // (lo, hi) per edge above

  // Visits every candidate exactly once in a fixed order: seed sets by size
  // then lexicographically, edge subsets by size then lexicographically,
  // endpoint assignments in binary order with lo before hi.
  void for_each(
      const std::function<void(long long, const AttackStrategy&)>& fn) const;
};

CandidateSpace enumerate_candidates(const Network& net, const GameConfig& cfg,
                                    bool allow_fast_path = true);

struct AttackerResponse {
  AttackStrategy theta;
  double value = 0.0;        // defender's expected utility against the mix
  bool used_fallback = false;
  long long evaluated = 0;   // candidate evaluations spent
};

// Minimizes sum_M x_M * rho_hat_theta(M) over the candidate space when its
// size fits cfg.exhaustive_cap, otherwise via local_search_fallback.
// Exhaustive runs prescreen every candidate on a reduced sample batch and
// rescore the best cfg.rescore_top at full sample count; ties go to the
// canonically smallest strategy.
AttackerResponse attacker_best_response(const Network& net,
                                        const std::vector<MonitorSet>& support,
                                        const std::vector<double>& weights,
                                        const GameConfig& cfg);

// Deterministic first-improvement hill climbing over {swap one seed,
// add/remove/flip one override endpoint}, restarted from pseudo-random
// starts plus the best single-seed candidate, final pool rescored at full
// sample count. Never beats exhaustive search but never refuses.
AttackerResponse local_search_fallback(const Network& net,
                                       const std::vector<MonitorSet>& support,
                                       const std::vector<double>& weights,
                                       const GameConfig& cfg);

}  // namespace knight
