#pragma once

#include <cstdint>
#include <vector>

#include "knight/network.hpp"
#include "knight/strategy.hpp"

namespace knight {

// One live-edge world: the outcome of every edge's coin flip at its
// effective probability. Fully determined by (master_seed, theta,
// sample_index), independent of evaluation order.
struct LiveEdgeSample {
  long long sample_index = 0;
  std::vector<char> live;  // one flag per edge
};

// Deterministic outcome of running the cascade on one live-edge world.
struct OutbreakTrace {
  std::vector<int> infection_round;     // -1 for never infected, seeds at 0
  int total_infected = 0;
  std::vector<int> cumulative_by_round;  // entry t: infected in rounds <= t
};

struct UtilityEstimate {
  double mean = 0.0;
  int sample_count = 0;
  double half_width = 0.0;  // Hoeffding 95% bound
};

// 95% two-sided Hoeffding half-width sqrt(ln(2/0.05) / (2n)).
double hoeffding_half_width(int sample_count);

// RNG key shared by every draw against a fixed theta, so the same worlds are
// reused across all monitor sets compared against it (common random numbers).
uint64_t theta_stream_key(uint64_t master_seed, const AttackStrategy& theta);

LiveEdgeSample draw_sample(const Network& net, const AttackStrategy& theta,
                           uint64_t master_seed, long long sample_index);

// Breadth-first cascade over live edges from theta's seeds.
OutbreakTrace propagate(const Network& net, const AttackStrategy& theta,
                        const LiveEdgeSample& sample);

// Per-world win predicate: 1 iff the outbreak stays below alpha nodes, or a
// monitor is infected in a round whose end-of-round cumulative count is
// still below beta. A monitored seed counts as detected at round 0 with
// cumulative |seeds|.
int sample_win(const OutbreakTrace& trace, const MonitorSet& monitors,
               int alpha, int beta);

// Monte Carlo mean of sample_win over cfg.sample_count worlds. Wins are
// accumulated as integers and divided once, so the result is bit-identical
// for any cfg.workers.
UtilityEstimate estimate_rho(const Network& net, const AttackStrategy& theta,
                             const MonitorSet& monitors,
                             const GameConfig& cfg);

// Same estimator at an explicit sample count (shared streams, same worlds
// as any other count's prefix).
UtilityEstimate estimate_rho_n(const Network& net, const AttackStrategy& theta,
                               const MonitorSet& monitors,
                               const GameConfig& cfg, int sample_count);

// Exact utility by enumerating all 2^|E| worlds. Test oracle only; refuses
// networks with more than 20 edges.
double exact_rho(const Network& net, const AttackStrategy& theta,
                 const MonitorSet& monitors, int alpha, int beta);

// A sampled batch against one theta, reduced to what the win predicate
// needs: which samples the defender wins outright (outbreak below alpha),
// and for the rest, which nodes would have detected in time. Win counts for
// any monitor set follow by set intersection, which keeps greedy selection
// and candidate scoring cheap while agreeing exactly with estimate_rho.
struct DetectorBatch {
  int sample_count = 0;
  long long auto_wins = 0;   // samples won with no detection needed
  long long hopeless = 0;    // samples no monitor placement can win
  // Distinct detector sets over the remaining samples, with multiplicity.
  std::vector<std::vector<int>> detector_sets;
  std::vector<long long> multiplicity;
};

DetectorBatch draw_detector_batch(const Network& net,
                                  const AttackStrategy& theta, int alpha,
                                  int beta, uint64_t master_seed,
                                  int sample_count, int workers);

// Win count over a batch for one monitor set (numerator of the mean).
long long batch_wins(const DetectorBatch& batch, const MonitorSet& monitors);

}  // namespace knight
