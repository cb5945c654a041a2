#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "knight/network.hpp"

namespace knight {

// Defender pure strategy: a set of monitored nodes, |monitors| <= k.
// Kept sorted and deduplicated so equal sets compare equal.
struct MonitorSet {
  std::vector<int> monitors;

  static MonitorSet of(std::vector<int> nodes);
  bool contains(int v) const;
  bool operator==(const MonitorSet&) const = default;
};

// Attacker pure strategy: seed nodes plus sparse edge-probability overrides.
// Canonical form: seeds ascending, overrides ascending by edge id.
struct AttackStrategy {
  std::vector<int> seeds;
  std::vector<std::pair<int, double>> overrides;

  static AttackStrategy of(std::vector<int> seeds,
                           std::vector<std::pair<int, double>> overrides = {});
  bool operator==(const AttackStrategy&) const = default;
};

// Total order used for deterministic tie-breaking: lexicographic on seeds,
// then on (edge id, probability) override pairs; fewer elements first.
bool canonical_less(const AttackStrategy& a, const AttackStrategy& b);

uint64_t strategy_hash(const MonitorSet& m);
uint64_t strategy_hash(const AttackStrategy& theta);

struct GameConfig {
  int alpha = 1;            // outbreak size the attacker must reach
  int beta = 1;             // detection is timely only below this many infected
  int k = 1;                // defender monitor budget
  int c1 = 1;               // attacker seed budget
  int c2 = 0;               // attacker edge-override budget
  int sample_count = 10000;
  double epsilon = 0.05;    // equilibrium convergence tolerance
  uint64_t master_seed = 0;
  int max_iterations = 200;

  // Engine knobs, not part of the game definition.
  int workers = 1;
  long long exhaustive_cap = 10'000'000;  // attacker enumeration size limit
  int prescreen_samples = 1000;           // stage-1 sample count per candidate
  int rescore_top = 100;                  // candidates rescored at full count
  int fallback_restarts = 20;
  int fallback_moves = 500;
};

void validate_config(const GameConfig& cfg, const Network& net);
void validate_monitor_set(const Network& net, const MonitorSet& m, int k);
void validate_attack_strategy(const Network& net, const AttackStrategy& theta,
                              const GameConfig& cfg);

// Per-edge probabilities after applying theta's overrides; the network
// itself is never touched. Rejects overrides off the edge list or outside
// the edge's adjustable interval.
struct EffectiveProbs {
  std::vector<double> probs;
  double operator()(int e) const { return probs[e]; }
};

EffectiveProbs apply_strategy(const Network& net, const AttackStrategy& theta);

}  // namespace knight
