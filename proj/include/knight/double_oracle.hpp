#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "knight/attacker_oracle.hpp"
#include "knight/defender_oracle.hpp"
#include "knight/matrix_game.hpp"

namespace knight {

struct IterationStats {
  int iteration = 0;
  double value = 0.0;     // restricted-game value U this iteration
  double do_value = 0.0;  // defender oracle's objective against y
  double ao_value = 0.0;  // attacker oracle's objective against x
  double gap = 0.0;
  int monitor_count = 0;  // restricted set sizes the LP saw
  int theta_count = 0;
};

// max(do_value - U, U - ao_value, 0): how much either player could still
// improve on the restricted equilibrium via the generated strategies.
double convergence_gap(double value, double do_value, double ao_value);

// Injection points for the three subproblems; tests substitute exact
// versions. Unset members fall back to the sampled production paths.
struct KnightHooks {
  std::function<double(const Network&, const AttackStrategy&,
                       const MonitorSet&, const GameConfig&)>
      rho;  // payoff matrix entries
  std::function<GreedyResult(const Network&,
                             const std::vector<AttackStrategy>&,
                             const std::vector<double>&, const GameConfig&)>
      defender_oracle;
  std::function<AttackerResponse(const Network&,
                                 const std::vector<MonitorSet>&,
                                 const std::vector<double>&,
                                 const GameConfig&)>
      attacker_oracle;
};

struct EquilibriumResult {
  std::vector<MonitorSet> monitor_sets;  // final restricted defender space
  std::vector<AttackStrategy> thetas;    // final restricted attacker space
  MixedStrategy defender_mix;            // ids index monitor_sets
  MixedStrategy attacker_mix;            // ids index thetas
  double value = 0.0;
  int iterations = 0;
  double gap = 0.0;
  bool converged = false;
  PayoffMatrix payoff;
  std::vector<IterationStats> history;
  std::vector<std::string> warnings;
};

// The double-oracle loop: solve the restricted game, ask each oracle for a
// best response against the current mixes, grow the strategy sets with any
// genuinely new responses, stop when neither side can improve by more than
// cfg.epsilon. Matrix entries are estimated once and never re-sampled.
// When `progress` is set, one CSV line per iteration is written as
// "iter,U,do_value,ao_value,gap,m_count,theta_count" (warnings appear as
// '#' comment lines).
EquilibriumResult run_knight(const Network& net, const GameConfig& cfg,
                             const KnightHooks& hooks = {},
                             std::ostream* progress = nullptr);

}  // namespace knight
