#pragma once

#include <vector>

namespace knight {

// Payoff matrix of the restricted zero-sum game. Rows are defender pure
// strategies, columns attacker pure strategies; entries are the defender's
// expected utility. Row/col ids are opaque handles owned by the caller
// (the engine uses positions in its restricted strategy lists).
struct PayoffMatrix {
  std::vector<int> row_ids;
  std::vector<int> col_ids;
  std::vector<std::vector<double>> values;  // values[row][col]

  int rows() const { return int(row_ids.size()); }
  int cols() const { return int(col_ids.size()); }
};

struct MixedStrategy {
  std::vector<int> support;     // strategy ids with positive weight
  std::vector<double> weights;  // matching, nonnegative, sums to 1
};

struct GameSolution {
  double value = 0.0;
  MixedStrategy defender_mix;  // over row ids
  MixedStrategy attacker_mix;  // over col ids
};

enum class Player { Defender, Attacker };

// Maximin solution of the matrix game: the defender mix maximizes the
// minimum column payoff, the attacker mix is the optimal dual. Entries may
// lie outside [0,1]; only finiteness is required. Throws SolverError if the
// simplex cannot produce a verified solution after perturbation restarts.
GameSolution solve_zero_sum(const PayoffMatrix& matrix);

// Best pure response for `side` against the opponent's mix, restricted to
// the matrix: highest-payoff row against an attacker mix, lowest-payoff
// column against a defender mix. Ties go to the earliest strategy.
std::pair<int, double> best_pure_response_value(const PayoffMatrix& matrix,
                                                const MixedStrategy& mix,
                                                Player side);

}  // namespace knight
