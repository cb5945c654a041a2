#include "knight/matrix_game.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "knight/errors.hpp"

namespace knight {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kEnterTol = 1e-9;
constexpr double kDualityTol = 1e-7;

void check_matrix(const PayoffMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0)
    throw ValidationError("payoff matrix is empty");
  if (int(a.values.size()) != a.rows())
    throw ValidationError("payoff matrix row count mismatch");
  for (const auto& row : a.values) {
    if (int(row.size()) != a.cols())
      throw ValidationError("payoff matrix column count mismatch");
    for (double v : row)
      if (!std::isfinite(v))
        throw ValidationError("payoff matrix entry not finite");
  }
  std::set<int> r(a.row_ids.begin(), a.row_ids.end());
  std::set<int> c(a.col_ids.begin(), a.col_ids.end());
  if (int(r.size()) != a.rows() || int(c.size()) != a.cols())
    throw ValidationError("duplicate strategy ids in payoff matrix");
}

struct RawSolution {
  double value = 0.0;
  std::vector<double> x;  // over rows
  std::vector<double> y;  // over cols
};

// LU with partial pivoting, reusable across right-hand sides; factor()
// is false on a (near) singular matrix.
struct LuFactor {
  int n = 0;
  std::vector<std::vector<double>> f;
  std::vector<std::pair<int, int>> swaps;

  bool factor(std::vector<std::vector<double>> a) {
    n = int(a.size());
    f = std::move(a);
    swaps.clear();
    for (int col = 0; col < n; ++col) {
      int piv = col;
      for (int r = col + 1; r < n; ++r)
        if (std::abs(f[r][col]) > std::abs(f[piv][col])) piv = r;
      if (std::abs(f[piv][col]) < 1e-12) return false;
      if (piv != col) {
        std::swap(f[piv], f[col]);
        swaps.push_back({piv, col});
      }
      for (int r = col + 1; r < n; ++r) {
        double l = f[r][col] / f[col][col];
        f[r][col] = l;
        if (l == 0.0) continue;
        for (int c = col + 1; c < n; ++c) f[r][c] -= l * f[col][c];
      }
    }
    return true;
  }

  std::vector<double> solve(std::vector<double> b) const {
    for (auto [i, j] : swaps) std::swap(b[i], b[j]);
    for (int i = 1; i < n; ++i)
      for (int c = 0; c < i; ++c) b[i] -= f[i][c] * b[c];
    for (int i = n - 1; i >= 0; --i) {
      for (int c = i + 1; c < n; ++c) b[i] -= f[i][c] * b[c];
      b[i] /= f[i][i];
    }
    return b;
  }
};

// Solves B^T lambda = c_B by factoring the transpose; called rarely.
bool solve_transposed(const std::vector<std::vector<double>>& bmat,
                      const std::vector<double>& cb,
                      std::vector<double>& lambda) {
  int m = int(bmat.size());
  std::vector<std::vector<double>> bt(m, std::vector<double>(m));
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) bt[r][c] = bmat[c][r];
  LuFactor lu;
  if (!lu.factor(std::move(bt))) return false;
  lambda = lu.solve(cb);
  return true;
}

// One simplex solve of the shifted game. The defender's maximin LP is
// attacked from the dual side: with A' = A + shift entrywise positive,
//   maximize sum(u)  s.t.  A' u <= 1, u >= 0
// has optimum 1/v where v is the value of A', u/sum(u) is the attacker's
// optimal mix, and the duals of the row constraints normalize to the
// defender's mix. Bland's rule keeps the pivoting cycle-free, and the
// tableau is periodically refactorized from the original data so long
// pivot chains cannot drift; optimality is only accepted when a freshly
// rebuilt tableau confirms it.
RawSolution simplex_game(const std::vector<std::vector<double>>& a, int m,
                         int n) {
  double lo = a[0][0];
  for (const auto& row : a)
    for (double v : row) lo = std::min(lo, v);
  double shift = 1.0 - lo;

  // Column j of the constraint matrix [A' | I] at row r.
  auto column = [&](int j, int r) {
    return j < n ? a[r][j] + shift : (j - n == r ? 1.0 : 0.0);
  };

  int width = n + m + 1;  // u vars, slacks, rhs
  std::vector<std::vector<double>> t(m, std::vector<double>(width, 0.0));
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < n; ++j) t[i][j] = a[i][j] + shift;
    t[i][n + i] = 1.0;
    t[i][width - 1] = 1.0;
  }
  std::vector<double> obj(width, 0.0);  // reduced costs, maximizing
  for (int j = 0; j < n; ++j) obj[j] = 1.0;
  std::vector<int> basis(m);
  std::vector<char> in_basis(n + m, 0);
  for (int i = 0; i < m; ++i) {
    basis[i] = n + i;
    in_basis[n + i] = 1;
  }

  // Recomputes the whole tableau for the current basis from the original
  // data: B p = rhs gives the basics, B^T lambda = c_B the multipliers
  // behind every reduced cost. Throws into the perturbed-restart path if
  // degeneracy drove the basis singular or infeasible.
  auto rebuild = [&]() {
    std::vector<std::vector<double>> bmat(m, std::vector<double>(m, 0.0));
    std::vector<double> cb(m, 0.0);
    for (int i = 0; i < m; ++i) {
      for (int r = 0; r < m; ++r) bmat[r][i] = column(basis[i], r);
      if (basis[i] < n) cb[i] = 1.0;
    }
    LuFactor lu;
    if (!lu.factor(bmat)) throw SolverError("simplex basis went singular");
    std::vector<double> lambda;
    if (!solve_transposed(bmat, cb, lambda))
      throw SolverError("simplex basis went singular");
    std::vector<double> rhs = lu.solve(std::vector<double>(m, 1.0));
    for (double& v : rhs) {
      if (v < -1e-7) throw SolverError("simplex basis lost feasibility");
      if (v < 0.0) v = 0.0;  // tiny roundoff infeasibility, reset to the bound
    }
    double objective = 0.0;
    for (int i = 0; i < m; ++i) {
      t[i][width - 1] = rhs[i];
      objective += cb[i] * rhs[i];
    }
    std::vector<double> col(m);
    for (int j = 0; j < n + m; ++j) {
      double dot = 0.0;
      for (int r = 0; r < m; ++r) {
        col[r] = column(j, r);
        dot += lambda[r] * col[r];
      }
      obj[j] = (j < n ? 1.0 : 0.0) - dot;
      std::vector<double> x = lu.solve(col);
      for (int i = 0; i < m; ++i) t[i][j] = x[i];
    }
    obj[width - 1] = -objective;
  };

  int pivots_since_rebuild = 0;
  for (long iter = 0;; ++iter) {
    if (iter > 50000L * (m + n))
      throw SolverError("simplex iteration limit exceeded");

    int enter = -1;
    for (int j = 0; j < n + m; ++j)
      if (!in_basis[j] && obj[j] > kEnterTol) {
        enter = j;
        break;
      }
    if (enter < 0) {
      if (pivots_since_rebuild == 0) break;
      rebuild();
      pivots_since_rebuild = 0;
      continue;
    }

    // Pivots far below the column scale amplify roundoff by their
    // reciprocal and wreck later ratio tests, so admission is relative.
    double colmax = 0.0;
    for (int i = 0; i < m; ++i) colmax = std::max(colmax, t[i][enter]);
    double admit = std::max(kPivotTol, 1e-7 * colmax);
    int leave = -1;
    double best_ratio = 0.0;
    for (int i = 0; i < m; ++i) {
      if (t[i][enter] <= admit) continue;
      double ratio = t[i][width - 1] / t[i][enter];
      if (leave < 0 || ratio < best_ratio - kPivotTol ||
          (ratio < best_ratio + kPivotTol && basis[i] < basis[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave < 0) {
      // No usable pivot. On a drifted tableau retry from clean data; on a
      // fresh one the column is numerically nonpositive, which this LP
      // cannot produce, so restart perturbed.
      if (pivots_since_rebuild > 0) {
        rebuild();
        pivots_since_rebuild = 0;
        continue;
      }
      throw SolverError("simplex found no admissible pivot");
    }

    double piv = t[leave][enter];
    for (int j = 0; j < width; ++j) t[leave][j] /= piv;
    for (int i = 0; i < m; ++i) {
      if (i == leave) continue;
      double f = t[i][enter];
      if (f == 0.0) continue;
      for (int j = 0; j < width; ++j) t[i][j] -= f * t[leave][j];
    }
    double f = obj[enter];
    for (int j = 0; j < width; ++j) obj[j] -= f * t[leave][j];
    in_basis[basis[leave]] = 0;
    in_basis[enter] = 1;
    basis[leave] = enter;
    if (++pivots_since_rebuild >= 50) {
      rebuild();
      pivots_since_rebuild = 0;
    }
  }

  // The terminal tableau is freshly rebuilt, so the basics and the slack
  // reduced costs are LU solves against the original data, clean up to
  // roundoff. Optimality bounds any negative part by kEnterTol.
  std::vector<double> u(n, 0.0);
  std::vector<double> w(m, 0.0);
  for (int i = 0; i < m; ++i)
    if (basis[i] < n) u[basis[i]] = std::max(0.0, t[i][width - 1]);
  for (int i = 0; i < m; ++i) w[i] = std::max(0.0, -obj[n + i]);

  double su = 0.0, sw = 0.0;
  for (double v : u) su += v;
  for (double v : w) sw += v;
  if (su <= 0.0 || sw <= 0.0)
    throw SolverError("simplex produced a degenerate mix");
  if (std::abs(1.0 / su - 1.0 / sw) > kDualityTol)
    throw SolverError("simplex duality gap too large");

  RawSolution s;
  s.value = 1.0 / su - shift;
  s.x.resize(m);
  s.y.resize(n);
  for (int i = 0; i < m; ++i) s.x[i] = w[i] / sw;
  for (int j = 0; j < n; ++j) s.y[j] = u[j] / su;
  return s;
}

// Worst-case deviation payoffs of the candidate solution on the original
// matrix: every pure defender row should earn at most value against y, and
// every pure attacker column at least value against x.
bool verified(const std::vector<std::vector<double>>& a, const RawSolution& s,
              int m, int n) {
  for (int i = 0; i < m; ++i) {
    double p = 0.0;
    for (int j = 0; j < n; ++j) p += a[i][j] * s.y[j];
    if (p > s.value + kDualityTol) return false;
  }
  for (int j = 0; j < n; ++j) {
    double p = 0.0;
    for (int i = 0; i < m; ++i) p += a[i][j] * s.x[i];
    if (p < s.value - kDualityTol) return false;
  }
  return true;
}

MixedStrategy to_mix(const std::vector<double>& weights,
                     const std::vector<int>& ids) {
  MixedStrategy mix;
  double total = 0.0;
  for (size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] > 1e-12) {
      mix.support.push_back(ids[i]);
      mix.weights.push_back(weights[i]);
      total += weights[i];
    }
  }
  for (double& w : mix.weights) w /= total;
  return mix;
}

}  // namespace

GameSolution solve_zero_sum(const PayoffMatrix& matrix) {
  check_matrix(matrix);
  int m = matrix.rows(), n = matrix.cols();

  std::vector<std::vector<double>> a = matrix.values;
  for (int attempt = 0;; ++attempt) {
    RawSolution s;
    try {
      s = simplex_game(a, m, n);
    } catch (const SolverError&) {
      if (attempt >= 3) throw;
      s.value = std::nan("");
    }
    if (!std::isnan(s.value) && verified(matrix.values, s, m, n)) {
      GameSolution out;
      out.value = s.value;
      out.defender_mix = to_mix(s.x, matrix.row_ids);
      out.attacker_mix = to_mix(s.y, matrix.col_ids);
      return out;
    }
    if (attempt >= 3)
      throw SolverError("zero-sum solve failed verification after restarts");
    // Deterministic tiny perturbation to escape a degenerate basis, varied
    // per attempt; the verification above still runs against the
    // unperturbed matrix.
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < n; ++j)
        a[i][j] =
            matrix.values[i][j] +
            1e-10 * double(((i * 31 + j * 17 + (attempt + 1) * 13) % 11) - 5);
  }
}

std::pair<int, double> best_pure_response_value(const PayoffMatrix& matrix,
                                                const MixedStrategy& mix,
                                                Player side) {
  check_matrix(matrix);
  const auto& opp_ids =
      side == Player::Defender ? matrix.col_ids : matrix.row_ids;
  std::vector<double> w(opp_ids.size(), 0.0);
  for (size_t i = 0; i < mix.support.size(); ++i) {
    auto it = std::find(opp_ids.begin(), opp_ids.end(), mix.support[i]);
    if (it == opp_ids.end())
      throw ValidationError("mix references strategy id " +
                            std::to_string(mix.support[i]) +
                            " not present in the matrix");
    w[it - opp_ids.begin()] += mix.weights[i];
  }

  if (side == Player::Defender) {
    int best = -1;
    double best_val = 0.0;
    for (int r = 0; r < matrix.rows(); ++r) {
      double p = 0.0;
      for (int c = 0; c < matrix.cols(); ++c) p += matrix.values[r][c] * w[c];
      if (best < 0 || p > best_val) {
        best = r;
        best_val = p;
      }
    }
    return {matrix.row_ids[best], best_val};
  }
  int best = -1;
  double best_val = 0.0;
  for (int c = 0; c < matrix.cols(); ++c) {
    double p = 0.0;
    for (int r = 0; r < matrix.rows(); ++r) p += matrix.values[r][c] * w[r];
    if (best < 0 || p < best_val) {
      best = c;
      best_val = p;
    }
  }
  return {matrix.col_ids[best], best_val};
}

}  // namespace knight
