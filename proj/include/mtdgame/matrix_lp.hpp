// Copyright 2026 The mtdgame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "mtdgame/common.hpp"

namespace mtdgame {

/// Zero-sum matrix game. Entry [i][j] is the row player's payoff when the
/// row player (maximizer) picks i and the column player (minimizer) picks j.
struct MatrixGame {
  Matrix payoff;

  std::size_t rows() const { return payoff.size(); }
  std::size_t cols() const { return payoff.empty() ? 0 : payoff.front().size(); }

  void validate() const {
    if (rows() == 0 || cols() == 0) throw ValidationError("matrix game must be at least 1x1");
    if (!matrix_is_rectangular(payoff)) throw ValidationError("payoff matrix is ragged");
    if (!matrix_is_finite(payoff)) throw ValidationError("payoff matrix has a non-finite entry");
  }
};

struct MatrixSolution {
  double value = 0.0;
  std::vector<double> row_strategy;
  double certificate = 0.0;  // worst violation of payoff(strategy, column) >= value
};

struct PureResponse {
  std::size_t index = 0;
  double value = 0.0;
};

namespace detail {

// Feasibility tolerance used while pivoting.
inline constexpr double kSimplexTol = 1e-9;

struct UnitLpResult {
  double objective = 0.0;       // max of sum(y)
  std::vector<double> duals;    // one per constraint row, >= 0
};

/**
 * Maximizes sum(y) subject to A y <= 1, y >= 0 via the primal simplex on a
 * dense tableau. A must be strictly positive, which makes the slack basis
 * feasible and the optimum finite, so no phase-one is needed. Entering and
 * leaving variables follow Bland's smallest-index rule.
 */
inline UnitLpResult solve_unit_lp(const Matrix& a) {
  const std::size_t m = a.size();
  const std::size_t n = a.front().size();
  const std::size_t rhs = n + m;
  Matrix t(m + 1, std::vector<double>(n + m + 1, 0.0));
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) t[i][j] = a[i][j];
    t[i][n + i] = 1.0;
    t[i][rhs] = 1.0;
    basis[i] = n + i;
  }
  for (std::size_t j = 0; j < n; ++j) t[m][j] = -1.0;

  const std::size_t max_pivots = 2000 + 64 * (m + n);
  for (std::size_t pivots = 0;; ++pivots) {
    if (pivots > max_pivots) throw Error("simplex: pivot limit exceeded");
    // Entering: smallest-index column with a negative reduced cost.
    std::size_t enter = rhs;
    for (std::size_t j = 0; j < n + m; ++j) {
      if (t[m][j] < -kSimplexTol) { enter = j; break; }
    }
    if (enter == rhs) break;  // optimal
    // Leaving: minimum ratio; ties resolved by smallest basic-variable index.
    std::size_t leave = m;
    double best_ratio = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (t[i][enter] <= kSimplexTol) continue;
      const double ratio = t[i][rhs] / t[i][enter];
      if (leave == m || ratio < best_ratio - kSimplexTol ||
          (ratio < best_ratio + kSimplexTol && basis[i] < basis[leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    if (leave == m) throw Error("simplex: unbounded problem");  // cannot happen for A > 0
    // Pivot on (leave, enter).
    const double inv = 1.0 / t[leave][enter];
    for (double& x : t[leave]) x *= inv;
    t[leave][enter] = 1.0;
    for (std::size_t i = 0; i <= m; ++i) {
      if (i == leave) continue;
      const double f = t[i][enter];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= rhs; ++j) t[i][j] -= f * t[leave][j];
      t[i][enter] = 0.0;
    }
    basis[leave] = enter;
  }

  UnitLpResult out;
  out.objective = t[m][rhs];
  out.duals.resize(m);
  for (std::size_t i = 0; i < m; ++i) out.duals[i] = std::max(0.0, t[m][n + i]);
  return out;
}

}  // namespace detail

/**
 * Optimal maximin mixed strategy and game value.
 *
 * The LP is the classic unit-form reduction: shift the payoff matrix so all
 * entries are >= 1 (value becomes positive), solve
 *     max sum(y)  s.t.  M' y <= 1, y >= 0
 * over the column player's scaled strategy, and read the row player's
 * strategy off the optimal duals. The returned certificate is the largest
 * amount by which any column payoff of the returned strategy falls short of
 * the returned value.
 */
inline MatrixSolution solve_matrix_game(const MatrixGame& g) {
  g.validate();
  const std::size_t m = g.rows(), n = g.cols();
  double lo = g.payoff[0][0];
  for (const auto& row : g.payoff)
    for (double v : row) lo = std::min(lo, v);
  const double shift = 1.0 - lo;
  Matrix shifted(m, std::vector<double>(n));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < n; ++j) shifted[i][j] = g.payoff[i][j] + shift;

  const auto lp = detail::solve_unit_lp(shifted);
  if (lp.objective <= 0.0) throw Error("matrix game solve failed: nonpositive LP objective");
  const double scaled_value = 1.0 / lp.objective;

  MatrixSolution sol;
  sol.value = scaled_value - shift;
  sol.row_strategy.resize(m);
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    sol.row_strategy[i] = std::max(0.0, lp.duals[i] * scaled_value);
    total += sol.row_strategy[i];
  }
  if (total <= 0.0) throw Error("matrix game solve failed: degenerate dual strategy");
  for (double& p : sol.row_strategy) p /= total;

  sol.certificate = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double pay = 0.0;
    for (std::size_t i = 0; i < m; ++i) pay += sol.row_strategy[i] * g.payoff[i][j];
    sol.certificate = std::max(sol.certificate, sol.value - pay);
  }
  if (sol.certificate > 1e-6)
    throw Error(strf("matrix game solve failed certificate check (violation %.3e)", sol.certificate));
  return sol;
}

/// Column player's best pure counter-strategy against a fixed row mix.
/// Ties go to the lowest column index.
inline PureResponse best_pure_response(const MatrixGame& g, const std::vector<double>& strategy) {
  g.validate();
  if (strategy.size() != g.rows())
    throw ValidationError(strf("dimension mismatch: strategy length %zu vs %zu rows",
                               strategy.size(), g.rows()));
  double total = 0.0;
  for (double p : strategy) {
    if (p < -1e-9) throw ValidationError("strategy has a negative entry");
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-6)
    throw ValidationError(strf("strategy entries sum to %.9f, expected 1", total));

  PureResponse best;
  for (std::size_t j = 0; j < g.cols(); ++j) {
    double pay = 0.0;
    for (std::size_t i = 0; i < g.rows(); ++i) pay += strategy[i] * g.payoff[i][j];
    if (j == 0 || pay < best.value) best = {j, pay};
  }
  return best;
}

/// Best pure row: argmax over rows of the row's worst column entry.
/// Ties go to the lowest row index.
inline PureResponse maximin_pure(const MatrixGame& g) {
  g.validate();
  PureResponse best;
  for (std::size_t i = 0; i < g.rows(); ++i) {
    double row_min = g.payoff[i][0];
    for (std::size_t j = 1; j < g.cols(); ++j) row_min = std::min(row_min, g.payoff[i][j]);
    if (i == 0 || row_min > best.value) best = {i, row_min};
  }
  return best;
}

}  // namespace mtdgame
