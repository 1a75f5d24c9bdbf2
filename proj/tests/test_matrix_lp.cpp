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

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <random>

#include "mtdgame/matrix_lp.hpp"
#include "test_helpers.hpp"

using namespace mtdgame;

namespace {

// Table 3 defender payoffs with the defender as the row player:
// rows no-mon / mon-Web / mon-FTP, columns no-op / exp-Web / exp-FTP.
const Matrix kStateOneMatrix = {{0, -7, -10}, {-2, 5, -10}, {-3, -10, 7}};

MatrixGame transposed_negated(const MatrixGame& g) {
  Matrix t(g.cols(), std::vector<double>(g.rows()));
  for (std::size_t i = 0; i < g.rows(); ++i)
    for (std::size_t j = 0; j < g.cols(); ++j) t[j][i] = -g.payoff[i][j];
  return MatrixGame{std::move(t)};
}

double worst_column_payoff(const MatrixGame& g, const std::vector<double>& p) {
  double worst = 0.0;
  for (std::size_t j = 0; j < g.cols(); ++j) {
    double pay = 0.0;
    for (std::size_t i = 0; i < g.rows(); ++i) pay += p[i] * g.payoff[i][j];
    if (j == 0 || pay < worst) worst = pay;
  }
  return worst;
}

MatrixGame random_game(std::mt19937_64& rng) {
  std::uniform_int_distribution<std::size_t> dim(1, 6);
  std::uniform_real_distribution<double> val(-10.0, 10.0);
  MatrixGame g;
  g.payoff.assign(dim(rng), std::vector<double>(dim(rng)));
  for (auto& row : g.payoff)
    for (double& v : row) v = val(rng);
  return g;
}

}  // namespace

TEST_CASE("matching pennies solves to the uniform mix") {
  const MatrixSolution sol = solve_matrix_game(MatrixGame{{{1, -1}, {-1, 1}}});
  CHECK(std::abs(sol.value) < 1e-9);
  CHECK(std::abs(sol.row_strategy[0] - 0.5) < 1e-9);
  CHECK(std::abs(sol.row_strategy[1] - 0.5) < 1e-9);
  CHECK(sol.certificate < 1e-9);
}

TEST_CASE("a strictly dominant row is played with probability one") {
  const MatrixSolution sol = solve_matrix_game(MatrixGame{{{5, 5}, {1, 1}}});
  CHECK(std::abs(sol.value - 5.0) < 1e-9);
  CHECK(std::abs(sol.row_strategy[0] - 1.0) < 1e-9);
  CHECK(std::abs(sol.row_strategy[1]) < 1e-9);
}

TEST_CASE("state-one matrix agrees with the dual LP and a simplex grid search") {
  const MatrixGame g{kStateOneMatrix};
  const MatrixSolution primal = solve_matrix_game(g);
  const MatrixSolution dual = solve_matrix_game(transposed_negated(g));
  const double grid = mtdtest::grid_maximin(kStateOneMatrix, 1e-3);

  // All three routes must land on the same value.
  CHECK(std::abs(primal.value - (-dual.value)) < 1e-3);
  CHECK(std::abs(primal.value - grid) < 1e-3);
  CHECK(std::abs(dual.value - (-grid)) < 1e-3);

  // Frozen equilibrium of this matrix: value -2.35, strategy (0.05, 0.5, 0.45).
  CHECK(std::abs(primal.value - (-2.35)) < 1e-9);
  CHECK(std::abs(primal.row_strategy[0] - 0.05) < 1e-7);
  CHECK(std::abs(primal.row_strategy[1] - 0.50) < 1e-7);
  CHECK(std::abs(primal.row_strategy[2] - 0.45) < 1e-7);
}

TEST_CASE("best_pure_response picks the minimizing column with low-index ties") {
  const MatrixGame pennies{{{1, -1}, {-1, 1}}};
  const PureResponse r1 = best_pure_response(pennies, {1.0, 0.0});
  CHECK(r1.index == 1);
  CHECK(r1.value == -1.0);

  const PureResponse r2 = best_pure_response(pennies, {0.5, 0.5});
  CHECK(r2.index == 0);  // both columns give 0
  CHECK(r2.value == 0.0);

  const PureResponse r3 = best_pure_response(MatrixGame{kStateOneMatrix},
                                             {1.0 / 3, 1.0 / 3, 1.0 / 3});
  CHECK(r3.index == 2);
  CHECK(std::abs(r3.value - (-13.0 / 3)) < 1e-12);
}

TEST_CASE("maximin_pure scans row minima with low-index ties") {
  const PureResponse r1 = maximin_pure(MatrixGame{kStateOneMatrix});
  CHECK(r1.index == 0);  // all three row minima are -10
  CHECK(r1.value == -10.0);

  const PureResponse r2 = maximin_pure(MatrixGame{{{5, 5}, {1, 1}}});
  CHECK(r2.index == 0);
  CHECK(r2.value == 5.0);

  const PureResponse r3 = maximin_pure(MatrixGame{{{3.25}}});
  CHECK(r3.index == 0);
  CHECK(r3.value == 3.25);
}

TEST_CASE("invalid inputs are rejected") {
  CHECK_THROWS_AS(solve_matrix_game(MatrixGame{{}}), ValidationError);
  CHECK_THROWS_AS(solve_matrix_game(MatrixGame{{{1.0, std::numeric_limits<double>::infinity()}}}),
                  ValidationError);
  CHECK_THROWS_AS(solve_matrix_game(MatrixGame{{{1.0, 2.0}, {3.0}}}), ValidationError);
  CHECK_THROWS_WITH(best_pure_response(MatrixGame{kStateOneMatrix}, {0.5, 0.5}),
                    Catch::Matchers::ContainsSubstring("dimension mismatch"));
  CHECK_THROWS_AS(best_pure_response(MatrixGame{kStateOneMatrix}, {0.5, 0.2, 0.2}),
                  ValidationError);
}

TEST_CASE("LP properties hold on random matrices") {
  std::mt19937_64 rng(31415926);
  for (int trial = 0; trial < 300; ++trial) {
    const MatrixGame g = random_game(rng);
    const MatrixSolution sol = solve_matrix_game(g);

    // Strategy is a distribution.
    double total = 0.0;
    for (double p : sol.row_strategy) {
      CHECK(p >= 0.0);
      total += p;
    }
    CHECK(std::abs(total - 1.0) < 1e-9);

    // Certificate: the strategy really guarantees the value.
    CHECK(sol.certificate < 1e-7);
    CHECK(worst_column_payoff(g, sol.row_strategy) >= sol.value - 1e-7);

    // Strong duality against the column player's LP.
    const MatrixSolution dual = solve_matrix_game(transposed_negated(g));
    CHECK(std::abs(sol.value + dual.value) < 1e-7);

    // Mixing can only help over the pure maximin.
    CHECK(sol.value >= maximin_pure(g).value - 1e-9);

    // Value stays inside the payoff range.
    double lo = g.payoff[0][0], hi = g.payoff[0][0];
    for (const auto& row : g.payoff)
      for (double v : row) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    CHECK(sol.value >= lo - 1e-9);
    CHECK(sol.value <= hi + 1e-9);
  }
}

TEST_CASE("shift and scale equivariance") {
  std::mt19937_64 rng(271828);
  std::uniform_real_distribution<double> alpha_dist(0.1, 3.0);
  std::uniform_real_distribution<double> beta_dist(-5.0, 5.0);
  for (int trial = 0; trial < 100; ++trial) {
    const MatrixGame g = random_game(rng);
    const double alpha = alpha_dist(rng), beta = beta_dist(rng);
    MatrixGame h = g;
    for (auto& row : h.payoff)
      for (double& v : row) v = alpha * v + beta;

    const MatrixSolution base = solve_matrix_game(g);
    const MatrixSolution scaled = solve_matrix_game(h);
    CHECK(std::abs(scaled.value - (alpha * base.value + beta)) < 1e-6);
    // The original optimum stays optimal for the transformed game.
    CHECK(worst_column_payoff(h, base.row_strategy) >= scaled.value - 1e-6);
  }
}
