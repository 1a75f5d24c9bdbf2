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
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "mtdgame/common.hpp"
#include "mtdgame/game_model.hpp"
#include "mtdgame/matrix_lp.hpp"

namespace mtdgame {

/// Per-state probability distribution over that state's defender actions.
struct MixedPolicy {
  std::vector<std::vector<double>> per_state;

  bool operator==(const MixedPolicy&) const = default;
};

struct SolveResult {
  std::vector<double> values;            // defender's value per state
  MixedPolicy policy;
  std::vector<Matrix> q;                 // per state, rows = defender, cols = attacker
  std::size_t iterations = 0;
  double residual = 0.0;                 // sup-norm residual at the last iteration
  std::vector<double> residual_history;  // residual after each iteration, from t = 1
};

struct EvalResult {
  std::vector<double> values;
  std::size_t iterations = 0;
  double residual = 0.0;
  std::vector<double> residual_history;
};

struct SolveOptions {
  double epsilon = 1e-6;
  std::size_t max_iterations = 0;  // 0: analytic contraction bound plus margin
};

/// Iterations needed to push the value-iteration error below epsilon,
/// from the gamma-contraction bound with V0 = 0.
inline std::size_t iteration_bound(double gamma, double epsilon, double max_abs_reward) {
  if (max_abs_reward <= 0.0 || gamma <= 0.0) return 1;
  const double x = epsilon * (1.0 - gamma) / max_abs_reward;
  if (x >= 1.0) return 1;
  return static_cast<std::size_t>(std::ceil(std::log(x) / std::log(gamma)));
}

namespace detail {

/// Stage-game Q-matrix for state s, defender rows:
/// Q[a1][a2] = R(s,a1,a2) + gamma * sum_s' tau(s,a1,a2,s') V(s').
inline Matrix build_q(const MarkovGame& game, const std::vector<double>& values, std::size_t s) {
  const StateGame& st = game.states[s];
  const std::size_t na1 = st.defender_count(), na2 = st.attacker_count();
  Matrix q(na1, std::vector<double>(na2, 0.0));
  for (std::size_t a2 = 0; a2 < na2; ++a2) {
    for (std::size_t a1 = 0; a1 < na1; ++a1) {
      double cont = 0.0;
      const auto& row = st.transition[a2][a1];
      for (std::size_t k = 0; k < row.size(); ++k)
        if (row[k] != 0.0) cont += row[k] * values[k];
      q[a1][a2] = st.reward[a2][a1] + game.gamma * cont;
    }
  }
  return q;
}

inline void require_valid_game(const MarkovGame& game) {
  auto violations = validate_game(game);
  if (!violations.empty()) {
    std::string msg = "invalid game:";
    for (const auto& v : violations) msg += strf("\n  [%s] %s", v.code.c_str(), v.detail.c_str());
    throw ValidationError(msg);
  }
}

inline void require_valid_policy(const MarkovGame& game, const MixedPolicy& policy) {
  if (policy.per_state.size() != game.states.size())
    throw ValidationError(strf("policy covers %zu states, game has %zu",
                               policy.per_state.size(), game.states.size()));
  for (std::size_t s = 0; s < game.states.size(); ++s) {
    const auto& pi = policy.per_state[s];
    if (pi.size() != game.states[s].defender_count())
      throw ValidationError(strf("policy for state '%s' has %zu entries, expected %zu",
                                 game.states[s].id.c_str(), pi.size(),
                                 game.states[s].defender_count()));
    double total = 0.0;
    for (double p : pi) {
      if (p < -1e-9) throw ValidationError(strf("policy for state '%s' has a negative entry",
                                                game.states[s].id.c_str()));
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-6)
      throw ValidationError(strf("policy for state '%s' sums to %.9f", game.states[s].id.c_str(), total));
  }
}

/// One-step lookahead value of a state under a per-state backup rule.
template <typename Backup>
std::vector<double> iterate_to_fixpoint(const MarkovGame& game, const SolveOptions& opt,
                                        const char* what, Backup&& backup,
                                        std::size_t* out_iterations, double* out_residual,
                                        std::vector<double>* out_history) {
  const std::size_t ns = game.states.size();
  std::size_t max_iter = opt.max_iterations;
  if (max_iter == 0)
    max_iter = iteration_bound(game.gamma, opt.epsilon, game.max_abs_reward()) + 16;
  if (opt.epsilon <= 0.0) throw ValidationError("epsilon must be positive");

  std::vector<double> values(ns, 0.0), next(ns, 0.0);
  double residual = 0.0;
  for (std::size_t it = 1; it <= max_iter; ++it) {
    residual = 0.0;
    for (std::size_t s = 0; s < ns; ++s) {
      next[s] = backup(values, s);
      residual = std::max(residual, std::abs(next[s] - values[s]));
    }
    values.swap(next);
    if (out_history) out_history->push_back(residual);
    if (residual < opt.epsilon) {
      if (out_iterations) *out_iterations = it;
      if (out_residual) *out_residual = residual;
      return values;
    }
  }
  throw ConvergenceError(strf("%s did not converge within %zu iterations (residual %.3e, "
                              "gamma %.4f may be too close to 1 for epsilon %.1e)",
                              what, max_iter, residual, game.gamma, opt.epsilon),
                         max_iter, residual);
}

}  // namespace detail

/**
 * Shapley value iteration: each state's value is the LP value of its stage
 * Q-matrix, iterated from V = 0 until the sup-norm residual drops below
 * epsilon. The returned values, policy and Q-matrices come from one final
 * consistent backup, so values[s] is exactly the matrix-game value of q[s].
 */
inline SolveResult solve_optimal(const MarkovGame& game, const SolveOptions& opt = {}) {
  detail::require_valid_game(game);
  SolveResult result;
  auto backup = [&game](const std::vector<double>& v, std::size_t s) {
    Matrix q = detail::build_q(game, v, s);
    if (q.size() == 1 && q.front().size() == 1) return q[0][0];
    return solve_matrix_game(MatrixGame{std::move(q)}).value;
  };
  std::vector<double> fix = detail::iterate_to_fixpoint(game, opt, "value iteration", backup,
                                                        &result.iterations, &result.residual,
                                                        &result.residual_history);
  const std::size_t ns = game.states.size();
  result.values.resize(ns);
  result.policy.per_state.resize(ns);
  result.q.resize(ns);
  for (std::size_t s = 0; s < ns; ++s) {
    result.q[s] = detail::build_q(game, fix, s);
    if (result.q[s].size() == 1 && result.q[s].front().size() == 1) {
      result.values[s] = result.q[s][0][0];
      result.policy.per_state[s] = {1.0};
    } else {
      MatrixSolution sol = solve_matrix_game(MatrixGame{result.q[s]});
      result.values[s] = sol.value;
      result.policy.per_state[s] = std::move(sol.row_strategy);
    }
  }
  return result;
}

/**
 * Min-Max Pure Strategy baseline: the same iteration with the pure maximin
 * replacing the LP. The returned policy is degenerate (one action per state),
 * the best static placement.
 */
inline SolveResult solve_mmps(const MarkovGame& game, const SolveOptions& opt = {}) {
  detail::require_valid_game(game);
  SolveResult result;
  auto backup = [&game](const std::vector<double>& v, std::size_t s) {
    return maximin_pure(MatrixGame{detail::build_q(game, v, s)}).value;
  };
  std::vector<double> fix = detail::iterate_to_fixpoint(game, opt, "pure-strategy iteration", backup,
                                                        &result.iterations, &result.residual,
                                                        &result.residual_history);
  const std::size_t ns = game.states.size();
  result.values.resize(ns);
  result.policy.per_state.resize(ns);
  result.q.resize(ns);
  for (std::size_t s = 0; s < ns; ++s) {
    result.q[s] = detail::build_q(game, fix, s);
    PureResponse best = maximin_pure(MatrixGame{result.q[s]});
    result.values[s] = best.value;
    result.policy.per_state[s].assign(game.states[s].defender_count(), 0.0);
    result.policy.per_state[s][best.index] = 1.0;
  }
  return result;
}

/// Uniform Random Strategy baseline: equal mass on every defender action.
inline MixedPolicy uniform_policy(const MarkovGame& game) {
  detail::require_valid_game(game);
  MixedPolicy policy;
  for (const StateGame& s : game.states)
    policy.per_state.push_back(
        std::vector<double>(s.defender_count(), 1.0 / static_cast<double>(s.defender_count())));
  return policy;
}

/**
 * Value of a fixed defender policy against a best-responding attacker:
 * iterate V(s) = min over a2 of the policy-weighted Q column until
 * convergence. This is the defender's guaranteed (worst-case) value of pi.
 */
inline EvalResult evaluate_policy(const MarkovGame& game, const MixedPolicy& policy,
                                  const SolveOptions& opt = {}) {
  detail::require_valid_game(game);
  detail::require_valid_policy(game, policy);
  EvalResult result;
  auto backup = [&game, &policy](const std::vector<double>& v, std::size_t s) {
    const Matrix q = detail::build_q(game, v, s);
    const auto& pi = policy.per_state[s];
    double best = 0.0;
    for (std::size_t a2 = 0; a2 < q.front().size(); ++a2) {
      double pay = 0.0;
      for (std::size_t a1 = 0; a1 < q.size(); ++a1) pay += pi[a1] * q[a1][a2];
      if (a2 == 0 || pay < best) best = pay;
    }
    return best;
  };
  result.values = detail::iterate_to_fixpoint(game, opt, "policy evaluation", backup,
                                              &result.iterations, &result.residual,
                                              &result.residual_history);
  return result;
}

/// Attacker's pure best response per state against a fixed mixed policy,
/// computed at the supplied converged values. Ties go to the lowest index.
inline std::vector<std::size_t> best_response_actions(const MarkovGame& game,
                                                      const MixedPolicy& policy,
                                                      const std::vector<double>& values) {
  detail::require_valid_policy(game, policy);
  if (values.size() != game.states.size())
    throw ValidationError("values vector does not match the game's state count");
  std::vector<std::size_t> out(game.states.size(), 0);
  for (std::size_t s = 0; s < game.states.size(); ++s) {
    const Matrix q = detail::build_q(game, values, s);
    const auto& pi = policy.per_state[s];
    double best = 0.0;
    for (std::size_t a2 = 0; a2 < q.front().size(); ++a2) {
      double pay = 0.0;
      for (std::size_t a1 = 0; a1 < q.size(); ++a1) pay += pi[a1] * q[a1][a2];
      if (a2 == 0 || pay < best) {
        best = pay;
        out[s] = a2;
      }
    }
  }
  return out;
}

}  // namespace mtdgame
