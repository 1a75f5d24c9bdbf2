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

#include <cmath>
#include <cstdint>
#include <future>
#include <string>
#include <vector>

#include "mtdgame/common.hpp"
#include "mtdgame/game_model.hpp"
#include "mtdgame/json_io.hpp"
#include "mtdgame/solver.hpp"

namespace mtdgame {

enum class AttackerMode { BestResponse, UniformRandom, FixedPure };

struct RolloutConfig {
  std::size_t episodes = 10000;
  std::size_t horizon = 200;
  std::uint64_t seed = 0;
  AttackerMode attacker = AttackerMode::BestResponse;
  /// Required for FixedPure: one attacker action name per state.
  std::vector<std::string> fixed_actions;
  /// Convergence threshold for the internal best-response computation.
  double epsilon = 1e-9;

  void validate() const {
    if (episodes < 1) throw ValidationError("episodes must be at least 1");
    if (horizon < 1) throw ValidationError("horizon must be at least 1");
  }
};

struct StartStateStats {
  std::string state;
  double mean_return = 0.0;
  double std_error = 0.0;
  std::size_t detected_episodes = 0;  // episodes with at least one detection event
  std::size_t goal_episodes = 0;      // episodes that touched a terminal state
};

struct RolloutReport {
  std::string generator;  // RNG algorithm, for cross-implementation reproducibility
  std::uint64_t seed = 0;
  std::size_t episodes = 0;
  std::size_t horizon = 0;
  double gamma = 0.0;
  double truncation_bound = 0.0;  // gamma^horizon * R_max / (1 - gamma)
  std::vector<StartStateStats> per_start;
};

namespace detail {

/// SplitMix64 (Steele, Lea, Flood 2014). Trivially seedable, which makes
/// per-episode streams cheap and portable.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

inline std::uint64_t mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

/// Stream seed for (seed, start state, episode). Parallel and serial
/// execution draw identical numbers because every episode owns its stream.
inline std::uint64_t episode_stream(std::uint64_t seed, std::uint64_t start, std::uint64_t episode) {
  std::uint64_t k = mix64(seed + 0x9E3779B97F4A7C15ull * (start + 1));
  return mix64(k + 0x9E3779B97F4A7C15ull * (episode + 1));
}

inline std::size_t sample_categorical(SplitMix64& rng, const std::vector<double>& probs) {
  const double u = rng.uniform();
  double acc = 0.0;
  std::size_t last = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    if (probs[i] <= 0.0) continue;
    acc += probs[i];
    last = i;
    if (u < acc) return i;
  }
  return last;  // guards accumulated rounding at u ~ 1
}

}  // namespace detail

/**
 * Monte-Carlo rollouts of a defender mixed policy on the game's transition
 * kernel, one batch per start state. The BestResponse attacker plays the
 * per-state pure minimizer against the mixed policy (computed once from the
 * converged Q of evaluate_policy, matching an attacker who knows the
 * strategy but not the sampled action). Identical seeds give identical
 * reports.
 */
inline RolloutReport simulate(const MarkovGame& game, const MixedPolicy& policy,
                              const RolloutConfig& cfg) {
  detail::require_valid_game(game);
  detail::require_valid_policy(game, policy);
  cfg.validate();

  const std::size_t ns = game.states.size();
  std::vector<std::size_t> attacker_fixed(ns, 0);
  if (cfg.attacker == AttackerMode::BestResponse) {
    EvalResult eval = evaluate_policy(game, policy, SolveOptions{cfg.epsilon, 0});
    attacker_fixed = best_response_actions(game, policy, eval.values);
  } else if (cfg.attacker == AttackerMode::FixedPure) {
    if (cfg.fixed_actions.size() != ns)
      throw ValidationError(strf("FixedPure attacker needs %zu action names, got %zu",
                                 ns, cfg.fixed_actions.size()));
    for (std::size_t s = 0; s < ns; ++s)
      attacker_fixed[s] = game.states[s].attacker_index(cfg.fixed_actions[s]);
  }

  RolloutReport report;
  report.generator = "splitmix64";
  report.seed = cfg.seed;
  report.episodes = cfg.episodes;
  report.horizon = cfg.horizon;
  report.gamma = game.gamma;
  report.truncation_bound = game.gamma <= 0.0
                                ? 0.0
                                : std::pow(game.gamma, static_cast<double>(cfg.horizon)) *
                                      game.max_abs_reward() / (1.0 - game.gamma);

  auto run_start_state = [&](std::size_t start) {
    StartStateStats stats;
    stats.state = game.states[start].id;
    double sum = 0.0, sumsq = 0.0;
    for (std::size_t ep = 0; ep < cfg.episodes; ++ep) {
      detail::SplitMix64 rng(detail::episode_stream(cfg.seed, start, ep));
      std::size_t s = start;
      double ret = 0.0, discount = 1.0;
      bool detected = false;
      bool goal = game.states[s].terminal;
      for (std::size_t t = 0; t < cfg.horizon; ++t) {
        const StateGame& st = game.states[s];
        const std::size_t a1 = detail::sample_categorical(rng, policy.per_state[s]);
        std::size_t a2 = attacker_fixed[s];
        if (cfg.attacker == AttackerMode::UniformRandom)
          a2 = static_cast<std::size_t>(rng.next() % st.attacker_count());
        ret += discount * st.reward[a2][a1];
        discount *= game.gamma;
        if (!st.detects.empty() && st.detects[a2][a1]) detected = true;
        s = detail::sample_categorical(rng, st.transition[a2][a1]);
        if (game.states[s].terminal) goal = true;
      }
      sum += ret;
      sumsq += ret * ret;
      if (detected) ++stats.detected_episodes;
      if (goal) ++stats.goal_episodes;
    }
    const double n = static_cast<double>(cfg.episodes);
    stats.mean_return = sum / n;
    if (cfg.episodes > 1) {
      const double var = std::max(0.0, (sumsq - n * stats.mean_return * stats.mean_return) / (n - 1.0));
      stats.std_error = std::sqrt(var / n);
    }
    return stats;
  };

  // Episodes own their RNG streams, so batches can run concurrently and
  // still accumulate in episode order within each start state.
  std::vector<std::future<StartStateStats>> futures;
  futures.reserve(ns);
  for (std::size_t s = 0; s < ns; ++s)
    futures.push_back(std::async(std::launch::async, run_start_state, s));
  for (auto& f : futures) report.per_start.push_back(f.get());
  return report;
}

inline std::string serialize_report(const RolloutReport& report) {
  using jsonio::OJson;
  OJson j;
  j["generator"] = report.generator;
  j["seed"] = report.seed;
  j["episodes"] = report.episodes;
  j["horizon"] = report.horizon;
  j["gamma"] = report.gamma;
  j["truncation_bound"] = report.truncation_bound;
  j["start_states"] = OJson::array();
  for (const StartStateStats& s : report.per_start) {
    OJson js;
    js["state"] = s.state;
    js["mean_return"] = s.mean_return;
    js["std_error"] = s.std_error;
    js["detected_episodes"] = s.detected_episodes;
    js["goal_episodes"] = s.goal_episodes;
    j["start_states"].push_back(std::move(js));
  }
  return j.dump(2) + "\n";
}

}  // namespace mtdgame
