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
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mtdgame/attack_graph.hpp"
#include "mtdgame/common.hpp"
#include "mtdgame/game_model.hpp"
#include "mtdgame/json_io.hpp"
#include "mtdgame/simulator.hpp"
#include "mtdgame/solver.hpp"
#include "mtdgame/vuln_catalog.hpp"

namespace mtdgame::cli {

// Exit codes: 0 success, 1 input error, 2 convergence failure.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 1;
inline constexpr int kExitNoConvergence = 2;

namespace detail {

struct BuildArgs {
  std::string graph, catalog, costs, success_model, out, detection = "thwart";
  int budget = 1;
  double gamma = 0.8;
  double terminal_reward = 10.0;
};

struct SolveArgs {
  std::string game, strategy = "optimal", out;
  double epsilon = 1e-6;
};

struct SweepArgs {
  std::string game, out;
  std::vector<double> gammas;
  double epsilon = 1e-6;
};

struct SimulateArgs {
  std::string game, policy, out, attacker = "best-response";
  std::size_t episodes = 10000;
  std::size_t horizon = 200;
  std::uint64_t seed = 0;
  double epsilon = 1e-9;
};

inline void cmd_build(const BuildArgs& a, std::ostream& out, std::ostream& err) {
  const AttackGraphDocument doc = parse_attack_graph_document(read_file(a.graph));
  const VulnCatalog catalog = load_catalog(read_file(a.catalog));
  MonitorSpec monitors;
  if (!a.costs.empty()) monitors = load_monitor_spec(read_file(a.costs));
  BuildOptions opt;
  opt.budget.max_monitors = a.budget;
  opt.gamma = a.gamma;
  opt.terminal_reward = a.terminal_reward;
  if (!a.success_model.empty()) opt.success_model = load_success_model(read_file(a.success_model));
  if (a.detection == "thwart")
    opt.detection = DetectionEffect::Thwart;
  else if (a.detection == "observe")
    opt.detection = DetectionEffect::Observe;
  else
    throw ParseError(strf("unknown detection effect '%s'", a.detection.c_str()));

  const BuildResult built = build_game(doc.graph, doc.partition, catalog, monitors, opt);
  for (const std::string& w : built.warnings) err << "warning: " << w << "\n";
  write_file(a.out, save_game(built.game));
  out << "states: " << built.game.states.size() << "\n";
  for (const StateGame& s : built.game.states)
    out << strf("  %s: defender actions %zu, attacker actions %zu%s\n", s.id.c_str(),
                s.defender_count(), s.attacker_count(), s.terminal ? " (terminal)" : "");
  out << "wrote " << a.out << "\n";
}

inline void print_policy_listing(std::ostream& out, const MarkovGame& game,
                                 const std::vector<double>& values, const MixedPolicy& policy) {
  for (std::size_t s = 0; s < game.states.size(); ++s) {
    const StateGame& st = game.states[s];
    out << strf("V(%s) = %.6f\n", st.id.c_str(), values[s]);
    std::string line;
    for (std::size_t a1 = 0; a1 < st.defender_count(); ++a1)
      line += strf("%s%s: %.3f", a1 ? ", " : "", st.defender_actions[a1].c_str(),
                   policy.per_state[s][a1]);
    out << strf("pi(%s) : {%s}\n", st.id.c_str(), line.c_str());
  }
}

inline std::string policy_document(const std::string& strategy, const MarkovGame& game,
                                   const std::vector<double>& values, const MixedPolicy& policy,
                                   double epsilon, std::size_t iterations, double residual) {
  using jsonio::OJson;
  OJson j;
  j["strategy"] = strategy;
  j["gamma"] = game.gamma;
  j["epsilon"] = epsilon;
  j["iterations"] = iterations;
  j["residual"] = residual;
  j["states"] = OJson::array();
  for (std::size_t s = 0; s < game.states.size(); ++s) {
    const StateGame& st = game.states[s];
    OJson js;
    js["id"] = st.id;
    js["value"] = values[s];
    OJson pol;
    for (std::size_t a1 = 0; a1 < st.defender_count(); ++a1)
      pol[st.defender_actions[a1]] = policy.per_state[s][a1];
    js["policy"] = std::move(pol);
    j["states"].push_back(std::move(js));
  }
  return j.dump(2) + "\n";
}

inline void cmd_solve(const SolveArgs& a, std::ostream& out) {
  const MarkovGame game = load_game(read_file(a.game));
  const SolveOptions opt{a.epsilon, 0};
  std::vector<double> values;
  MixedPolicy policy;
  std::size_t iterations = 0;
  double residual = 0.0;
  if (a.strategy == "optimal" || a.strategy == "mmps") {
    SolveResult res = a.strategy == "optimal" ? solve_optimal(game, opt) : solve_mmps(game, opt);
    values = std::move(res.values);
    policy = std::move(res.policy);
    iterations = res.iterations;
    residual = res.residual;
  } else if (a.strategy == "urs") {
    policy = uniform_policy(game);
    EvalResult res = evaluate_policy(game, policy, opt);
    values = std::move(res.values);
    iterations = res.iterations;
    residual = res.residual;
  } else {
    throw ParseError(strf("unknown strategy '%s' (expected optimal, mmps or urs)",
                          a.strategy.c_str()));
  }
  out << strf("strategy: %s  gamma: %g  iterations: %zu  residual: %.3e\n", a.strategy.c_str(),
              game.gamma, iterations, residual);
  print_policy_listing(out, game, values, policy);
  if (!a.out.empty()) {
    write_file(a.out, policy_document(a.strategy, game, values, policy, a.epsilon, iterations, residual));
    out << "wrote " << a.out << "\n";
  }
}

inline void cmd_sweep(const SweepArgs& a, std::ostream& out) {
  MarkovGame game = load_game(read_file(a.game));
  std::vector<double> gammas = a.gammas;
  if (gammas.empty()) throw ParseError("sweep needs at least one gamma");
  for (double g : gammas)
    if (!(g >= 0.0 && g < 1.0)) throw ParseError(strf("gamma %.4f out of range [0,1)", g));
  std::sort(gammas.begin(), gammas.end());
  gammas.erase(std::unique(gammas.begin(), gammas.end()), gammas.end());

  std::string table = "gamma";
  for (std::size_t s = 0; s < game.states.size(); ++s)
    table += strf(" V%zu_mmp V%zu_ur V%zu_om", s, s, s);
  table += "\n";
  const SolveOptions opt{a.epsilon, 0};
  for (double g : gammas) {
    game.gamma = g;
    const SolveResult mmps = solve_mmps(game, opt);
    const EvalResult urs = evaluate_policy(game, uniform_policy(game), opt);
    const SolveResult om = solve_optimal(game, opt);
    table += strf("%.6f", g);
    for (std::size_t s = 0; s < game.states.size(); ++s)
      table += strf(" %.6f %.6f %.6f", mmps.values[s], urs.values[s], om.values[s]);
    table += "\n";
  }
  write_file(a.out, table);
  out << strf("wrote %s (%zu rows, %zu states)\n", a.out.c_str(), gammas.size(),
              game.states.size());
}

inline MixedPolicy parse_policy_document(const std::string& text, const MarkovGame& game) {
  using jsonio::Json;
  const Json doc = jsonio::parse(text, "policy");
  const Json& states = jsonio::field(doc, "states", "policy");
  if (!states.is_array() || states.size() != game.states.size())
    throw ValidationError(strf("policy/game shape mismatch: policy lists %zu states, game has %zu",
                               states.is_array() ? states.size() : 0, game.states.size()));
  MixedPolicy policy;
  policy.per_state.resize(game.states.size());
  for (std::size_t i = 0; i < states.size(); ++i) {
    const Json& js = states.at(i);
    const std::string id = jsonio::get_string(js, "id", strf("policy.states[%zu]", i));
    const std::size_t s = game.index_of(id);
    const StateGame& st = game.states[s];
    const Json& pol = jsonio::field(js, "policy", strf("policy.states[%zu]", i));
    if (!pol.is_object()) throw ParseError("policy entries must be objects");
    std::vector<double> pi(st.defender_count(), 0.0);
    for (auto it = pol.begin(); it != pol.end(); ++it) {
      bool found = false;
      for (std::size_t a1 = 0; a1 < st.defender_count(); ++a1) {
        if (st.defender_actions[a1] == it.key()) {
          if (!it.value().is_number()) throw ParseError("policy probabilities must be numbers");
          pi[a1] = it.value().get<double>();
          found = true;
          break;
        }
      }
      if (!found)
        throw ValidationError(strf("policy/game shape mismatch: state '%s' has no defender action '%s'",
                                   id.c_str(), it.key().c_str()));
    }
    policy.per_state[s] = std::move(pi);
  }
  return policy;
}

inline void cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  const MarkovGame game = load_game(read_file(a.game));
  const MixedPolicy policy = parse_policy_document(read_file(a.policy), game);
  RolloutConfig cfg;
  cfg.episodes = a.episodes;
  cfg.horizon = a.horizon;
  cfg.seed = a.seed;
  cfg.epsilon = a.epsilon;
  if (a.attacker == "best-response")
    cfg.attacker = AttackerMode::BestResponse;
  else if (a.attacker == "uniform")
    cfg.attacker = AttackerMode::UniformRandom;
  else
    throw ParseError(strf("unknown attacker mode '%s' (expected best-response or uniform)",
                          a.attacker.c_str()));

  const RolloutReport report = simulate(game, policy, cfg);
  out << strf("generator: %s  seed: %llu  episodes: %zu  horizon: %zu  truncation bound: %.3e\n",
              report.generator.c_str(), static_cast<unsigned long long>(report.seed),
              report.episodes, report.horizon, report.truncation_bound);
  for (const StartStateStats& s : report.per_start)
    out << strf("  %s: mean return %.6f (se %.6f), detected %zu, goal %zu\n", s.state.c_str(),
                s.mean_return, s.std_error, s.detected_episodes, s.goal_episodes);
  if (!a.out.empty()) {
    write_file(a.out, serialize_report(report));
    out << "wrote " << a.out << "\n";
  }
}

}  // namespace detail

/// Parses argv-style arguments (program name excluded) and runs one
/// subcommand. All diagnostics go to err; exit code follows the 0/1/2 scheme.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Markov-game solver for optimal IDS placement against multi-stage attacks"};
  app.require_subcommand(1);

  detail::BuildArgs build;
  CLI::App* b = app.add_subcommand("build", "Compile an attack graph, catalog and monitor costs "
                                            "into a Markov game file");
  b->add_option("--graph", build.graph, "Attack-graph document (JSON)")->required();
  b->add_option("--catalog", build.catalog, "Vulnerability catalog (JSON)")->required();
  b->add_option("--costs", build.costs, "Per-state monitor costs (JSON)");
  b->add_option("--budget", build.budget, "Max simultaneous monitors per state")
      ->capture_default_str();
  b->add_option("--gamma", build.gamma, "Discount factor in [0,1)")->capture_default_str();
  b->add_option("--terminal-reward", build.terminal_reward,
                "Recurring defender loss in the goal state")
      ->capture_default_str();
  b->add_option("--success-model", build.success_model,
                "Success-probability override file {easy, medium, high}");
  b->add_option("--detection", build.detection,
                "Effect of a detected exploit: thwart (attack blocked) or observe")
      ->capture_default_str();
  b->add_option("--out", build.out, "Output game file")->required();

  detail::SolveArgs solve;
  CLI::App* s = app.add_subcommand("solve", "Solve a game file for values and a defender policy");
  s->add_option("--game", solve.game, "Game file (JSON)")->required();
  s->add_option("--strategy", solve.strategy, "optimal, mmps or urs")->capture_default_str();
  s->add_option("--epsilon", solve.epsilon, "Convergence threshold")->capture_default_str();
  s->add_option("--out", solve.out, "Machine-readable policy/value document");

  detail::SweepArgs sweep;
  CLI::App* w = app.add_subcommand("sweep", "Solve all three strategies over a list of gammas "
                                            "and write a plottable .dat table");
  w->add_option("--game", sweep.game, "Game file (JSON)")->required();
  w->add_option("--gamma", sweep.gammas, "Gamma values (repeat or comma-separate)")
      ->required()
      ->delimiter(',');
  w->add_option("--epsilon", sweep.epsilon, "Convergence threshold")->capture_default_str();
  w->add_option("--out", sweep.out, "Output .dat file")->required();

  detail::SimulateArgs sim;
  CLI::App* m = app.add_subcommand("simulate", "Monte-Carlo rollouts of a policy file on a game");
  m->add_option("--game", sim.game, "Game file (JSON)")->required();
  m->add_option("--policy", sim.policy, "Policy document from 'solve --out'")->required();
  m->add_option("--episodes", sim.episodes, "Episodes per start state")->capture_default_str();
  m->add_option("--horizon", sim.horizon, "Steps per episode")->capture_default_str();
  m->add_option("--seed", sim.seed, "RNG seed")->capture_default_str();
  m->add_option("--attacker", sim.attacker, "best-response or uniform")->capture_default_str();
  m->add_option("--epsilon", sim.epsilon, "Threshold for the best-response computation")
      ->capture_default_str();
  m->add_option("--out", sim.out, "Rollout report file");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  try {
    if (app.got_subcommand(b)) detail::cmd_build(build, out, err);
    if (app.got_subcommand(s)) detail::cmd_solve(solve, out);
    if (app.got_subcommand(w)) detail::cmd_sweep(sweep, out);
    if (app.got_subcommand(m)) detail::cmd_simulate(sim, out);
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << "\n";
    return kExitNoConvergence;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitOk;
}

}  // namespace mtdgame::cli
