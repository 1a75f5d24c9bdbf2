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
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "mtdgame/attack_graph.hpp"
#include "mtdgame/common.hpp"
#include "mtdgame/json_io.hpp"
#include "mtdgame/vuln_catalog.hpp"

namespace mtdgame {

inline constexpr const char* kNoOpAction = "no-op";
inline constexpr const char* kNoMonAction = "no-mon";
inline constexpr const char* kTerminateAction = "terminate";

/// One deployable IDS: detects exactly one exploit, at a state-specific cost.
struct MonitorDef {
  std::string name;
  std::string exploit;  // attack-graph exploit node id
  double cost = 0.0;

  bool operator==(const MonitorDef&) const = default;
};

/// Per-state monitor inventory.
struct MonitorSpec {
  std::map<std::string, std::vector<MonitorDef>> per_state;

  const std::vector<MonitorDef>* find(const std::string& state_id) const {
    auto it = per_state.find(state_id);
    return it == per_state.end() ? nullptr : &it->second;
  }

  bool operator==(const MonitorSpec&) const = default;
};

/// Loads a costs document: array of {state, monitors: [{name, exploit, cost}]}.
inline MonitorSpec load_monitor_spec(const std::string& text) {
  using jsonio::Json;
  const Json doc = jsonio::parse(text, "costs");
  if (!doc.is_array()) throw ParseError("costs document must be a JSON array");
  MonitorSpec spec;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const Json& js = doc.at(i);
    const std::string where = strf("costs[%zu]", i);
    const std::string state = jsonio::get_string(js, "state", where);
    if (spec.per_state.count(state))
      throw ParseError(strf("%s: duplicate state '%s'", where.c_str(), state.c_str()));
    const Json& monitors = jsonio::field(js, "monitors", where);
    if (!monitors.is_array()) throw ParseError(strf("%s: 'monitors' must be an array", where.c_str()));
    std::vector<MonitorDef> defs;
    for (std::size_t k = 0; k < monitors.size(); ++k) {
      const std::string mwhere = strf("costs[%zu].monitors[%zu]", i, k);
      const Json& jm = monitors.at(k);
      MonitorDef m;
      m.name = jsonio::get_string(jm, "name", mwhere);
      m.exploit = jsonio::get_string(jm, "exploit", mwhere);
      m.cost = jsonio::get_number(jm, "cost", mwhere);
      if (m.cost < 0.0)
        throw ParseError(strf("%s: negative cost %.3f", mwhere.c_str(), m.cost));
      defs.push_back(std::move(m));
    }
    spec.per_state.emplace(state, std::move(defs));
  }
  return spec;
}

struct DefenderBudget {
  int max_monitors = 0;  // maximum simultaneous monitors per state
};

/// What a detected exploit does to the state transition. Thwart keeps the
/// players in place (the attack is stopped); Observe leaves the transition
/// kernel untouched, so detection only changes the stage reward.
enum class DetectionEffect { Thwart, Observe };

/// One state of the compiled game. Reward rows follow the attacker, columns
/// the defender, and hold the defender's payoff (the attacker's is its
/// negation).
struct StateGame {
  std::string id;
  bool terminal = false;
  std::vector<std::string> defender_actions;
  std::vector<std::string> attacker_actions;
  Matrix reward;                                             // [attacker][defender]
  std::vector<std::vector<std::vector<double>>> transition;  // [attacker][defender][next]
  std::vector<std::vector<std::uint8_t>> detects;            // [attacker][defender]

  std::size_t defender_count() const { return defender_actions.size(); }
  std::size_t attacker_count() const { return attacker_actions.size(); }

  std::size_t defender_index(const std::string& name) const {
    for (std::size_t i = 0; i < defender_actions.size(); ++i)
      if (defender_actions[i] == name) return i;
    throw ValidationError(strf("state '%s' has no defender action '%s'", id.c_str(), name.c_str()));
  }

  std::size_t attacker_index(const std::string& name) const {
    for (std::size_t i = 0; i < attacker_actions.size(); ++i)
      if (attacker_actions[i] == name) return i;
    throw ValidationError(strf("state '%s' has no attacker action '%s'", id.c_str(), name.c_str()));
  }

  bool operator==(const StateGame&) const = default;
};

struct MarkovGame {
  double gamma = 0.9;
  std::vector<StateGame> states;

  std::size_t index_of(const std::string& state_id) const {
    for (std::size_t i = 0; i < states.size(); ++i)
      if (states[i].id == state_id) return i;
    throw ValidationError(strf("unknown state '%s'", state_id.c_str()));
  }

  double max_abs_reward() const {
    double r = 0.0;
    for (const StateGame& s : states)
      for (const auto& row : s.reward)
        for (double v : row) r = std::max(r, std::abs(v));
    return r;
  }

  bool operator==(const MarkovGame&) const = default;
};

struct Violation {
  std::string code;
  std::string detail;
};

/// Checks every MarkovGame invariant; an empty report means the game is valid.
inline std::vector<Violation> validate_game(const MarkovGame& game) {
  std::vector<Violation> out;
  auto add = [&out](const char* code, std::string detail) {
    out.push_back({code, std::move(detail)});
  };
  if (!(game.gamma >= 0.0 && game.gamma < 1.0))
    add("discount", strf("gamma %.6f outside [0,1)", game.gamma));
  if (game.states.empty()) {
    add("empty-game", "game has no states");
    return out;
  }
  std::set<std::string> ids;
  for (const StateGame& s : game.states) {
    if (s.id.empty() || !ids.insert(s.id).second)
      add("state-id", strf("empty or duplicate state id '%s'", s.id.c_str()));
  }
  const std::size_t ns = game.states.size();
  for (const StateGame& s : game.states) {
    const std::size_t na1 = s.defender_count(), na2 = s.attacker_count();
    if (na1 == 0 || na2 == 0) {
      add("action-names", strf("state '%s' has an empty action set", s.id.c_str()));
      continue;
    }
    for (const auto* actions : {&s.defender_actions, &s.attacker_actions}) {
      std::set<std::string> seen;
      for (const std::string& a : *actions)
        if (a.empty() || !seen.insert(a).second)
          add("action-names", strf("state '%s': empty or duplicate action '%s'", s.id.c_str(), a.c_str()));
    }
    if (s.reward.size() != na2 || !matrix_is_rectangular(s.reward) ||
        (na2 > 0 && s.reward.front().size() != na1)) {
      add("reward-shape", strf("state '%s': reward matrix is not %zux%zu", s.id.c_str(), na2, na1));
      continue;
    }
    if (!matrix_is_finite(s.reward))
      add("non-finite", strf("state '%s': non-finite reward entry", s.id.c_str()));
    if (s.transition.size() != na2) {
      add("transition-shape", strf("state '%s': transition tensor missing attacker rows", s.id.c_str()));
      continue;
    }
    bool shape_ok = true;
    for (std::size_t a2 = 0; a2 < na2 && shape_ok; ++a2) {
      if (s.transition[a2].size() != na1) {
        add("transition-shape", strf("state '%s': transition tensor missing defender rows", s.id.c_str()));
        shape_ok = false;
        break;
      }
      for (std::size_t a1 = 0; a1 < na1; ++a1) {
        if (s.transition[a2][a1].size() != ns) {
          add("transition-shape",
              strf("state '%s': transition row (%s, %s) has wrong length", s.id.c_str(),
                   s.attacker_actions[a2].c_str(), s.defender_actions[a1].c_str()));
          shape_ok = false;
          break;
        }
        double sum = 0.0;
        bool negative = false;
        for (double pq : s.transition[a2][a1]) {
          if (!std::isfinite(pq)) negative = true;
          if (pq < -1e-12) negative = true;
          sum += pq;
        }
        if (negative)
          add("transition-negative",
              strf("state '%s': transition row (%s, %s) has a negative or non-finite entry",
                   s.id.c_str(), s.attacker_actions[a2].c_str(), s.defender_actions[a1].c_str()));
        if (std::abs(sum - 1.0) > 1e-9)
          add("stochasticity",
              strf("state '%s': transition row (%s, %s) sums to %.12f", s.id.c_str(),
                   s.attacker_actions[a2].c_str(), s.defender_actions[a1].c_str(), sum));
      }
    }
    if (!s.detects.empty()) {
      if (s.detects.size() != na2)
        add("detection-shape", strf("state '%s': detection flags have wrong shape", s.id.c_str()));
      else
        for (const auto& row : s.detects)
          if (row.size() != na1)
            add("detection-shape", strf("state '%s': detection flags have wrong shape", s.id.c_str()));
    }
    if (s.terminal) {
      if (na1 != 1 || na2 != 1)
        add("terminal-shape",
            strf("terminal state '%s' must have exactly one action per player (has %zu x %zu)",
                 s.id.c_str(), na2, na1));
      else if (shape_ok) {
        const std::size_t self = [&] {
          for (std::size_t i = 0; i < ns; ++i)
            if (game.states[i].id == s.id) return i;
          return ns;
        }();
        if (self < ns && std::abs(s.transition[0][0][self] - 1.0) > 1e-9)
          add("terminal-selfloop",
              strf("terminal state '%s' must self-loop with probability 1", s.id.c_str()));
      }
    }
  }
  return out;
}

struct BuildOptions {
  DefenderBudget budget;
  double gamma = 0.9;
  double terminal_reward = 10.0;  // recurring defender loss in the goal state
  ExploitSuccessModel success_model{};
  DetectionEffect detection = DetectionEffect::Thwart;
};

struct BuildResult {
  MarkovGame game;
  std::vector<std::string> warnings;
};

namespace detail {

// Subsets of {0..n-1} up to max_size elements, ordered by size then
// lexicographically, starting with the empty subset.
inline void enumerate_subsets(std::size_t n, std::size_t max_size,
                              std::vector<std::vector<std::size_t>>& out) {
  out.push_back({});
  std::vector<std::size_t> current;
  auto rec = [&](auto&& self, std::size_t start, std::size_t remaining) -> void {
    if (remaining == 0) {
      out.push_back(current);
      return;
    }
    for (std::size_t i = start; i + remaining <= n; ++i) {
      current.push_back(i);
      self(self, i + 1, remaining - 1);
      current.pop_back();
    }
  };
  for (std::size_t size = 1; size <= max_size; ++size) {
    current.clear();
    rec(rec, 0, size);
  }
}

}  // namespace detail

/**
 * Compiles an attack graph, state partition, vulnerability catalog and
 * monitor inventory into a concrete zero-sum Markov game.
 *
 * Per non-terminal state s:
 *   A2(s) = {no-op} + the exploits launchable from s,
 *   A1(s) = every subset of s's monitors within the budget ("no-mon" = {}).
 * Defender rewards: -cost(M) against no-op; IS(X) - cost(M) when exploit X
 * is covered by M; -IS(X) - cost(M) when it is not. Uncovered exploits
 * succeed with the catalog-derived probability and move play to the
 * exploit's successor state; otherwise the players stay put.
 */
inline BuildResult build_game(const AttackGraph& graph, const StatePartition& partition,
                              const VulnCatalog& catalog, const MonitorSpec& monitors,
                              const BuildOptions& opt) {
  if (!(opt.gamma >= 0.0 && opt.gamma < 1.0))
    throw ValidationError(strf("gamma %.6f outside [0,1)", opt.gamma));
  if (opt.terminal_reward < 0.0)
    throw ValidationError("terminal reward must be non-negative");
  if (opt.budget.max_monitors < 0)
    throw ValidationError("defender budget must be non-negative");
  opt.success_model.validate();
  {
    auto violations = validate_partition(graph, partition);
    if (!violations.empty()) {
      std::string msg = "invalid state partition:";
      for (const auto& v : violations) msg += strf("\n  [%s] %s", v.code.c_str(), v.detail.c_str());
      throw ValidationError(msg);
    }
  }

  BuildResult result;
  MarkovGame& game = result.game;
  game.gamma = opt.gamma;

  // The goal state should hold the goal node alone and be absorbing. Looser
  // shapes (e.g. the whole graph as one state) still build, with a note.
  if (const AGNode* goal = graph.goal_node()) {
    const PartitionState* gs = partition.state_of(goal->id);
    if (gs && !gs->terminal)
      result.warnings.push_back(strf("state '%s' holds the goal node but is not marked terminal; "
                                     "the game will have no absorbing goal state", gs->id.c_str()));
    for (const PartitionState& s : partition.states) {
      if (!s.terminal) continue;
      if (!std::binary_search(s.members.begin(), s.members.end(), goal->id))
        result.warnings.push_back(strf("terminal state '%s' does not hold the goal node", s.id.c_str()));
      else if (s.members.size() != 1)
        result.warnings.push_back(strf("terminal state '%s' holds nodes besides the goal; "
                                       "they are unreachable in the game", s.id.c_str()));
    }
  }

  // Exploits whose preconditions straddle states would be double counted;
  // reject them before any state is assembled.
  for (const AGNode& n : graph.nodes) {
    if (n.kind != NodeKind::Exploit) continue;
    const auto pre = graph.exploit_preconditions(n.id);
    if (pre.empty()) {
      result.warnings.push_back(
          strf("exploit '%s' has no precondition node and is unreachable; excluded", n.id.c_str()));
      continue;
    }
    std::set<std::string> owner_states;
    for (const std::string& c : pre)
      if (const PartitionState* s = partition.state_of(c)) owner_states.insert(s->id);
    if (owner_states.size() > 1) {
      std::string list;
      for (const auto& s : owner_states) list += (list.empty() ? "" : ", ") + s;
      throw ValidationError(strf("preconditions of exploit '%s' span states {%s}",
                                 n.id.c_str(), list.c_str()));
    }
  }

  const std::size_t ns = partition.states.size();
  const std::size_t budget = static_cast<std::size_t>(opt.budget.max_monitors);

  for (std::size_t si = 0; si < ns; ++si) {
    const PartitionState& ps = partition.states[si];
    StateGame st;
    st.id = ps.id;
    st.terminal = ps.terminal;

    if (ps.terminal) {
      st.defender_actions = {kTerminateAction};
      st.attacker_actions = {kTerminateAction};
      st.reward = {{-opt.terminal_reward}};
      st.transition = {{std::vector<double>(ns, 0.0)}};
      st.transition[0][0][si] = 1.0;
      st.detects = {{0}};
      game.states.push_back(std::move(st));
      continue;
    }

    struct ExploitAction {
      std::string name;
      std::string node_id;
      double impact;
      double success;
      std::size_t successor;
    };
    std::vector<ExploitAction> exploits;
    for (const ReachableExploit& re : reachable_exploits(graph, partition, ps.id)) {
      const AGNode* node = graph.find_node(re.exploit_id);
      const Vulnerability* vuln = catalog.find(node->cve);
      if (!vuln)
        throw ValidationError(strf("unresolved CVE '%s' for exploit '%s' in state '%s'",
                                   node->cve.c_str(), re.exploit_id.c_str(), ps.id.c_str()));
      std::size_t successor = ns;
      for (std::size_t i = 0; i < ns; ++i)
        if (partition.states[i].id == re.successor) { successor = i; break; }
      exploits.push_back({re.action_name, re.exploit_id, vuln->impact,
                          success_probability(opt.success_model, *vuln), successor});
    }
    st.attacker_actions.push_back(kNoOpAction);
    for (const ExploitAction& e : exploits) {
      if (e.name == kNoOpAction ||
          std::find(st.attacker_actions.begin(), st.attacker_actions.end(), e.name) !=
              st.attacker_actions.end())
        throw ValidationError(strf("duplicate attacker action name '%s' in state '%s'",
                                   e.name.c_str(), ps.id.c_str()));
      st.attacker_actions.push_back(e.name);
    }

    std::vector<MonitorDef> mons;
    if (const auto* defs = monitors.find(ps.id)) mons = *defs;
    std::sort(mons.begin(), mons.end(),
              [](const MonitorDef& a, const MonitorDef& b) { return a.name < b.name; });
    std::set<std::string> mon_names;
    for (const MonitorDef& m : mons) {
      if (m.name == kNoMonAction || m.name.empty() || !mon_names.insert(m.name).second)
        throw ValidationError(strf("invalid or duplicate monitor name '%s' in state '%s'",
                                   m.name.c_str(), ps.id.c_str()));
      if (m.cost < 0.0)
        throw ValidationError(strf("monitor '%s' in state '%s' has negative cost",
                                   m.name.c_str(), ps.id.c_str()));
      bool known = false;
      for (const ExploitAction& e : exploits)
        if (e.node_id == m.exploit) { known = true; break; }
      if (!known)
        throw ValidationError(strf("monitor '%s' in state '%s' references exploit '%s' "
                                   "not available in that state",
                                   m.name.c_str(), ps.id.c_str(), m.exploit.c_str()));
    }
    std::size_t per_state_budget = budget;
    if (per_state_budget > mons.size()) {
      if (budget > 0)
        result.warnings.push_back(strf("state '%s': budget %zu exceeds monitor count %zu; clamped",
                                       ps.id.c_str(), budget, mons.size()));
      per_state_budget = mons.size();
    }
    std::vector<std::vector<std::size_t>> subsets;
    detail::enumerate_subsets(mons.size(), per_state_budget, subsets);
    for (const auto& sub : subsets) {
      if (sub.empty()) {
        st.defender_actions.push_back(kNoMonAction);
        continue;
      }
      std::string name;
      for (std::size_t mi : sub) name += (name.empty() ? "" : "+") + mons[mi].name;
      st.defender_actions.push_back(std::move(name));
    }

    const std::size_t na1 = st.defender_actions.size();
    const std::size_t na2 = st.attacker_actions.size();
    st.reward.assign(na2, std::vector<double>(na1, 0.0));
    st.transition.assign(na2, std::vector<std::vector<double>>(na1, std::vector<double>(ns, 0.0)));
    st.detects.assign(na2, std::vector<std::uint8_t>(na1, 0));

    for (std::size_t a1 = 0; a1 < na1; ++a1) {
      const auto& sub = subsets[a1];
      double cost = 0.0;
      for (std::size_t mi : sub) cost += mons[mi].cost;
      st.reward[0][a1] = -cost;
      st.transition[0][a1][si] = 1.0;
      for (std::size_t x = 0; x < exploits.size(); ++x) {
        const ExploitAction& e = exploits[x];
        const std::size_t a2 = x + 1;
        bool detected = false;
        for (std::size_t mi : sub)
          if (mons[mi].exploit == e.node_id) { detected = true; break; }
        st.detects[a2][a1] = detected ? 1 : 0;
        st.reward[a2][a1] = detected ? e.impact - cost : -e.impact - cost;
        if (detected && opt.detection == DetectionEffect::Thwart) {
          st.transition[a2][a1][si] = 1.0;
        } else {
          st.transition[a2][a1][e.successor] += e.success;
          st.transition[a2][a1][si] += 1.0 - e.success;
        }
      }
    }
    game.states.push_back(std::move(st));
  }
  return result;
}

/// Loads a hand-written game document verbatim and verifies every invariant.
inline MarkovGame load_game(const std::string& text) {
  using jsonio::Json;
  const Json doc = jsonio::parse(text, "game");
  MarkovGame game;
  game.gamma = jsonio::get_number(doc, "gamma", "game");
  const Json& states = jsonio::field(doc, "states", "game");
  if (!states.is_array() || states.empty())
    throw ParseError("'states' must be a non-empty array");

  std::vector<std::string> order;
  for (std::size_t i = 0; i < states.size(); ++i)
    order.push_back(jsonio::get_string(states.at(i), "id", strf("states[%zu]", i)));

  auto state_index = [&order](const std::string& id) -> std::size_t {
    for (std::size_t i = 0; i < order.size(); ++i)
      if (order[i] == id) return i;
    return order.size();
  };

  for (std::size_t i = 0; i < states.size(); ++i) {
    const Json& js = states.at(i);
    const std::string where = strf("states[%zu]", i);
    StateGame st;
    st.id = order[i];
    st.terminal = jsonio::get_bool_or(js, "terminal", false);

    for (const char* key : {"defender_actions", "attacker_actions"}) {
      const Json& arr = jsonio::field(js, key, where);
      if (!arr.is_array() || arr.empty())
        throw ParseError(strf("%s: '%s' must be a non-empty array", where.c_str(), key));
      auto& dst = key[0] == 'd' ? st.defender_actions : st.attacker_actions;
      for (const Json& a : arr) {
        if (!a.is_string()) throw ParseError(strf("%s: '%s' entries must be strings", where.c_str(), key));
        dst.push_back(a.get<std::string>());
      }
    }
    const std::size_t na1 = st.defender_count(), na2 = st.attacker_count();

    const Json& rewards = jsonio::field(js, "rewards", where);
    if (!rewards.is_array() || rewards.size() != na2)
      throw ParseError(strf("%s: 'rewards' must have one row per attacker action", where.c_str()));
    for (const Json& row : rewards) {
      if (!row.is_array() || row.size() != na1)
        throw ParseError(strf("%s: ragged reward matrix (expected %zu columns)", where.c_str(), na1));
      std::vector<double> r;
      for (const Json& v : row) {
        if (!v.is_number()) throw ParseError(strf("%s: reward entries must be numbers", where.c_str()));
        r.push_back(v.get<double>());
      }
      st.reward.push_back(std::move(r));
    }

    const Json& transitions = jsonio::field(js, "transitions", where);
    st.transition.assign(na2, std::vector<std::vector<double>>(na1, std::vector<double>(order.size(), 0.0)));
    for (std::size_t a2 = 0; a2 < na2; ++a2) {
      const Json& row2 = jsonio::field(transitions, st.attacker_actions[a2].c_str(),
                                       strf("%s.transitions", where.c_str()));
      for (std::size_t a1 = 0; a1 < na1; ++a1) {
        const Json& cell = jsonio::field(row2, st.defender_actions[a1].c_str(),
                                         strf("%s.transitions[%s]", where.c_str(),
                                              st.attacker_actions[a2].c_str()));
        if (!cell.is_object())
          throw ParseError(strf("%s: transition cell must map states to probabilities", where.c_str()));
        for (auto it = cell.begin(); it != cell.end(); ++it) {
          const std::size_t target = state_index(it.key());
          if (target == order.size())
            throw ParseError(strf("%s: transition references unknown state '%s'",
                                  where.c_str(), it.key().c_str()));
          if (!it.value().is_number())
            throw ParseError(strf("%s: transition probabilities must be numbers", where.c_str()));
          st.transition[a2][a1][target] = it.value().get<double>();
        }
      }
    }

    if (js.contains("detections")) {
      const Json& det = js.at("detections");
      if (!det.is_object()) throw ParseError(strf("%s: 'detections' must be an object", where.c_str()));
      st.detects.assign(na2, std::vector<std::uint8_t>(na1, 0));
      for (auto it = det.begin(); it != det.end(); ++it) {
        const std::size_t a2 = st.attacker_index(it.key());
        if (!it.value().is_array())
          throw ParseError(strf("%s: detection entries must be arrays", where.c_str()));
        for (const Json& a : it.value())
          st.detects[a2][st.defender_index(a.get<std::string>())] = 1;
      }
    } else {
      st.detects.assign(na2, std::vector<std::uint8_t>(na1, 0));
    }
    game.states.push_back(std::move(st));
  }

  auto violations = validate_game(game);
  if (!violations.empty()) {
    std::string msg = "invalid game document:";
    for (const auto& v : violations) msg += strf("\n  [%s] %s", v.code.c_str(), v.detail.c_str());
    throw ValidationError(msg);
  }
  return game;
}

inline std::string save_game(const MarkovGame& game) {
  using jsonio::OJson;
  OJson j;
  j["gamma"] = game.gamma;
  j["states"] = OJson::array();
  for (const StateGame& s : game.states) {
    OJson js;
    js["id"] = s.id;
    js["terminal"] = s.terminal;
    js["defender_actions"] = s.defender_actions;
    js["attacker_actions"] = s.attacker_actions;
    js["rewards"] = s.reward;
    OJson trans;
    for (std::size_t a2 = 0; a2 < s.attacker_count(); ++a2) {
      OJson row;
      for (std::size_t a1 = 0; a1 < s.defender_count(); ++a1) {
        OJson cell;
        for (std::size_t k = 0; k < s.transition[a2][a1].size(); ++k)
          if (s.transition[a2][a1][k] != 0.0)
            cell[game.states[k].id] = s.transition[a2][a1][k];
        row[s.defender_actions[a1]] = std::move(cell);
      }
      trans[s.attacker_actions[a2]] = std::move(row);
    }
    js["transitions"] = std::move(trans);
    bool any_detection = false;
    for (const auto& row : s.detects)
      for (std::uint8_t d : row) any_detection |= (d != 0);
    if (any_detection) {
      OJson det;
      for (std::size_t a2 = 0; a2 < s.attacker_count(); ++a2) {
        OJson list = OJson::array();
        for (std::size_t a1 = 0; a1 < s.defender_count(); ++a1)
          if (s.detects[a2][a1]) list.push_back(s.defender_actions[a1]);
        if (!list.empty()) det[s.attacker_actions[a2]] = std::move(list);
      }
      js["detections"] = std::move(det);
    }
    j["states"].push_back(std::move(js));
  }
  return j.dump(2) + "\n";
}

}  // namespace mtdgame
