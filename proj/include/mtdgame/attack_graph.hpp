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
#include <map>
#include <set>
#include <string>
#include <vector>

#include "mtdgame/common.hpp"
#include "mtdgame/json_io.hpp"

namespace mtdgame {

// Attack-graph node taxonomy. Fact, privilege and goal nodes are the "grey"
// nodes that state partitions range over; exploit nodes act as transitions
// between states and are never partition members.
enum class NodeKind { Fact, Exploit, Privilege, Goal };

enum class EdgeKind { Pre, Post };

inline const char* to_string(NodeKind k) {
  switch (k) {
    case NodeKind::Fact: return "fact";
    case NodeKind::Exploit: return "exploit";
    case NodeKind::Privilege: return "privilege";
    case NodeKind::Goal: return "goal";
  }
  return "?";
}

inline const char* to_string(EdgeKind k) {
  return k == EdgeKind::Pre ? "pre" : "post";
}

struct AGNode {
  std::string id;
  NodeKind kind = NodeKind::Fact;
  std::string label;
  std::string cve;  // set on exploit nodes only

  bool grey() const { return kind != NodeKind::Exploit; }
  bool operator==(const AGNode&) const = default;
};

struct AGEdge {
  std::string from;
  std::string to;
  EdgeKind kind = EdgeKind::Pre;

  bool operator==(const AGEdge&) const = default;
  auto operator<=>(const AGEdge&) const = default;
};

/**
 * Directed attack graph with typed nodes and pre/post edges.
 *
 * Edge direction follows the privilege-centric convention: a `pre` edge runs
 * from a fact or exploit node into the privilege (or goal) it helps achieve,
 * and a `post` edge runs from an achieved privilege into the fact or exploit
 * it enables. So, seen from an exploit node, incoming `post` edges carry its
 * preconditions and outgoing `pre` edges carry its postconditions.
 *
 * Nodes and edges are kept sorted by id so every structure derived from a
 * graph is deterministic.
 */
struct AttackGraph {
  std::vector<AGNode> nodes;  // sorted by id
  std::vector<AGEdge> edges;  // sorted by (from, to, kind)
  std::string entry;

  const AGNode* find_node(const std::string& id) const {
    auto it = std::lower_bound(nodes.begin(), nodes.end(), id,
                               [](const AGNode& n, const std::string& key) { return n.id < key; });
    if (it == nodes.end() || it->id != id) return nullptr;
    return &*it;
  }

  const AGNode* goal_node() const {
    for (const AGNode& n : nodes)
      if (n.kind == NodeKind::Goal) return &n;
    return nullptr;
  }

  /// Privilege/goal nodes enabling this exploit (sources of its `post` edges).
  std::vector<std::string> exploit_preconditions(const std::string& exploit_id) const {
    std::vector<std::string> out;
    for (const AGEdge& e : edges)
      if (e.kind == EdgeKind::Post && e.to == exploit_id) out.push_back(e.from);
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Privilege/goal nodes this exploit achieves (targets of its `pre` edges).
  std::vector<std::string> exploit_postconditions(const std::string& exploit_id) const {
    std::vector<std::string> out;
    for (const AGEdge& e : edges)
      if (e.kind == EdgeKind::Pre && e.from == exploit_id) out.push_back(e.to);
    std::sort(out.begin(), out.end());
    return out;
  }

  bool operator==(const AttackGraph&) const = default;
};

struct PartitionState {
  std::string id;
  std::vector<std::string> members;  // sorted, unique
  bool terminal = false;

  bool operator==(const PartitionState&) const = default;
};

/// User-supplied abstraction of the grey nodes into Markov-game states.
struct StatePartition {
  std::vector<PartitionState> states;  // document order; becomes the game's state order

  const PartitionState* find_state(const std::string& id) const {
    for (const PartitionState& s : states)
      if (s.id == id) return &s;
    return nullptr;
  }

  /// First state whose member set contains the node, or nullptr.
  const PartitionState* state_of(const std::string& node_id) const {
    for (const PartitionState& s : states)
      if (std::binary_search(s.members.begin(), s.members.end(), node_id)) return &s;
    return nullptr;
  }

  bool operator==(const StatePartition&) const = default;
};

struct AttackGraphDocument {
  AttackGraph graph;
  StatePartition partition;

  bool operator==(const AttackGraphDocument&) const = default;
};

struct PartitionViolation {
  std::string code;  // disjointness | coverage | non-grey-member | unknown-node
  std::string detail;
};

/**
 * Checks a partition against the two abstraction rules: every grey node in
 * exactly one state (disjointness) and every grey node in at least one state
 * (coverage). Violations are returned, not thrown, so invalid partitions can
 * be inspected. Treating the whole graph as a single state is a valid
 * abstraction; goal-state shape is the game builder's concern.
 */
inline std::vector<PartitionViolation> validate_partition(const AttackGraph& g,
                                                          const StatePartition& p) {
  std::vector<PartitionViolation> out;
  std::map<std::string, std::vector<std::string>> owners;  // node -> states containing it
  for (const PartitionState& s : p.states) {
    for (const std::string& m : s.members) {
      const AGNode* n = g.find_node(m);
      if (!n) {
        out.push_back({"unknown-node", strf("state '%s' references unknown node '%s'",
                                            s.id.c_str(), m.c_str())});
        continue;
      }
      if (!n->grey()) {
        out.push_back({"non-grey-member", strf("state '%s' contains exploit node '%s'",
                                               s.id.c_str(), m.c_str())});
        continue;
      }
      owners[m].push_back(s.id);
    }
  }
  for (const auto& [node, states] : owners) {
    if (states.size() > 1) {
      std::string list;
      for (const auto& s : states) list += (list.empty() ? "" : ", ") + s;
      out.push_back({"disjointness", strf("node '%s' belongs to states {%s}",
                                          node.c_str(), list.c_str())});
    }
  }
  for (const AGNode& n : g.nodes) {
    if (n.grey() && owners.find(n.id) == owners.end())
      out.push_back({"coverage", strf("grey node '%s' belongs to no state", n.id.c_str())});
  }
  return out;
}

namespace detail {

/// Monotone closure of achievable privileges: an exploit fires once all of
/// its precondition privileges are achieved, granting its postconditions.
inline std::set<std::string> achievable_privileges(const AttackGraph& g) {
  std::set<std::string> achieved{g.entry};
  bool changed = true;
  while (changed) {
    changed = false;
    for (const AGNode& n : g.nodes) {
      if (n.kind != NodeKind::Exploit) continue;
      auto pre = g.exploit_preconditions(n.id);
      if (pre.empty()) continue;
      bool ready = true;
      for (const std::string& c : pre)
        if (!achieved.count(c)) { ready = false; break; }
      if (!ready) continue;
      for (const std::string& w : g.exploit_postconditions(n.id))
        if (achieved.insert(w).second) changed = true;
    }
  }
  return achieved;
}

inline void validate_attack_graph(const AttackGraph& g) {
  std::set<std::string> ids;
  for (const AGNode& n : g.nodes) {
    if (n.id.empty()) throw ParseError("node with empty id");
    if (!ids.insert(n.id).second)
      throw ParseError(strf("duplicate node id '%s'", n.id.c_str()));
    if (n.kind == NodeKind::Exploit && n.cve.empty())
      throw ValidationError(strf("exploit node '%s' has no CVE reference", n.id.c_str()));
  }
  std::set<AGEdge> seen;
  for (const AGEdge& e : g.edges) {
    const AGNode* from = g.find_node(e.from);
    const AGNode* to = g.find_node(e.to);
    if (!from)
      throw ParseError(strf("dangling edge endpoint '%s' in edge %s -> %s",
                            e.from.c_str(), e.from.c_str(), e.to.c_str()));
    if (!to)
      throw ParseError(strf("dangling edge endpoint '%s' in edge %s -> %s",
                            e.to.c_str(), e.from.c_str(), e.to.c_str()));
    if (!seen.insert(e).second)
      throw ParseError(strf("duplicate edge %s -> %s", e.from.c_str(), e.to.c_str()));
    const bool ok =
        e.kind == EdgeKind::Pre
            ? (from->kind == NodeKind::Fact || from->kind == NodeKind::Exploit) &&
                  (to->kind == NodeKind::Privilege || to->kind == NodeKind::Goal)
            : (from->kind == NodeKind::Privilege || from->kind == NodeKind::Goal) &&
                  (to->kind == NodeKind::Fact || to->kind == NodeKind::Exploit);
    if (!ok)
      throw ValidationError(strf("edge kind violates bipartite structure: %s edge %s (%s) -> %s (%s)",
                                 to_string(e.kind), e.from.c_str(), to_string(from->kind),
                                 e.to.c_str(), to_string(to->kind)));
  }
  std::size_t goals = 0;
  for (const AGNode& n : g.nodes)
    if (n.kind == NodeKind::Goal) ++goals;
  if (goals != 1)
    throw ValidationError(strf("expected exactly one goal node, found %zu", goals));
  const AGNode* entry = g.find_node(g.entry);
  if (!entry)
    throw ParseError(strf("entry node '%s' does not exist", g.entry.c_str()));
  if (entry->kind != NodeKind::Privilege && entry->kind != NodeKind::Goal)
    throw ValidationError(strf("entry node '%s' must be a privilege node", g.entry.c_str()));
  const AGNode* goal = g.goal_node();
  if (!achievable_privileges(g).count(goal->id))
    throw ValidationError(strf("goal node '%s' is not reachable from entry '%s'",
                               goal->id.c_str(), g.entry.c_str()));
}

inline NodeKind parse_node_kind(const std::string& s, const std::string& where) {
  if (s == "fact") return NodeKind::Fact;
  if (s == "exploit") return NodeKind::Exploit;
  if (s == "privilege") return NodeKind::Privilege;
  if (s == "goal") return NodeKind::Goal;
  throw ParseError(strf("%s: unknown node kind '%s'", where.c_str(), s.c_str()));
}

inline EdgeKind parse_edge_kind(const std::string& s, const std::string& where) {
  if (s == "pre") return EdgeKind::Pre;
  if (s == "post") return EdgeKind::Post;
  throw ParseError(strf("%s: unknown edge kind '%s'", where.c_str(), s.c_str()));
}

}  // namespace detail

/**
 * Parses and validates a whole attack-graph document (nodes, edges, entry,
 * partition). Throws ParseError / ValidationError on the first defect; the
 * returned document always satisfies every graph invariant and carries a
 * violation-free partition.
 */
inline AttackGraphDocument parse_attack_graph_document(const std::string& text) {
  using jsonio::Json;
  const Json doc = jsonio::parse(text, "attack-graph");
  if (!doc.is_object()) throw ParseError("attack-graph document must be a JSON object");

  AttackGraphDocument out;
  const Json& nodes = jsonio::field(doc, "nodes", "attack-graph");
  if (!nodes.is_array()) throw ParseError("'nodes' must be an array");
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    const Json& jn = nodes.at(i);
    const std::string where = strf("nodes[%zu]", i);
    AGNode n;
    n.id = jsonio::get_string(jn, "id", where);
    n.kind = detail::parse_node_kind(jsonio::get_string(jn, "kind", where), where);
    n.label = jsonio::get_string_or(jn, "label", "");
    n.cve = jsonio::get_string_or(jn, "cve", "");
    out.graph.nodes.push_back(std::move(n));
  }
  std::sort(out.graph.nodes.begin(), out.graph.nodes.end(),
            [](const AGNode& a, const AGNode& b) { return a.id < b.id; });

  const Json& edges = jsonio::field(doc, "edges", "attack-graph");
  if (!edges.is_array()) throw ParseError("'edges' must be an array");
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const Json& je = edges.at(i);
    const std::string where = strf("edges[%zu]", i);
    AGEdge e;
    e.from = jsonio::get_string(je, "from", where);
    e.to = jsonio::get_string(je, "to", where);
    e.kind = detail::parse_edge_kind(jsonio::get_string(je, "kind", where), where);
    out.graph.edges.push_back(std::move(e));
  }
  std::sort(out.graph.edges.begin(), out.graph.edges.end());

  out.graph.entry = jsonio::get_string(doc, "entry", "attack-graph");
  detail::validate_attack_graph(out.graph);

  const Json& partition = jsonio::field(doc, "partition", "attack-graph");
  if (!partition.is_array()) throw ParseError("'partition' must be an array");
  std::set<std::string> state_ids;
  for (std::size_t i = 0; i < partition.size(); ++i) {
    const Json& js = partition.at(i);
    const std::string where = strf("partition[%zu]", i);
    PartitionState s;
    s.id = jsonio::get_string(js, "state", where);
    if (s.id.empty() || !state_ids.insert(s.id).second)
      throw ParseError(strf("%s: empty or duplicate state id '%s'", where.c_str(), s.id.c_str()));
    s.terminal = jsonio::get_bool_or(js, "terminal", false);
    const Json& members = jsonio::field(js, "members", where);
    if (!members.is_array()) throw ParseError(strf("%s: 'members' must be an array", where.c_str()));
    for (const Json& m : members) {
      if (!m.is_string()) throw ParseError(strf("%s: members must be strings", where.c_str()));
      const std::string id = m.get<std::string>();
      if (!out.graph.find_node(id))
        throw ParseError(strf("%s: references unknown node '%s'", where.c_str(), id.c_str()));
      s.members.push_back(id);
    }
    std::sort(s.members.begin(), s.members.end());
    s.members.erase(std::unique(s.members.begin(), s.members.end()), s.members.end());
    out.partition.states.push_back(std::move(s));
  }
  if (out.partition.states.empty()) throw ParseError("'partition' must list at least one state");

  auto violations = validate_partition(out.graph, out.partition);
  if (!violations.empty()) {
    std::string msg = "invalid state partition:";
    for (const auto& v : violations) msg += strf("\n  [%s] %s", v.code.c_str(), v.detail.c_str());
    throw ValidationError(msg);
  }
  return out;
}

/// Graph part of a document (same validation as the full loader).
inline AttackGraph parse_attack_graph(const std::string& text) {
  return parse_attack_graph_document(text).graph;
}

inline std::string serialize_attack_graph_document(const AttackGraphDocument& doc) {
  using jsonio::OJson;
  OJson j;
  j["entry"] = doc.graph.entry;
  j["nodes"] = OJson::array();
  for (const AGNode& n : doc.graph.nodes) {
    OJson jn;
    jn["id"] = n.id;
    jn["kind"] = to_string(n.kind);
    if (!n.label.empty()) jn["label"] = n.label;
    if (!n.cve.empty()) jn["cve"] = n.cve;
    j["nodes"].push_back(std::move(jn));
  }
  j["edges"] = OJson::array();
  for (const AGEdge& e : doc.graph.edges)
    j["edges"].push_back(OJson{{"from", e.from}, {"to", e.to}, {"kind", to_string(e.kind)}});
  j["partition"] = OJson::array();
  for (const PartitionState& s : doc.partition.states) {
    OJson js;
    js["state"] = s.id;
    js["members"] = s.members;
    if (s.terminal) js["terminal"] = true;
    j["partition"].push_back(std::move(js));
  }
  return j.dump(2) + "\n";
}

struct ReachableExploit {
  std::string exploit_id;
  std::string action_name;  // node label when present, node id otherwise
  std::string successor;    // state holding the exploit's postcondition nodes

  bool operator==(const ReachableExploit&) const = default;
};

/**
 * Exploits launchable from a state: every precondition privilege of the
 * exploit lies in the state's member set. Each entry carries the successor
 * state containing the exploit's postcondition privilege. Deterministic,
 * ordered by exploit node id.
 *
 * Exploits whose preconditions straddle several states are launchable from
 * none of them; build_game rejects such graphs with a diagnostic.
 */
inline std::vector<ReachableExploit> reachable_exploits(const AttackGraph& g,
                                                        const StatePartition& p,
                                                        const std::string& state_id) {
  const PartitionState* s = p.find_state(state_id);
  if (!s) throw ValidationError(strf("unknown state '%s'", state_id.c_str()));
  std::vector<ReachableExploit> out;
  for (const AGNode& n : g.nodes) {
    if (n.kind != NodeKind::Exploit) continue;
    const auto pre = g.exploit_preconditions(n.id);
    if (pre.empty()) continue;
    bool all_here = true;
    for (const std::string& c : pre)
      if (!std::binary_search(s->members.begin(), s->members.end(), c)) { all_here = false; break; }
    if (!all_here) continue;

    const auto post = g.exploit_postconditions(n.id);
    if (post.empty())
      throw ValidationError(strf("exploit '%s' reachable from state '%s' has no postcondition node",
                                 n.id.c_str(), state_id.c_str()));
    std::string successor;
    for (const std::string& w : post) {
      const PartitionState* ws = p.state_of(w);
      if (!ws)
        throw ValidationError(strf("postcondition node '%s' of exploit '%s' is not assigned to any state",
                                   w.c_str(), n.id.c_str()));
      if (successor.empty()) {
        successor = ws->id;
      } else if (successor != ws->id) {
        throw ValidationError(strf("postconditions of exploit '%s' span states '%s' and '%s'",
                                   n.id.c_str(), successor.c_str(), ws->id.c_str()));
      }
    }
    out.push_back({n.id, n.label.empty() ? n.id : n.label, successor});
  }
  return out;  // nodes are sorted by id, so this is too
}

}  // namespace mtdgame
