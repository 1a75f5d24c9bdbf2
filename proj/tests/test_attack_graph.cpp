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

#include <algorithm>
#include <random>
#include <set>

#include "mtdgame/attack_graph.hpp"
#include "test_helpers.hpp"

using namespace mtdgame;
using mtdtest::data_path;

namespace {

AttackGraphDocument load_cloud() {
  return parse_attack_graph_document(read_file(data_path("cloud_graph.json")));
}

std::string minimal_doc(const std::string& nodes, const std::string& edges,
                        const std::string& partition, const std::string& entry) {
  return "{\"nodes\":[" + nodes + "],\"edges\":[" + edges + "],\"partition\":[" + partition +
         "],\"entry\":\"" + entry + "\"}";
}

}  // namespace

TEST_CASE("cloud scenario document parses with the expected structure") {
  const AttackGraphDocument doc = load_cloud();
  CHECK(doc.graph.nodes.size() == 11);
  CHECK(doc.graph.entry == "p-ldap-user");

  std::size_t exploits = 0, goals = 0;
  std::set<std::string> cves;
  for (const AGNode& n : doc.graph.nodes) {
    if (n.kind == NodeKind::Exploit) {
      ++exploits;
      cves.insert(n.cve);
    }
    if (n.kind == NodeKind::Goal) ++goals;
  }
  // The FTP exploit appears once per launch context, so four exploit nodes
  // cover the three CVEs (LDAP, Web, FTP).
  CHECK(exploits == 4);
  CHECK(cves == std::set<std::string>{"CVE-2016-5195", "CVE-2017-5095", "CVE-2015-3306"});
  CHECK(goals == 1);
  CHECK(doc.graph.goal_node()->id == "p-ftp-root");
  CHECK(doc.partition.states.size() == 4);
  CHECK(doc.partition.states[3].terminal);
}

TEST_CASE("degenerate graph: a single goal node is valid") {
  const std::string text = minimal_doc(
      R"({"id":"p-root","kind":"goal","label":"root"})", "",
      R"({"state":"s0","members":["p-root"],"terminal":true})", "p-root");
  const AttackGraphDocument doc = parse_attack_graph_document(text);
  CHECK(doc.graph.nodes.size() == 1);
  CHECK(doc.graph.goal_node()->id == "p-root");
  CHECK(validate_partition(doc.graph, doc.partition).empty());
}

TEST_CASE("bipartite structure is enforced on edge kinds") {
  // pre edge from a privilege into a fact
  const std::string text = minimal_doc(
      R"({"id":"p","kind":"goal"},{"id":"f","kind":"fact"})",
      R"({"from":"p","to":"f","kind":"pre"})",
      R"({"state":"s0","members":["p","f"],"terminal":true})", "p");
  CHECK_THROWS_WITH(parse_attack_graph_document(text),
                    Catch::Matchers::ContainsSubstring("edge kind violates bipartite structure"));
}

TEST_CASE("parse errors carry locations") {
  SECTION("dangling edge endpoint") {
    const std::string text = minimal_doc(
        R"({"id":"p","kind":"goal"})",
        R"({"from":"p","to":"ghost","kind":"post"})",
        R"({"state":"s0","members":["p"],"terminal":true})", "p");
    CHECK_THROWS_WITH(parse_attack_graph_document(text),
                      Catch::Matchers::ContainsSubstring("dangling edge endpoint 'ghost'"));
  }
  SECTION("zero goal nodes") {
    const std::string text = minimal_doc(
        R"({"id":"p","kind":"privilege"})", "",
        R"({"state":"s0","members":["p"]})", "p");
    CHECK_THROWS_WITH(parse_attack_graph_document(text),
                      Catch::Matchers::ContainsSubstring("exactly one goal node"));
  }
  SECTION("two goal nodes") {
    const std::string text = minimal_doc(
        R"({"id":"g1","kind":"goal"},{"id":"g2","kind":"goal"})", "",
        R"({"state":"s0","members":["g1","g2"],"terminal":true})", "g1");
    CHECK_THROWS_WITH(parse_attack_graph_document(text),
                      Catch::Matchers::ContainsSubstring("exactly one goal node"));
  }
  SECTION("exploit node without a CVE reference") {
    const std::string text = minimal_doc(
        R"({"id":"g","kind":"goal"},{"id":"e","kind":"exploit"})",
        R"({"from":"g","to":"e","kind":"post"})",
        R"({"state":"s0","members":["g"],"terminal":true})", "g");
    CHECK_THROWS_WITH(parse_attack_graph_document(text),
                      Catch::Matchers::ContainsSubstring("no CVE reference"));
  }
  SECTION("duplicate node id") {
    const std::string text = minimal_doc(
        R"({"id":"g","kind":"goal"},{"id":"g","kind":"fact"})", "",
        R"({"state":"s0","members":["g"],"terminal":true})", "g");
    CHECK_THROWS_AS(parse_attack_graph_document(text), ParseError);
  }
  SECTION("partition member referencing an unknown node") {
    const std::string text = minimal_doc(
        R"({"id":"g","kind":"goal"})", "",
        R"({"state":"s0","members":["g","ghost"],"terminal":true})", "g");
    CHECK_THROWS_WITH(parse_attack_graph_document(text),
                      Catch::Matchers::ContainsSubstring("unknown node 'ghost'"));
  }
  SECTION("entry must be a privilege or goal node") {
    const std::string text = minimal_doc(
        R"({"id":"g","kind":"goal"},{"id":"f","kind":"fact"})",
        R"({"from":"f","to":"g","kind":"pre"})",
        R"({"state":"s0","members":["g","f"],"terminal":true})", "f");
    CHECK_THROWS_WITH(parse_attack_graph_document(text),
                      Catch::Matchers::ContainsSubstring("must be a privilege node"));
  }
  SECTION("goal must be reachable from the entry node") {
    const std::string text = minimal_doc(
        R"({"id":"p","kind":"privilege"},{"id":"g","kind":"goal"})", "",
        R"({"state":"s0","members":["p"]},{"state":"s1","members":["g"],"terminal":true})", "p");
    CHECK_THROWS_WITH(parse_attack_graph_document(text),
                      Catch::Matchers::ContainsSubstring("not reachable from entry"));
  }
  SECTION("malformed JSON") {
    CHECK_THROWS_AS(parse_attack_graph_document("{nodes: oops"), ParseError);
  }
}

TEST_CASE("validate_partition reports violations without throwing") {
  const AttackGraphDocument doc = load_cloud();

  SECTION("the loaded partition is clean") {
    CHECK(validate_partition(doc.graph, doc.partition).empty());
  }
  SECTION("one privilege node in two states is a disjointness violation") {
    StatePartition p = doc.partition;
    p.states[0].members.push_back("p-web-access");  // also in s1
    std::sort(p.states[0].members.begin(), p.states[0].members.end());
    const auto report = validate_partition(doc.graph, p);
    REQUIRE(report.size() == 1);
    CHECK(report[0].code == "disjointness");
    CHECK(report[0].detail.find("p-web-access") != std::string::npos);
  }
  SECTION("a dropped grey node is a coverage violation") {
    StatePartition p = doc.partition;
    std::erase(p.states[1].members, "p-ftp-access");
    const auto report = validate_partition(doc.graph, p);
    REQUIRE(report.size() == 1);
    CHECK(report[0].code == "coverage");
  }
  SECTION("an exploit listed as a member is flagged") {
    StatePartition p = doc.partition;
    p.states[1].members.push_back("e-web");
    std::sort(p.states[1].members.begin(), p.states[1].members.end());
    const auto report = validate_partition(doc.graph, p);
    REQUIRE(report.size() == 1);
    CHECK(report[0].code == "non-grey-member");
  }
  SECTION("the whole graph as one state is a valid abstraction") {
    StatePartition p;
    PartitionState all;
    all.id = "s-all";
    for (const AGNode& n : doc.graph.nodes)
      if (n.grey()) all.members.push_back(n.id);
    std::sort(all.members.begin(), all.members.end());
    p.states.push_back(all);
    CHECK(validate_partition(doc.graph, p).empty());
  }
}

TEST_CASE("reachable_exploits follows the attack paths") {
  const AttackGraphDocument doc = load_cloud();
  const auto s0 = reachable_exploits(doc.graph, doc.partition, "s0");
  REQUIRE(s0.size() == 1);
  CHECK(s0[0].exploit_id == "e-ldap");
  CHECK(s0[0].action_name == "exp-LDAP");
  CHECK(s0[0].successor == "s1");

  const auto s1 = reachable_exploits(doc.graph, doc.partition, "s1");
  REQUIRE(s1.size() == 2);  // ordered by node id
  CHECK(s1[0].exploit_id == "e-ftp-user");
  CHECK(s1[0].successor == "s3");
  CHECK(s1[1].exploit_id == "e-web");
  CHECK(s1[1].successor == "s2");

  const auto s2 = reachable_exploits(doc.graph, doc.partition, "s2");
  REQUIRE(s2.size() == 1);
  CHECK(s2[0].exploit_id == "e-ftp-root");
  CHECK(s2[0].successor == "s3");

  CHECK(reachable_exploits(doc.graph, doc.partition, "s3").empty());
  CHECK_THROWS_AS(reachable_exploits(doc.graph, doc.partition, "nope"), ValidationError);
}

TEST_CASE("serialize / reparse round-trips the document") {
  const AttackGraphDocument doc = load_cloud();
  const std::string text = serialize_attack_graph_document(doc);
  const AttackGraphDocument again = parse_attack_graph_document(text);
  CHECK(again == doc);
  CHECK(serialize_attack_graph_document(again) == text);
}

TEST_CASE("reachable_exploits agrees with brute-force enumeration") {
  // Random layered graphs, small enough for the naive oracle.
  std::mt19937_64 rng(20260810);
  for (int trial = 0; trial < 40; ++trial) {
    AttackGraph g;
    StatePartition p;
    const int layers = 3 + static_cast<int>(rng() % 2);
    std::vector<std::vector<std::string>> privs(layers);
    for (int l = 0; l < layers; ++l) {
      PartitionState ps;
      ps.id = strf("s%d", l);
      const int count = (l == layers - 1) ? 1 : 1 + static_cast<int>(rng() % 2);
      for (int k = 0; k < count; ++k) {
        AGNode n;
        n.id = strf("p%d-%d", l, k);
        n.kind = (l == layers - 1) ? NodeKind::Goal : NodeKind::Privilege;
        privs[l].push_back(n.id);
        ps.members.push_back(n.id);
        g.nodes.push_back(n);
      }
      std::sort(ps.members.begin(), ps.members.end());
      ps.terminal = (l == layers - 1);
      p.states.push_back(ps);
    }
    int next_exploit = 0;
    for (int l = 0; l + 1 < layers; ++l) {
      const int count = 1 + static_cast<int>(rng() % 3);
      for (int k = 0; k < count; ++k) {
        AGNode e;
        e.id = strf("e%d", next_exploit++);
        e.kind = NodeKind::Exploit;
        e.cve = "CVE-0000-0000";
        g.nodes.push_back(e);
        // preconditions: subset of this layer's privileges (at least one)
        bool any = false;
        for (const auto& pr : privs[l]) {
          if (rng() % 2 == 0 || (!any && &pr == &privs[l].back())) {
            g.edges.push_back({pr, e.id, EdgeKind::Post});
            any = true;
          }
        }
        g.edges.push_back({e.id, privs[l + 1][rng() % privs[l + 1].size()], EdgeKind::Pre});
      }
    }
    g.entry = privs[0][0];
    std::sort(g.nodes.begin(), g.nodes.end(),
              [](const AGNode& a, const AGNode& b) { return a.id < b.id; });
    std::sort(g.edges.begin(), g.edges.end());
    REQUIRE(validate_partition(g, p).empty());

    std::vector<mtdtest::OracleExploit> oracle = mtdtest::enumerate_launchable(g, p);
    std::vector<mtdtest::OracleExploit> actual;
    for (const auto& ps : p.states)
      for (const auto& re : reachable_exploits(g, p, ps.id))
        actual.push_back({re.exploit_id, ps.id, re.successor});

    auto key = [](const mtdtest::OracleExploit& o) {
      return o.exploit_id + "|" + o.source_state + "|" + o.successor_state;
    };
    std::set<std::string> lhs, rhs;
    for (const auto& o : oracle) lhs.insert(key(o));
    for (const auto& o : actual) rhs.insert(key(o));
    CHECK(lhs == rhs);

    // No exploit may appear with two source states (preconditions are
    // confined to one state by construction here).
    std::set<std::string> seen;
    for (const auto& o : actual) CHECK(seen.insert(o.exploit_id).second);

    // Every exploit satisfiable from the entry must be covered.
    for (const auto& id : mtdtest::satisfiable_exploits(g)) {
      CHECK(std::any_of(actual.begin(), actual.end(),
                        [&](const mtdtest::OracleExploit& o) { return o.exploit_id == id; }));
    }
  }
}
