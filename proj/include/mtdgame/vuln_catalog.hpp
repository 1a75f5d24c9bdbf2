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

#include <map>
#include <string>

#include "mtdgame/common.hpp"
#include "mtdgame/json_io.hpp"

namespace mtdgame {

enum class AccessComplexity { Easy, Medium, High };

inline const char* to_string(AccessComplexity ac) {
  switch (ac) {
    case AccessComplexity::Easy: return "EASY";
    case AccessComplexity::Medium: return "MEDIUM";
    case AccessComplexity::High: return "HIGH";
  }
  return "?";
}

inline AccessComplexity parse_access_complexity(const std::string& s, const std::string& where) {
  if (s == "EASY") return AccessComplexity::Easy;
  if (s == "MEDIUM") return AccessComplexity::Medium;
  if (s == "HIGH") return AccessComplexity::High;
  throw ParseError(strf("%s: unknown access-complexity literal '%s'", where.c_str(), s.c_str()));
}

/// One CVE entry: CIA impact score in [0,10] plus categorical access complexity.
struct Vulnerability {
  std::string cve_id;
  double impact = 0.0;
  AccessComplexity access_complexity = AccessComplexity::Medium;

  bool operator==(const Vulnerability&) const = default;
};

/// Catalog keyed by CVE id. Entry order in the source document is irrelevant.
class VulnCatalog {
 public:
  VulnCatalog() = default;

  void add(Vulnerability v) {
    if (v.impact < 0.0 || v.impact > 10.0)
      throw ParseError(strf("vulnerability '%s': impact %.3f out of range [0,10]",
                            v.cve_id.c_str(), v.impact));
    if (v.cve_id.empty()) throw ParseError("vulnerability with empty cve id");
    auto [it, inserted] = entries_.emplace(v.cve_id, std::move(v));
    if (!inserted)
      throw ParseError(strf("duplicate cve id '%s'", it->first.c_str()));
  }

  const Vulnerability* find(const std::string& cve_id) const {
    auto it = entries_.find(cve_id);
    return it == entries_.end() ? nullptr : &it->second;
  }

  const Vulnerability& at(const std::string& cve_id) const {
    const Vulnerability* v = find(cve_id);
    if (!v) throw ValidationError(strf("unresolved CVE '%s'", cve_id.c_str()));
    return *v;
  }

  std::size_t size() const { return entries_.size(); }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  bool operator==(const VulnCatalog&) const = default;

 private:
  std::map<std::string, Vulnerability> entries_;
};

/// Loads a catalog document: a JSON array of {cve, impact, ac}.
inline VulnCatalog load_catalog(const std::string& text) {
  using jsonio::Json;
  const Json doc = jsonio::parse(text, "catalog");
  if (!doc.is_array()) throw ParseError("catalog document must be a JSON array");
  VulnCatalog cat;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const Json& je = doc.at(i);
    const std::string where = strf("catalog[%zu]", i);
    Vulnerability v;
    v.cve_id = jsonio::get_string(je, "cve", where);
    v.impact = jsonio::get_number(je, "impact", where);
    v.access_complexity =
        parse_access_complexity(jsonio::get_string(je, "ac", where), where);
    cat.add(std::move(v));
  }
  return cat;
}

inline std::string serialize_catalog(const VulnCatalog& cat) {
  using jsonio::OJson;
  OJson arr = OJson::array();
  for (const auto& [id, v] : cat)
    arr.push_back(OJson{{"cve", id}, {"impact", v.impact}, {"ac", to_string(v.access_complexity)}});
  return arr.dump(2) + "\n";
}

/**
 * Categorical surrogate for exploit-success probabilities: each access
 * complexity bucket maps to one probability, strictly decreasing with
 * difficulty. MEDIUM defaults to 0.5; EASY/HIGH are configurable.
 */
struct ExploitSuccessModel {
  double easy = 0.8;
  double medium = 0.5;
  double high = 0.2;

  void validate() const {
    auto inside = [](double p) { return p > 0.0 && p < 1.0; };
    if (!inside(easy) || !inside(medium) || !inside(high))
      throw ValidationError("success probabilities must lie strictly inside (0,1)");
    if (!(easy > medium && medium > high))
      throw ValidationError(strf("success probabilities must satisfy easy > medium > high "
                                 "(got %.4f, %.4f, %.4f)", easy, medium, high));
  }

  double probability(AccessComplexity ac) const {
    switch (ac) {
      case AccessComplexity::Easy: return easy;
      case AccessComplexity::Medium: return medium;
      case AccessComplexity::High: return high;
    }
    return medium;
  }

  bool operator==(const ExploitSuccessModel&) const = default;
};

/// Loads a success-model override document: {easy, medium, high}.
inline ExploitSuccessModel load_success_model(const std::string& text) {
  using jsonio::Json;
  const Json doc = jsonio::parse(text, "success-model");
  ExploitSuccessModel m;
  m.easy = jsonio::get_number(doc, "easy", "success-model");
  m.medium = jsonio::get_number(doc, "medium", "success-model");
  m.high = jsonio::get_number(doc, "high", "success-model");
  m.validate();
  return m;
}

inline double success_probability(const ExploitSuccessModel& m, const Vulnerability& v) {
  return m.probability(v.access_complexity);
}

}  // namespace mtdgame
