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

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "mtdgame/common.hpp"

namespace mtdgame::jsonio {

using Json = nlohmann::json;
// Serialization uses ordered_json so emitted documents are byte-stable.
using OJson = nlohmann::ordered_json;

inline Json parse(const std::string& text, const char* what) {
  try {
    return Json::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(strf("malformed %s document: %s", what, e.what()));
  }
}

inline const Json& field(const Json& obj, const char* key, const std::string& where) {
  if (!obj.is_object())
    throw ParseError(strf("%s: expected an object", where.c_str()));
  auto it = obj.find(key);
  if (it == obj.end())
    throw ParseError(strf("%s: missing field '%s'", where.c_str(), key));
  return *it;
}

inline std::string get_string(const Json& obj, const char* key, const std::string& where) {
  const Json& v = field(obj, key, where);
  if (!v.is_string())
    throw ParseError(strf("%s: field '%s' must be a string", where.c_str(), key));
  return v.get<std::string>();
}

inline double get_number(const Json& obj, const char* key, const std::string& where) {
  const Json& v = field(obj, key, where);
  if (!v.is_number())
    throw ParseError(strf("%s: field '%s' must be a number", where.c_str(), key));
  return v.get<double>();
}

inline bool get_bool_or(const Json& obj, const char* key, bool fallback) {
  if (!obj.is_object()) return fallback;
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_boolean()) throw ParseError(strf("field '%s' must be a boolean", key));
  return it->get<bool>();
}

inline std::string get_string_or(const Json& obj, const char* key, const std::string& fallback) {
  if (!obj.is_object()) return fallback;
  auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_string()) throw ParseError(strf("field '%s' must be a string", key));
  return it->get<std::string>();
}

inline const Json& element(const Json& arr, std::size_t i) { return arr.at(i); }

}  // namespace mtdgame::jsonio

namespace mtdgame {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(strf("cannot open file '%s'", path.c_str()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(strf("cannot write file '%s'", path.c_str()));
  out << content;
}

}  // namespace mtdgame
