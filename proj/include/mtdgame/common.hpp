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
#include <cstdarg>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <vector>

namespace mtdgame {

/// Dense row-major matrix of doubles. All games in this toolkit are small
/// (at most a few dozen actions per player), so no sparse machinery.
using Matrix = std::vector<std::vector<double>>;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Malformed input document (bad JSON, missing field, bad literal).
struct ParseError : Error {
  using Error::Error;
};

/// Structurally well-formed input that violates a model invariant.
struct ValidationError : Error {
  using Error::Error;
};

/// Iteration limit reached before the residual dropped below epsilon.
struct ConvergenceError : Error {
  ConvergenceError(const std::string& what, std::size_t iterations, double residual)
      : Error(what), iterations(iterations), residual(residual) {}
  std::size_t iterations;
  double residual;
};

/// printf-style formatting into a std::string.
inline std::string strf(const char* fmt, ...) {
  va_list args;
  va_start(args, fmt);
  va_list args2;
  va_copy(args2, args);
  int n = std::vsnprintf(nullptr, 0, fmt, args);
  va_end(args);
  std::string out(n > 0 ? static_cast<std::size_t>(n) : 0, '\0');
  if (n > 0) std::vsnprintf(out.data(), out.size() + 1, fmt, args2);
  va_end(args2);
  return out;
}

inline bool matrix_is_rectangular(const Matrix& m) {
  if (m.empty()) return true;
  const std::size_t cols = m.front().size();
  for (const auto& row : m)
    if (row.size() != cols) return false;
  return true;
}

inline bool matrix_is_finite(const Matrix& m) {
  for (const auto& row : m)
    for (double v : row)
      if (!std::isfinite(v)) return false;
  return true;
}

}  // namespace mtdgame
