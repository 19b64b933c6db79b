// Copyright 2026 The ghzcert Authors
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

#include <optional>
#include <string>
#include <vector>

#include "ghzcert/bell.hpp"

namespace ghzcert {

/// Local deterministic assignment; values[2*party + setting] is -1 or +1.
struct DeterministicStrategy {
  std::vector<int> values;

  int parties() const { return static_cast<int>(values.size() / 2); }
  /// "+-|-+|..." with one pair per party.
  std::string str() const;
};

struct LhvResult {
  double value;
  DeterministicStrategy witness;
};

inline constexpr int kMaxEnumerationParties = 12;

/// Exact maximum over all 4^n deterministic strategies.
///
/// Strategies are indexed party-major with -1 < +1; among (numerically)
/// tied maxima the lowest index wins, independent of `threads`.
LhvResult lhv_bound_enumerated(const BellExpression& expr, unsigned threads = 0);

/// Piecewise closed form for n >= 3:
///   2 - (n-1)(alpha-1)   for alpha in (alpha_L, 1/(n-1)]
///   (n-1)(alpha+1)       for alpha > 1/(n-1)
/// and std::nullopt (undefined) for alpha <= alpha_L.
std::optional<double> lhv_bound_formula(int n, double alpha);

/// (2n^2 - 2n sqrt(n^2-2n+2) + n - 1) / (4n^2 - 5n + 1), n >= 3.
double alpha_l(int n);

}  // namespace ghzcert
