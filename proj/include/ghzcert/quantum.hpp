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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ghzcert/bell.hpp"
#include "ghzcert/observables.hpp"

namespace ghzcert {

/// sqrt(1 + (n-1)^2 alpha^2) + sqrt(1 + (n-1)^2).
double theorem1_bound(int n, double alpha);

/// tan(theta_10) = 1/((n-1) alpha), tan(theta_11) = -1/(n-1), and
/// A_i0 = X, A_i1 = Z for the remaining parties.
ObservableSet optimal_angles(int n, double alpha);

inline constexpr int kMaxEigenParties = 10;

/// Largest eigenvalue of the Bell operator for the given observables.
double max_eigenvalue_bound(const BellExpression& expr, const ObservableSet& obs);

/// <GHZ| B |GHZ> for the given observables.
double ghz_expectation(const BellExpression& expr, const ObservableSet& obs);

struct AngleSearchOptions {
  int starts = 20;
  std::uint64_t seed = 7;
  /// When set, replaces the first random start.
  std::optional<ObservableSet> initial;
  int max_sweeps = 400;
  unsigned threads = 0;
};

struct AngleSearchResult {
  ObservableSet angles;
  double value;
  int best_start;
};

/// Multi-start coordinate ascent of the largest Bell-operator eigenvalue
/// over all 2n angles. Each coordinate is refined with a coarse scan over
/// the full circle followed by Brent's method.
AngleSearchResult optimize_angles(const BellExpression& expr,
                                  const AngleSearchOptions& options = {});

struct WeightedBlock {
  double weight;
  std::vector<int> index;  // block index k_i per party
};

/// Direct sum of GHZ copies, sqrt(q_k) |GHZ>_k, each party holding
/// `blocks_per_party` two-dimensional blocks.
struct BlockState {
  int blocks_per_party = 1;
  std::vector<WeightedBlock> blocks;
};

inline constexpr int kMaxBlocksPerParty = 4;

/// `count` distinct random block tuples with weights drawn uniformly from
/// [0.05, 1) and normalized; reproducible from `seed`.
BlockState random_block_state(int n, int blocks_per_party, int count, std::uint64_t seed);

struct SelfTestReport {
  double ancilla_fidelity;
  /// Keyed "A10", "A11", "A20", ... (party counted from 1).
  std::map<std::string, double> observable_fidelities;
  double bell_value;
  double theorem1_bound;

  nlohmann::json to_json() const;
};

/// Builds the block realization, applies the swap-type local isometry
/// |2k+b>|0> -> |2k>|b> on every party and checks that the ancillas carry
/// |GHZ> (and A|GHZ> after each observable) times a junk state.
SelfTestReport selftest_verify(const BlockState& state, int n, double alpha);

}  // namespace ghzcert
