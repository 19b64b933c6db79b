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

#include <string>
#include <vector>

#include <json.hpp>

#include "ghzcert/behavior.hpp"
#include "ghzcert/bell.hpp"
#include "ghzcert/linalg.hpp"
#include "ghzcert/observables.hpp"

namespace ghzcert {

/// p(a|x) = <psi| (x)_i P(a_i|x_i) |psi>.
Behavior born_behavior(const StateVector& psi, const ObservableSet& obs);
Behavior born_behavior(const ComplexMatrix& rho, const ObservableSet& obs);

/// max_a p(a|x); throws BadSelector when x has absent parties.
double guessing_probability(const Behavior& b, const SettingSelector& x);

struct GlobalEntropy {
  double bits;
  SettingSelector best_x;
};

/// Maximum of -log2 G(x) over full setting tuples. Near-ties (relative
/// 1e-12) go to the lexicographically smallest tuple.
GlobalEntropy min_entropy_global(const Behavior& b);

/// -log2 max_a p(a_party = a | x_party = setting).
double min_entropy_local(const Behavior& b, int party, int setting);

/// (1 + 1/sqrt(1 + (n-1)^2 alpha^2)) / 2^n at the optimal realization.
double optimal_guessing_probability(int n, double alpha);

struct CertReport {
  int n;
  double alpha;
  double bell_value;
  double lhv_bound;
  double quantum_bound;
  /// False when the Bell value does not exceed the LHV bound; the entropies
  /// are then behavior statistics only.
  bool violates_lhv;
  double guessing_probability_global;
  double min_entropy_global;
  SettingSelector settings_used;
  /// [party][setting] in bits.
  std::vector<std::array<double, 2>> min_entropy_local;

  nlohmann::json to_json() const;
};

CertReport certify_behavior(const BellExpression& expr, const Behavior& b);

/// Report for the GHZ state measured at the optimal angles.
CertReport certify_optimal(int n, double alpha);

}  // namespace ghzcert
