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

#include <array>
#include <vector>

#include "ghzcert/linalg.hpp"

namespace ghzcert {

/// Two X-Z plane observables per party, A = cos(theta) Z + sin(theta) X.
///
/// Outcome bit 0 is the +1 eigenvalue. Angles are stored as given; the
/// realized operators are always Hermitian involutions.
class ObservableSet {
 public:
  explicit ObservableSet(std::vector<std::array<double, 2>> angles);

  int parties() const { return static_cast<int>(angles_.size()); }
  double angle(int party, int setting) const;
  void set_angle(int party, int setting, double theta);
  const std::vector<std::array<double, 2>>& angles() const { return angles_; }

  ComplexMatrix observable(int party, int setting) const;
  /// Rows are the bras <e_0|, <e_1| of the eigenbasis (outcome 0 first).
  RealMatrix measurement_basis(int party, int setting) const;
  ComplexMatrix eigenprojector(int party, int setting, int outcome) const;

 private:
  void check(int party, int setting) const;

  std::vector<std::array<double, 2>> angles_;
};

RealMatrix real_observable(double theta);

}  // namespace ghzcert
