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

#include "ghzcert/observables.hpp"

#include <cmath>
#include <string>

#include "ghzcert/errors.hpp"

namespace ghzcert {

ObservableSet::ObservableSet(std::vector<std::array<double, 2>> angles)
    : angles_(std::move(angles)) {
  if (angles_.empty()) {
    throw Error(ErrorKind::BadArity, "observable set needs at least one party");
  }
  for (const auto& a : angles_) {
    if (!std::isfinite(a[0]) || !std::isfinite(a[1])) {
      throw Error(ErrorKind::BadRange, "observable angles must be finite");
    }
  }
}

void ObservableSet::check(int party, int setting) const {
  if (party < 0 || party >= parties() || setting < 0 || setting > 1) {
    throw Error(ErrorKind::BadIndex, "party " + std::to_string(party) +
                                         " setting " + std::to_string(setting));
  }
}

double ObservableSet::angle(int party, int setting) const {
  check(party, setting);
  return angles_[party][setting];
}

void ObservableSet::set_angle(int party, int setting, double theta) {
  check(party, setting);
  angles_[party][setting] = theta;
}

RealMatrix real_observable(double theta) {
  RealMatrix m(2, 2);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  m << c, s, s, -c;
  return m;
}

ComplexMatrix ObservableSet::observable(int party, int setting) const {
  return real_observable(angle(party, setting)).cast<Complex>();
}

RealMatrix ObservableSet::measurement_basis(int party, int setting) const {
  const double half = angle(party, setting) / 2;
  RealMatrix b(2, 2);
  b << std::cos(half), std::sin(half), -std::sin(half), std::cos(half);
  return b;
}

ComplexMatrix ObservableSet::eigenprojector(int party, int setting,
                                            int outcome) const {
  if (outcome < 0 || outcome > 1) {
    throw Error(ErrorKind::BadIndex, "outcome " + std::to_string(outcome));
  }
  const RealVector row = measurement_basis(party, setting).row(outcome);
  return (row * row.transpose()).cast<Complex>();
}

}  // namespace ghzcert
