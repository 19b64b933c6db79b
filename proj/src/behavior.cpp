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

#include "ghzcert/behavior.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ghzcert/errors.hpp"
#include "ghzcert/linalg.hpp"

namespace ghzcert {

Behavior::Behavior(int n, std::vector<double> table)
    : n_(n), table_(std::move(table)) {
  if (n < 1 || n > kMaxParties) {
    throw Error(ErrorKind::BadArity, "behavior party count " + std::to_string(n));
  }
  const std::size_t d = dim();
  if (table_.size() != d * d) {
    throw Error(ErrorKind::DimensionMismatch,
                "behavior table has " + std::to_string(table_.size()) +
                    " entries, expected " + std::to_string(d * d));
  }
  for (std::uint32_t x = 0; x < d; ++x) {
    double sum = 0;
    for (double v : distribution(x)) {
      if (!(v >= -kRangeTol && v <= 1 + kRangeTol)) {
        throw Error(ErrorKind::InvalidBehavior,
                    "probability " + std::to_string(v) + " out of range");
      }
      sum += v;
    }
    if (std::abs(sum - 1) > kSumTol) {
      throw Error(ErrorKind::InvalidBehavior,
                  "distribution for setting " + std::to_string(x) +
                      " sums to " + std::to_string(sum));
    }
  }
  if (const double gap = signalling_gap(); gap > kNoSignallingTol) {
    throw Error(ErrorKind::InvalidBehavior,
                "no-signalling violated by " + std::to_string(gap));
  }
}

Behavior Behavior::uniform(int n) {
  const std::size_t d = std::size_t{1} << n;
  return Behavior(n, std::vector<double>(d * d, 1.0 / static_cast<double>(d)));
}

Behavior Behavior::deterministic(int n, std::span<const std::uint8_t> outcomes) {
  if (outcomes.size() != static_cast<std::size_t>(2 * n)) {
    throw Error(ErrorKind::DimensionMismatch, "need 2n deterministic outcomes");
  }
  const std::uint32_t d = std::uint32_t{1} << n;
  std::vector<double> table(static_cast<std::size_t>(d) * d, 0.0);
  for (std::uint32_t x = 0; x < d; ++x) {
    std::uint32_t a = 0;
    for (int i = 0; i < n; ++i) {
      if (outcomes[2 * i + party_bit(x, i, n)] & 1u) a |= party_flag(i, n);
    }
    table[static_cast<std::size_t>(x) * d + a] = 1.0;
  }
  return Behavior(n, std::move(table));
}

double Behavior::marginal(int party, int setting, int outcome) const {
  if (party < 0 || party >= n_ || setting < 0 || setting > 1 || outcome < 0 ||
      outcome > 1) {
    throw Error(ErrorKind::BadIndex, "marginal index out of range");
  }
  const std::uint32_t x = setting ? party_flag(party, n_) : 0u;
  double total = 0;
  for (std::uint32_t a = 0; a < dim(); ++a) {
    if (party_bit(a, party, n_) == outcome) total += p(a, x);
  }
  return total;
}

double Behavior::signalling_gap() const {
  // For every party j, the distribution of the other parties must not depend
  // on x_j.
  double gap = 0;
  const std::uint32_t d = dim();
  for (int j = 0; j < n_; ++j) {
    const std::uint32_t fj = party_flag(j, n_);
    for (std::uint32_t x = 0; x < d; ++x) {
      if (x & fj) continue;
      for (std::uint32_t a = 0; a < d; ++a) {
        if (a & fj) continue;
        const double m0 = p(a, x) + p(a | fj, x);
        const double m1 = p(a, x | fj) + p(a | fj, x | fj);
        gap = std::max(gap, std::abs(m0 - m1));
      }
    }
  }
  return gap;
}

Behavior Behavior::mix(const Behavior& other, double weight) const {
  if (other.n_ != n_) {
    throw Error(ErrorKind::DimensionMismatch, "mixing behaviors of different n");
  }
  if (!(weight >= 0 && weight <= 1)) {
    throw Error(ErrorKind::BadRange, "mixing weight outside [0,1]");
  }
  std::vector<double> t(table_.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    t[i] = weight * table_[i] + (1 - weight) * other.table_[i];
  }
  return Behavior(n_, std::move(t));
}

}  // namespace ghzcert
