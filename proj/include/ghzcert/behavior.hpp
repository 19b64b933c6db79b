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
#include <span>
#include <vector>

namespace ghzcert {

/// Bit of `party` inside an n-party setting or outcome mask; party 0 is the
/// most significant bit, matching the tensor ordering of operators.
inline int party_bit(std::uint32_t mask, int party, int n) {
  return static_cast<int>((mask >> (n - 1 - party)) & 1u);
}

inline std::uint32_t party_flag(int party, int n) {
  return std::uint32_t{1} << (n - 1 - party);
}

/// Conditional distribution table p(a | x) for an (n, 2, 2) scenario.
///
/// Both `a` and `x` are n-bit masks. The constructor enforces normalization,
/// range, and no-signalling; an invalid table throws InvalidBehavior.
class Behavior {
 public:
  static constexpr double kSumTol = 1e-10;
  static constexpr double kRangeTol = 1e-12;
  static constexpr double kNoSignallingTol = 1e-9;

  Behavior(int n, std::vector<double> table);

  static Behavior uniform(int n);
  /// All parties output fixed bits `outcomes[party][setting]`.
  static Behavior deterministic(int n, std::span<const std::uint8_t> outcomes);

  int parties() const { return n_; }
  std::uint32_t dim() const { return std::uint32_t{1} << n_; }

  double p(std::uint32_t a, std::uint32_t x) const {
    return table_[static_cast<std::size_t>(x) * dim() + a];
  }
  std::span<const double> distribution(std::uint32_t x) const {
    return {table_.data() + static_cast<std::size_t>(x) * dim(), dim()};
  }
  const std::vector<double>& table() const { return table_; }

  /// p(a_party = outcome | x_party = setting), other parties at setting 0.
  double marginal(int party, int setting, int outcome) const;

  /// Largest violation of no-signalling over all parties and settings.
  double signalling_gap() const;

  /// weight * this + (1 - weight) * other.
  Behavior mix(const Behavior& other, double weight) const;

 private:
  int n_;
  std::vector<double> table_;
};

}  // namespace ghzcert
