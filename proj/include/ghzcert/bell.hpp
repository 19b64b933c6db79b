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

// Stabilizer-type Bell expressions
//
//   B_N = (A10 + A11) A20 ... AN0 + sum_{i>=2} (alpha A10 - A11) Ai1
//
// built by substituting per-party setting combinations for the Pauli
// letters of the GHZ stabilizer generators.

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "ghzcert/behavior.hpp"
#include "ghzcert/linalg.hpp"
#include "ghzcert/observables.hpp"

namespace ghzcert {

enum class Setting : std::uint8_t { Zero = 0, One = 1, Absent = 2 };

/// Which observable each party contributes to one correlator.
class SettingSelector {
 public:
  SettingSelector() = default;
  explicit SettingSelector(std::vector<Setting> entries)
      : entries_(std::move(entries)) {}
  /// All parties present with the settings encoded in `x` (party 0 = MSB).
  static SettingSelector full(int n, std::uint32_t x);
  /// Accepts '0', '1', and either "⊥" or '-' for an absent party.
  static SettingSelector parse(const std::string& text);

  int parties() const { return static_cast<int>(entries_.size()); }
  Setting operator[](int party) const { return entries_[party]; }
  const std::vector<Setting>& entries() const { return entries_; }

  bool is_full() const;
  /// Setting bits with absent parties mapped to Setting0.
  std::uint32_t setting_mask() const;
  /// Bits of parties that take part in the correlator.
  std::uint32_t party_mask() const;

  std::string str() const;

  auto operator<=>(const SettingSelector&) const = default;

 private:
  std::vector<Setting> entries_;
};

class BellExpression {
 public:
  BellExpression(int n, double alpha, std::map<SettingSelector, double> terms);

  int parties() const { return n_; }
  double alpha() const { return alpha_; }
  const std::map<SettingSelector, double>& terms() const { return terms_; }

  /// Terms in canonical form: {"n":..,"alpha":..,"terms":{"00⊥":c,...}}.
  nlohmann::json to_json() const;
  static BellExpression from_json(const nlohmann::json& j);

  /// Value for a local deterministic strategy; `values[2*i+s]` is +-1.
  double deterministic_value(const std::vector<int>& values) const;

 private:
  int n_;
  double alpha_;
  std::map<SettingSelector, double> terms_;
};

enum class PauliLetter : std::uint8_t { I, X, Z };
using PauliWord = std::vector<PauliLetter>;

/// g1 = X...X, g_i = Z_1 Z_i for i = 2..n.
std::vector<PauliWord> ghz_stabilizer_generators(int n);

/// Linear combination of a party's two settings standing in for X or Z.
struct LetterSubstitution {
  std::vector<std::pair<Setting, double>> x;
  std::vector<std::pair<Setting, double>> z;
};

/// Party 1: X -> A10 + A11, Z -> alpha A10 - A11. Others: X -> Ai0, Z -> Ai1.
std::vector<LetterSubstitution> ghz_substitutions(int n, double alpha);

/// Sums the generators after replacing every letter with its substitution.
BellExpression substitute(const std::vector<PauliWord>& generators,
                          const std::vector<LetterSubstitution>& rules,
                          double alpha);

/// Builds B_N(alpha); throws BadArity for n < 2.
BellExpression build_bell(int n, double alpha);

/// Dense 2^n operator for concrete observables.
ComplexMatrix to_operator(const BellExpression& expr, const ObservableSet& obs);

/// Same as to_operator but real; every X-Z plane observable is real.
RealMatrix to_real_operator(const BellExpression& expr,
                            const ObservableSet& obs);

/// Correlator <prod_{i in S} A_{i,s_i}> with outcome a -> (-1)^a.
double correlator(const Behavior& b, const SettingSelector& s);

double eval_on_behavior(const BellExpression& expr, const Behavior& b);

}  // namespace ghzcert
