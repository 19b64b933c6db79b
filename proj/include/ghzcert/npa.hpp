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

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ghzcert/bell.hpp"
#include "ghzcert/sdp.hpp"

namespace ghzcert {

/// Outcome-0 projector of one party's setting.
struct Letter {
  int party;
  int setting;
  auto operator<=>(const Letter&) const = default;
};

using Word = std::vector<Letter>;

/// Parties sorted (letters of different parties commute), equal adjacent
/// letters merged (projectors are idempotent).
Word canonical(const Word& w);

Word adjoint(const Word& w);

/// Representative shared by w and its adjoint; moments are taken real.
Word moment_key(const Word& w);

/// "1" for the identity, otherwise letters like "a0b1c0".
std::string word_str(const Word& w);

inline constexpr int kMaxNpaLevel = 3;

/// Canonical words of length <= level, identity first, then by length and
/// lexicographically. Throws TooLarge beyond the desk-scale guard.
std::vector<Word> build_words(int n, int level);

enum class BellConstraint { Equal, AtLeast };

struct GuessingTarget {
  /// Global target: every party's outcome at `settings`.
  static GuessingTarget global(SettingSelector settings);
  /// Local target: one party's outcome at one setting.
  static GuessingTarget local(int party, int setting);

  bool is_global = true;
  SettingSelector settings;
  int party = 0;
  int setting = 0;

  std::string str() const;
};

struct MomentProblem {
  int n = 0;
  int level = 0;
  /// Level 3 is outside the tested desk-scale range.
  bool experimental = false;
  std::vector<Word> words;
  /// Real moment variables of one branch, in variable order.
  std::vector<Word> moments;
  int branches = 1;
  SdpProblem sdp;
};

/// Single moment matrix maximizing the Bell expression.
MomentProblem build_max_bell_sdp(const BellExpression& expr, int level);

/// Largest Bell value compatible with the level-`level` relaxation.
SdpSolution npa_max_bell(const BellExpression& expr, int level, const SdpBackend& backend);

/// Convex-decomposition guessing problem: one moment matrix per guess, the
/// guessed branches summing to a normalized behavior with the given Bell
/// value. Runs a preliminary max-Bell solve and throws InfeasibleValue when
/// `bell_value` exceeds it.
MomentProblem build_guessing_sdp(const BellExpression& expr, double bell_value,
                                 const GuessingTarget& target, int level,
                                 const SdpBackend& backend,
                                 BellConstraint mode = BellConstraint::Equal);

struct GuessingBound {
  double g_upper;
  double entropy_lower;
  SdpSolution solution;
};

GuessingBound solve_guessing(const BellExpression& expr, double bell_value,
                             const GuessingTarget& target, int level,
                             const SdpBackend& backend,
                             BellConstraint mode = BellConstraint::Equal);

struct RobustnessRow {
  double bell_value;
  double g_upper;
  double entropy_lower;
  int level;
  double solver_residual;
};

/// Grid points solve independently; `threads` = 0 uses the hardware count.
/// Throws MaxIterations if any point fails to converge.
std::vector<RobustnessRow> robustness_curve(const BellExpression& expr, int level,
                                            const std::vector<double>& bell_values,
                                            const GuessingTarget& target,
                                            const SdpBackend& backend,
                                            BellConstraint mode = BellConstraint::Equal,
                                            unsigned threads = 0);

}  // namespace ghzcert
