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

#include "ghzcert/bell.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "ghzcert/errors.hpp"

namespace ghzcert {

namespace {

constexpr const char* kAbsentGlyph = "⊥";

void check_party_count(int n, int minimum) {
  if (n < minimum) {
    throw Error(ErrorKind::BadArity, "need at least " + std::to_string(minimum) +
                                         " parties, got " + std::to_string(n));
  }
  if (n > kMaxParties) {
    throw Error(ErrorKind::TooLarge, "party count " + std::to_string(n) +
                                         " exceeds " + std::to_string(kMaxParties));
  }
}

}  // namespace

SettingSelector SettingSelector::full(int n, std::uint32_t x) {
  std::vector<Setting> e(n);
  for (int i = 0; i < n; ++i) {
    e[i] = party_bit(x, i, n) ? Setting::One : Setting::Zero;
  }
  return SettingSelector(std::move(e));
}

SettingSelector SettingSelector::parse(const std::string& text) {
  std::vector<Setting> e;
  const std::string absent = kAbsentGlyph;
  for (std::size_t i = 0; i < text.size();) {
    if (text[i] == '0') {
      e.push_back(Setting::Zero);
      ++i;
    } else if (text[i] == '1') {
      e.push_back(Setting::One);
      ++i;
    } else if (text[i] == '-') {
      e.push_back(Setting::Absent);
      ++i;
    } else if (text.compare(i, absent.size(), absent) == 0) {
      e.push_back(Setting::Absent);
      i += absent.size();
    } else {
      throw Error(ErrorKind::BadSelector, "cannot parse selector '" + text + "'");
    }
  }
  return SettingSelector(std::move(e));
}

bool SettingSelector::is_full() const {
  for (Setting s : entries_) {
    if (s == Setting::Absent) return false;
  }
  return true;
}

std::uint32_t SettingSelector::setting_mask() const {
  const int n = parties();
  std::uint32_t m = 0;
  for (int i = 0; i < n; ++i) {
    if (entries_[i] == Setting::One) m |= party_flag(i, n);
  }
  return m;
}

std::uint32_t SettingSelector::party_mask() const {
  const int n = parties();
  std::uint32_t m = 0;
  for (int i = 0; i < n; ++i) {
    if (entries_[i] != Setting::Absent) m |= party_flag(i, n);
  }
  return m;
}

std::string SettingSelector::str() const {
  std::string out;
  for (Setting s : entries_) {
    switch (s) {
      case Setting::Zero: out += '0'; break;
      case Setting::One: out += '1'; break;
      case Setting::Absent: out += kAbsentGlyph; break;
    }
  }
  return out;
}

BellExpression::BellExpression(int n, double alpha,
                               std::map<SettingSelector, double> terms)
    : n_(n), alpha_(alpha), terms_(std::move(terms)) {
  check_party_count(n, 1);
  if (!std::isfinite(alpha)) {
    throw Error(ErrorKind::BadRange, "alpha must be finite");
  }
  for (const auto& [sel, c] : terms_) {
    if (sel.parties() != n) {
      throw Error(ErrorKind::DimensionMismatch,
                  "selector " + sel.str() + " does not have " +
                      std::to_string(n) + " parties");
    }
    if (!std::isfinite(c)) {
      throw Error(ErrorKind::BadRange, "non-finite coefficient for " + sel.str());
    }
  }
}

nlohmann::json BellExpression::to_json() const {
  nlohmann::json terms = nlohmann::json::object();
  for (const auto& [sel, c] : terms_) terms[sel.str()] = c;
  return {{"n", n_}, {"alpha", alpha_}, {"terms", terms}};
}

BellExpression BellExpression::from_json(const nlohmann::json& j) {
  std::map<SettingSelector, double> terms;
  for (const auto& [key, value] : j.at("terms").items()) {
    terms.emplace(SettingSelector::parse(key), value.get<double>());
  }
  return BellExpression(j.at("n").get<int>(), j.at("alpha").get<double>(),
                        std::move(terms));
}

double BellExpression::deterministic_value(const std::vector<int>& values) const {
  if (values.size() != static_cast<std::size_t>(2 * n_)) {
    throw Error(ErrorKind::DimensionMismatch, "strategy needs 2n entries");
  }
  double total = 0;
  for (const auto& [sel, c] : terms_) {
    int sign = 1;
    for (int i = 0; i < n_; ++i) {
      if (sel[i] != Setting::Absent) {
        sign *= values[2 * i + static_cast<int>(sel[i])];
      }
    }
    total += c * sign;
  }
  return total;
}

std::vector<PauliWord> ghz_stabilizer_generators(int n) {
  check_party_count(n, 2);
  std::vector<PauliWord> gens;
  gens.emplace_back(n, PauliLetter::X);
  for (int i = 1; i < n; ++i) {
    PauliWord g(n, PauliLetter::I);
    g[0] = PauliLetter::Z;
    g[i] = PauliLetter::Z;
    gens.push_back(std::move(g));
  }
  return gens;
}

std::vector<LetterSubstitution> ghz_substitutions(int n, double alpha) {
  check_party_count(n, 2);
  std::vector<LetterSubstitution> rules(n);
  rules[0].x = {{Setting::Zero, 1.0}, {Setting::One, 1.0}};
  rules[0].z = {{Setting::Zero, alpha}, {Setting::One, -1.0}};
  for (int i = 1; i < n; ++i) {
    rules[i].x = {{Setting::Zero, 1.0}};
    rules[i].z = {{Setting::One, 1.0}};
  }
  return rules;
}

BellExpression substitute(const std::vector<PauliWord>& generators,
                          const std::vector<LetterSubstitution>& rules,
                          double alpha) {
  const int n = static_cast<int>(rules.size());
  std::map<SettingSelector, double> terms;
  for (const auto& g : generators) {
    if (static_cast<int>(g.size()) != n) {
      throw Error(ErrorKind::DimensionMismatch,
                  "generator length differs from substitution count");
    }
    // Expand the product of per-party sums.
    std::vector<std::pair<std::vector<Setting>, double>> partial{{{}, 1.0}};
    for (int i = 0; i < n; ++i) {
      std::vector<std::pair<std::vector<Setting>, double>> next;
      if (g[i] == PauliLetter::I) {
        for (auto& [e, c] : partial) {
          e.push_back(Setting::Absent);
          next.emplace_back(std::move(e), c);
        }
      } else {
        const auto& options = g[i] == PauliLetter::X ? rules[i].x : rules[i].z;
        for (const auto& [e, c] : partial) {
          for (const auto& [setting, coeff] : options) {
            auto grown = e;
            grown.push_back(setting);
            next.emplace_back(std::move(grown), c * coeff);
          }
        }
      }
      partial = std::move(next);
    }
    for (auto& [e, c] : partial) terms[SettingSelector(std::move(e))] += c;
  }
  return BellExpression(n, alpha, std::move(terms));
}

BellExpression build_bell(int n, double alpha) {
  if (!std::isfinite(alpha)) {
    throw Error(ErrorKind::BadRange, "alpha must be finite");
  }
  return substitute(ghz_stabilizer_generators(n), ghz_substitutions(n, alpha),
                    alpha);
}

ComplexMatrix to_operator(const BellExpression& expr, const ObservableSet& obs) {
  return to_real_operator(expr, obs).cast<Complex>();
}

RealMatrix to_real_operator(const BellExpression& expr,
                            const ObservableSet& obs) {
  const int n = expr.parties();
  if (obs.parties() != n) {
    throw Error(ErrorKind::DimensionMismatch,
                "expression has " + std::to_string(n) + " parties, observables " +
                    std::to_string(obs.parties()));
  }
  if (n > kMaxParties) {
    throw Error(ErrorKind::TooLarge, "operator dimension beyond 2^12");
  }
  std::vector<std::array<RealMatrix, 2>> local(n);
  for (int i = 0; i < n; ++i) {
    local[i] = {real_observable(obs.angle(i, 0)), real_observable(obs.angle(i, 1))};
  }
  const Eigen::Index dim = Eigen::Index{1} << n;
  RealMatrix total = RealMatrix::Zero(dim, dim);
  const RealMatrix id2 = RealMatrix::Identity(2, 2);
  for (const auto& [sel, c] : expr.terms()) {
    if (c == 0.0) continue;
    RealMatrix product = RealMatrix::Identity(1, 1);
    for (int i = 0; i < n; ++i) {
      const RealMatrix& f =
          sel[i] == Setting::Absent ? id2 : local[i][static_cast<int>(sel[i])];
      product = kron(product, f);
    }
    total += c * product;
  }
  return total;
}

double correlator(const Behavior& b, const SettingSelector& s) {
  if (s.parties() != b.parties()) {
    throw Error(ErrorKind::DimensionMismatch, "selector/behavior party mismatch");
  }
  const std::uint32_t x = s.setting_mask();
  const std::uint32_t involved = s.party_mask();
  double e = 0;
  for (std::uint32_t a = 0; a < b.dim(); ++a) {
    const int parity = std::popcount(a & involved) & 1;
    e += (parity ? -1.0 : 1.0) * b.p(a, x);
  }
  return e;
}

double eval_on_behavior(const BellExpression& expr, const Behavior& b) {
  if (expr.parties() != b.parties()) {
    throw Error(ErrorKind::DimensionMismatch, "expression/behavior party mismatch");
  }
  // Absent parties sit at Setting0; only meaningful for no-signalling tables.
  if (const double gap = b.signalling_gap(); gap > Behavior::kNoSignallingTol) {
    throw Error(ErrorKind::InvalidBehavior,
                "behavior signals by " + std::to_string(gap));
  }
  double total = 0;
  for (const auto& [sel, c] : expr.terms()) total += c * correlator(b, sel);
  return total;
}

}  // namespace ghzcert
