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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "ghzcert/behavior.hpp"
#include "ghzcert/bell.hpp"
#include "ghzcert/errors.hpp"
#include "ghzcert/quantum.hpp"

namespace ghzcert {
namespace {

using Terms = std::map<std::string, double>;

Terms term_strings(const BellExpression& e) {
  Terms t;
  for (const auto& [sel, c] : e.terms()) t[sel.str()] = c;
  return t;
}

// Born probabilities from explicitly materialized projector products.
Behavior explicit_born(const ComplexMatrix& rho, const ObservableSet& obs) {
  const int n = obs.parties();
  const std::uint32_t d = 1u << n;
  std::vector<double> table(d * d);
  for (std::uint32_t x = 0; x < d; ++x) {
    for (std::uint32_t a = 0; a < d; ++a) {
      std::vector<ComplexMatrix> ps;
      for (int i = 0; i < n; ++i) {
        ps.push_back(obs.eigenprojector(i, party_bit(x, i, n), party_bit(a, i, n)));
      }
      table[x * d + a] = (kron_all(ps) * rho).trace().real();
    }
  }
  return Behavior(n, std::move(table));
}

TEST(BuildBell, TwoPartyIsAlphaChshAfterRelabeling) {
  const double alpha = 0.8;
  BellExpression e = build_bell(2, alpha);
  // Swap party 2's settings and negate A11: the textbook alpha-CHSH form.
  std::map<std::string, double> relabeled;
  for (const auto& [sel, c] : e.terms()) {
    const int s1 = static_cast<int>(sel[0]);
    const int s2 = 1 - static_cast<int>(sel[1]);
    relabeled[std::to_string(s1) + std::to_string(s2)] += (s1 == 1 ? -c : c);
  }
  Terms expected{{"00", alpha}, {"01", 1}, {"10", 1}, {"11", -1}};
  EXPECT_EQ(relabeled, expected);
}

TEST(BuildBell, ThreeParties) {
  Terms expected{{"000", 1}, {"100", 1}, {"01⊥", 1}, {"11⊥", -1},
                 {"0⊥1", 1}, {"1⊥1", -1}};
  EXPECT_EQ(term_strings(build_bell(3, 1.0)), expected);
}

TEST(BuildBell, TermCount) {
  for (int n = 2; n <= 8; ++n) {
    EXPECT_EQ(build_bell(n, 2.5).terms().size(), static_cast<std::size_t>(2 + 2 * (n - 1)));
  }
}

TEST(BuildBell, CoefficientPattern) {
  const int n = 5;
  const double alpha = 3.25;
  BellExpression e = build_bell(n, alpha);
  std::string zeros(n, '0');
  std::string lead = "1" + std::string(n - 1, '0');
  Terms t = term_strings(e);
  EXPECT_EQ(t.at(zeros), 1);
  EXPECT_EQ(t.at(lead), 1);
  for (int i = 1; i < n; ++i) {
    std::string sel0 = "0", sel1 = "1";
    for (int k = 1; k < n; ++k) {
      sel0 += (k == i) ? "1" : "⊥";
      sel1 += (k == i) ? "1" : "⊥";
    }
    EXPECT_EQ(t.at(sel0), alpha);
    EXPECT_EQ(t.at(sel1), -1);
  }
}

TEST(BuildBell, Errors) {
  try {
    build_bell(1, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::BadArity);
  }
  EXPECT_THROW(build_bell(3, std::nan("")), Error);
}

TEST(BellJson, RoundTripAndCanonicalKeys) {
  BellExpression e = build_bell(4, 0.75);
  auto j = e.to_json();
  EXPECT_EQ(j.at("terms").size(), 8u);
  EXPECT_TRUE(j.at("terms").contains("01⊥⊥"));
  BellExpression back = BellExpression::from_json(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(back.terms(), e.terms());
  EXPECT_EQ(back.alpha(), e.alpha());
}

TEST(Selector, ParseForms) {
  EXPECT_EQ(SettingSelector::parse("0-1"), SettingSelector::parse("0⊥1"));
  EXPECT_EQ(SettingSelector::parse("10").setting_mask(), 2u);
  EXPECT_EQ(SettingSelector::parse("1⊥0").party_mask(), 5u);
  EXPECT_THROW(SettingSelector::parse("0x1"), Error);
}

TEST(ToOperator, OptimalAnglesGiveTheorem) {
  BellExpression e = build_bell(3, 1.0);
  ComplexMatrix b = to_operator(e, optimal_angles(3, 1.0));
  EXPECT_TRUE(is_hermitian(b));
  EXPECT_NEAR(max_eigenvalue(b), 2 * std::sqrt(5.0), 1e-9);
  EXPECT_NEAR(std::abs(b.trace()), 0, 1e-12);
}

TEST(ToOperator, ZeroExpression) {
  BellExpression e(3, 1.0, {{SettingSelector::parse("000"), 0.0}});
  EXPECT_EQ(to_operator(e, optimal_angles(3, 1.0)), ComplexMatrix::Zero(8, 8));
}

TEST(ToOperator, DimensionMismatch) {
  try {
    to_operator(build_bell(3, 1.0), optimal_angles(4, 1.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::DimensionMismatch);
  }
}

TEST(EvalOnBehavior, OptimalRealization) {
  ComplexMatrix rho = projector(ghz_state(3));
  Behavior b = explicit_born(rho, optimal_angles(3, 1.0));
  EXPECT_NEAR(eval_on_behavior(build_bell(3, 1.0), b), 2 * std::sqrt(5.0), 1e-10);
}

TEST(EvalOnBehavior, UniformIsZero) {
  EXPECT_NEAR(eval_on_behavior(build_bell(3, 1.7), Behavior::uniform(3)), 0, 1e-15);
}

TEST(EvalOnBehavior, DeterministicAllPlus) {
  std::vector<std::uint8_t> zeros(6, 0);
  Behavior b = Behavior::deterministic(3, zeros);
  BellExpression e = build_bell(3, 1.0);
  EXPECT_NEAR(eval_on_behavior(e, b), 2.0, 1e-15);
  EXPECT_NEAR(e.deterministic_value(std::vector<int>(6, 1)), 2.0, 1e-15);
}

TEST(EvalOnBehavior, BornRuleConsistency) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> ang(-3.2, 3.2);
  for (int trial = 0; trial < 10; ++trial) {
    const int n = 2 + trial % 3;
    StateVector psi(1 << n);
    for (int k = 0; k < psi.size(); ++k) psi(k) = Complex(g(rng), g(rng));
    psi.normalize();
    std::vector<std::array<double, 2>> a(n);
    for (auto& p : a) p = {ang(rng), ang(rng)};
    ObservableSet obs(a);
    BellExpression e = build_bell(n, 0.3 + trial);
    ComplexMatrix rho = projector(psi);
    const double direct = (to_operator(e, obs) * rho).trace().real();
    EXPECT_NEAR(eval_on_behavior(e, explicit_born(rho, obs)), direct, 1e-10);
  }
}

TEST(EvalOnBehavior, Linearity) {
  BellExpression e = build_bell(3, 2.0);
  Behavior q = explicit_born(projector(ghz_state(3)), optimal_angles(3, 2.0));
  std::vector<std::uint8_t> outs{0, 1, 1, 0, 0, 0};
  Behavior d = Behavior::deterministic(3, outs);
  for (double w : {0.0, 0.25, 0.6, 1.0}) {
    const double mixed = eval_on_behavior(e, q.mix(d, w));
    const double expected = w * eval_on_behavior(e, q) + (1 - w) * eval_on_behavior(e, d);
    EXPECT_NEAR(mixed, expected, 1e-12);
  }
}

TEST(EvalOnBehavior, RejectsSignalling) {
  // Party 1's outcome copies party 2's setting.
  std::vector<double> t(16, 0.0);
  for (std::uint32_t x = 0; x < 4; ++x) t[x * 4 + ((x & 1u) << 1)] = 1.0;
  EXPECT_THROW(Behavior(2, t), Error);
}

}  // namespace
}  // namespace ghzcert
