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
#include <numbers>

#include "ghzcert/classical.hpp"
#include "ghzcert/errors.hpp"
#include "ghzcert/holevo.hpp"
#include "published_table.hpp"

namespace ghzcert {
namespace {

const double kSqrt5 = std::sqrt(5.0);

// Independent conditional state: purify rho_lambda_000, trace parties 1 and
// 2, project party 3 on cos t |0> + sin t |1>, normalize, eigensolve.
std::pair<double, double> explicit_conditional_eigs(double lambda, double t) {
  const double r = 1 / std::sqrt(2.0);
  // psi_000 = (|000> + |111>)/sqrt2, psi_100 = (|000> - |111>)/sqrt2.
  Eigen::VectorXd phi = Eigen::VectorXd::Zero(16);
  phi(0 * 2 + 0) += std::sqrt(lambda) * r;
  phi(7 * 2 + 0) += std::sqrt(lambda) * r;
  phi(0 * 2 + 1) += std::sqrt(1 - lambda) * r;
  phi(7 * 2 + 1) -= std::sqrt(1 - lambda) * r;
  Eigen::Matrix2d cond = Eigen::Matrix2d::Zero();
  for (int p12 = 0; p12 < 4; ++p12) {
    Eigen::Vector2d v;
    for (int e = 0; e < 2; ++e) {
      v(e) = std::cos(t) * phi(2 * (2 * p12 + 0) + e) + std::sin(t) * phi(2 * (2 * p12 + 1) + e);
    }
    cond += v * v.transpose();
  }
  cond /= cond.trace();
  ComplexMatrix m = cond.cast<Complex>();
  auto e = hermitian_eig(m);
  return {e.values(1), e.values(0)};
}

TEST(GhzBasis, Orthonormal) {
  for (int a = 0; a < 8; ++a)
    for (int b = 0; b < 8; ++b)
      EXPECT_NEAR(std::abs(ghz_basis_vector(a).dot(ghz_basis_vector(b))), a == b ? 1 : 0, 1e-15);
  EXPECT_EQ(ghz_basis_name(5), "ψ101");
}

TEST(Classify, Examples) {
  GhzClassification c = classify_ghz_basis();
  EXPECT_EQ(c.images[0][0].label, 0);
  EXPECT_EQ(c.images[0][0].sign, 1);
  EXPECT_EQ(c.images[0][1].label, 5);
  EXPECT_EQ(c.images[0][1].sign, -1);
  EXPECT_EQ(c.class_of[7], 2);
}

TEST(Classify, Classes) {
  GhzClassification c = classify_ghz_basis();
  for (int l : {0, 5, 6, 3}) EXPECT_EQ(c.class_of[l], 1) << l;
  for (int l : {4, 1, 2, 7}) EXPECT_EQ(c.class_of[l], 2) << l;
}

TEST(Classify, PublishedTableCells) {
  // Four published cells contradict the explicit matrix action; every other
  // cell and the class column agree.
  const std::map<std::pair<int, int>, std::string> corrected{
      {{testdata::label_of("001"), 7}, "-001"},
      {{testdata::label_of("101"), 7}, "-101"},
      {{testdata::label_of("010"), 1}, "-111"},
      {{testdata::label_of("110"), 3}, "+101"},
  };
  GhzClassification c = classify_ghz_basis();
  int agree = 0;
  for (const auto& row : testdata::published_table()) {
    const int label = testdata::label_of(row.label);
    EXPECT_EQ(c.class_of[label], row.klass);
    for (int op = 0; op < 8; ++op) {
      const BasisImage img = c.images[label][op];
      std::string got = std::string(img.sign > 0 ? "+" : "-") +
                        ghz_basis_name(img.label).substr(std::string("ψ").size());
      auto fix = corrected.find({label, op});
      if (fix != corrected.end()) {
        EXPECT_EQ(got, fix->second);
        EXPECT_NE(got, row.cells[op]);
      } else {
        EXPECT_EQ(got, row.cells[op]) << row.label << " " << c.operators[op];
        ++agree;
      }
    }
  }
  EXPECT_EQ(agree, 60);
}

TEST(Classify, ZIZIsDiagonal) {
  // Z (x) I (x) Z acts on psi_ijk as (-1)^k.
  GhzClassification c = classify_ghz_basis();
  for (int l = 0; l < 8; ++l) {
    EXPECT_EQ(c.images[l][7].label, l);
    EXPECT_EQ(c.images[l][7].sign, (l & 1) ? -1 : 1);
  }
}

TEST(Classify, Unsupported) {
  try {
    classify_ghz_basis(4);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Unsupported);
  }
}

TEST(CorrelationTensor, SaturatingStateDisplays) {
  for (double lambda : {1.0, 0.75, 0.5, 0.625}) {
    CorrelationTensor t = correlation_tensor(saturating_state(0, lambda), 3);
    const double d = lambda - (1 - lambda);
    RealMatrix expected = RealMatrix::Zero(3, 9);
    expected(0, 0) = d;
    expected(0, 4) = -d;
    expected(1, 1) = -d;
    expected(1, 3) = -d;
    EXPECT_LT((t.full - expected).cwiseAbs().maxCoeff(), 1e-15);
    RealMatrix reduced = RealMatrix::Zero(3, 3);
    reduced(2, 2) = 1;
    EXPECT_LT((*t.without_third - reduced).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_LT((*t.without_second - reduced).cwiseAbs().maxCoeff(), 1e-15);
  }
}

TEST(CorrelationTensor, MaximallyMixedIsZero) {
  for (int n = 2; n <= 4; ++n) {
    const int d = 1 << n;
    CorrelationTensor t = correlation_tensor(ComplexMatrix::Identity(d, d) / double(d), n);
    EXPECT_EQ(t.full.cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(CorrelationTensor, IndexMapForFourParties) {
  // <X Y Z Z> lands at row 3*(1-1)+(2-1) = 1 and column 3*(3-1)+(3-1) = 8.
  std::vector<ComplexMatrix> f{pauli::x(), pauli::y(), pauli::z(), pauli::z()};
  ComplexMatrix rho = (ComplexMatrix::Identity(16, 16) + 0.5 * kron_all(f)) / 16.0;
  CorrelationTensor t = correlation_tensor(rho, 4);
  ASSERT_EQ(t.full.rows(), 9);
  ASSERT_EQ(t.full.cols(), 9);
  EXPECT_NEAR(t.full(1, 8), 0.5, 1e-15);
  EXPECT_NEAR(t.full.cwiseAbs().sum(), 0.5, 1e-15);
  EXPECT_FALSE(t.without_third.has_value());
}

TEST(CorrelationTensor, Errors) {
  EXPECT_THROW(correlation_tensor(ComplexMatrix::Identity(8, 8), 4), Error);
  EXPECT_THROW(correlation_tensor(ComplexMatrix::Identity(128, 128), 7), Error);
}

TEST(Horodecki, SaturatingFamily) {
  EXPECT_NEAR(horodecki_bell_max(correlation_tensor(saturating_state(0, 1.0), 3)),
              2 * kSqrt5, 1e-12);
  EXPECT_NEAR(horodecki_bell_max(correlation_tensor(saturating_state(0, 0.5), 3)), 4.0,
              1e-12);
  EXPECT_DOUBLE_EQ(lhv_bound_enumerated(build_bell(3, 1.0)).value, 4.0);
  for (double lambda : {0.6, 0.8, 0.95}) {
    const double expected = 2 * std::sqrt((2 * lambda - 1) * (2 * lambda - 1) + 4);
    EXPECT_NEAR(horodecki_bell_max(correlation_tensor(saturating_state(0, lambda), 3)),
                expected, 1e-12);
  }
}

TEST(Horodecki, RoundTripThroughLambda) {
  for (int k = 0; k < 50; ++k) {
    const double lambda = 0.5 + 0.5 * k / 49.0;
    const double bell = horodecki_bell_max(correlation_tensor(saturating_state(0, lambda), 3));
    EXPECT_NEAR(lambda_of_bell(bell), lambda, 1e-10) << lambda;
  }
}

TEST(EveEigenvalues, Examples) {
  auto [p, m] = eve_eigenvalues(1.0, 0.37);
  EXPECT_NEAR(p, 1, 1e-15);
  EXPECT_NEAR(m, 0, 1e-15);
  for (double lambda : {0.1, 0.5, 0.9}) {
    auto [a, b] = eve_eigenvalues(lambda, 0.0);
    EXPECT_NEAR(a, 1, 1e-15);
    EXPECT_NEAR(b, 0, 1e-15);
  }
  auto [h1, h2] = eve_eigenvalues(0.5, std::numbers::pi / 4);
  EXPECT_NEAR(h1, 0.5, 1e-15);
  EXPECT_NEAR(h2, 0.5, 1e-15);
  EXPECT_THROW(eve_eigenvalues(1.5, 0), Error);
}

TEST(EveEigenvalues, MatchExplicitConditionalStates) {
  for (int i = 0; i < 20; ++i) {
    for (int j = 0; j < 20; ++j) {
      const double lambda = i / 19.0;
      const double t = std::numbers::pi * j / 19.0;
      auto [p, m] = eve_eigenvalues(lambda, t);
      auto [ep, em] = explicit_conditional_eigs(lambda, t);
      EXPECT_NEAR(p, ep, 1e-12) << lambda << " " << t;
      EXPECT_NEAR(m, em, 1e-12);
      EXPECT_NEAR(p + m, 1, 1e-15);
    }
  }
}

TEST(LambdaOfBell, Examples) {
  EXPECT_NEAR(lambda_of_bell(2 * kSqrt5), 1.0, 1e-12);
  EXPECT_NEAR(lambda_of_bell(4.0), 0.5, 1e-15);
  EXPECT_NEAR(lambda_of_bell(std::sqrt(18.0)), 0.5 * (1 + std::sqrt(0.5)), 1e-12);
  try {
    lambda_of_bell(3.9);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OutOfRange);
  }
  EXPECT_THROW(lambda_of_bell(4.48), Error);
}

TEST(HolevoBound, Endpoints) {
  HolevoCurvePoint top = holevo_bound(2 * kSqrt5, 3);
  EXPECT_NEAR(top.chi_upper, 0, 1e-12);
  EXPECT_NEAR(top.entropy_lower, 1, 1e-12);
  HolevoCurvePoint bottom = holevo_bound(4.0, 3);
  EXPECT_NEAR(bottom.chi_upper, 1, 1e-12);
  EXPECT_NEAR(bottom.entropy_lower, 0, 1e-12);
  EXPECT_NEAR(holevo_bound(2 * std::sqrt(10.0), 4).chi_upper, 0, 1e-12);
  EXPECT_THROW(holevo_bound(3.0, 3), Error);
}

TEST(HolevoBound, StrictlyDecreasing) {
  for (int n = 2; n <= 6; ++n) {
    const double lo = 2.0 * (n - 1), hi = 2 * std::sqrt(1.0 + (n - 1) * (n - 1));
    double prev = 2;
    for (int k = 0; k <= 100; ++k) {
      const double chi = holevo_bound(lo + (hi - lo) * k / 100.0, n).chi_upper;
      EXPECT_LT(chi, prev);
      EXPECT_GE(chi, 0);
      EXPECT_LE(chi, 1);
      prev = chi;
    }
  }
}

TEST(BinaryEntropy, Values) {
  EXPECT_DOUBLE_EQ(binary_entropy(0.5), 1.0);
  EXPECT_EQ(binary_entropy(0.0), 0.0);
  EXPECT_EQ(binary_entropy(1.0), 0.0);
  EXPECT_NEAR(binary_entropy(0.11), 0.49992, 1e-4);
  EXPECT_NEAR(binary_entropy(0.11), binary_entropy(0.89), 1e-15);
  EXPECT_THROW(binary_entropy(-0.1), Error);
}

TEST(SaturatingStates, SameBoundForAllFour) {
  for (double lambda : {0.55, 0.7, 0.9, 1.0}) {
    double reference = -1;
    for (int which = 0; which < 4; ++which) {
      const double bell =
          horodecki_bell_max(correlation_tensor(saturating_state(which, lambda), 3));
      const double chi = holevo_bound(bell, 3).chi_upper;
      if (which == 0) reference = chi;
      EXPECT_NEAR(chi, reference, 1e-10) << which;
      EXPECT_NEAR(chi, binary_entropy(lambda), 1e-10);
      // Direct Holevo quantity: maximal for a sigma_z readout, and the bound
      // is tight there.
      EXPECT_NEAR(holevo_from_purification(which, lambda, 0.0), chi, 1e-10);
      for (double t : {0.2, 0.6, 1.1}) {
        EXPECT_LE(holevo_from_purification(which, lambda, t), chi + 1e-12);
      }
    }
  }
}

TEST(Comparison, Endpoints) {
  EXPECT_NEAR(*comparison_entropy(ComparisonCurve::ThisWork, 2 * kSqrt5), 1, 1e-12);
  EXPECT_NEAR(*comparison_entropy(ComparisonCurve::ThisWork, 4.0), 0, 1e-12);
  EXPECT_NEAR(*comparison_entropy(ComparisonCurve::Mabk, 4.0), 1, 1e-12);
  EXPECT_NEAR(*comparison_entropy(ComparisonCurve::ParityChsh, std::sqrt(2.0)), 1, 1e-12);
  EXPECT_NEAR(*comparison_entropy(ComparisonCurve::Holz, 1.5), 1, 1e-12);
  EXPECT_NEAR(*comparison_entropy(ComparisonCurve::Holz, 1.0), 0, 1e-12);
  EXPECT_FALSE(comparison_entropy(ComparisonCurve::Mabk, 2.0).has_value());
  EXPECT_FALSE(comparison_entropy(ComparisonCurve::Holz, 1.6).has_value());
}

TEST(Comparison, HolzArgumentStaysInRange) {
  for (int k = 0; k <= 200; ++k) {
    const double m = 1.0 + 0.5 * k / 200.0;
    const double arg = (m + 1 + std::sqrt(m * m + 2 * m - 3)) / 4;
    EXPECT_LE(arg, 1 + 1e-15);
    EXPECT_GE(arg, 0.5);
  }
}

TEST(Comparison, CurveTable) {
  auto rows = comparison_curves(11);
  ASSERT_EQ(rows.size(), 44u);
  for (const auto& r : rows) {
    ASSERT_TRUE(r.entropy.has_value());
    EXPECT_NEAR(*r.chi + *r.entropy, 1, 1e-15);
  }
  EXPECT_EQ(rows.front().curve, ComparisonCurve::ThisWork);
  EXPECT_EQ(rows.back().bell_value, 1.5);
}

}  // namespace
}  // namespace ghzcert
