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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ghzcert/linalg.hpp"

namespace ghzcert {

/// psi_ijk = (|0 j k> + (-1)^i |1 ~j ~k>) / sqrt(2); label = 4i + 2j + k.
StateVector ghz_basis_vector(int label);

/// "ψ101" style name for a three-bit label.
std::string ghz_basis_name(int label);

struct BasisImage {
  int label;
  int sign;  // +1 or -1
};

struct GhzClassification {
  /// Pauli strings in the column order used for the table, e.g. "XXZ", "ZIX".
  std::vector<std::string> operators;
  /// images[label][op] = sign * psi_image.
  std::array<std::vector<BasisImage>, 8> images;
  /// Class index 1 or 2 for each label; class 1 contains psi_000.
  std::array<int, 8> class_of;
};

/// Action of the eight Pauli products occurring in B_3 on the GHZ basis.
/// Throws Unsupported unless n == 3.
GhzClassification classify_ghz_basis(int n = 3);

struct CorrelationTensor {
  int n;
  /// 3^floor(n/2) x 3^ceil(n/2) block of full Pauli correlators.
  RealMatrix full;
  /// n == 3 only: two-party correlators with party 3 (T') or party 2 (T'')
  /// traced out.
  std::optional<RealMatrix> without_third;
  std::optional<RealMatrix> without_second;
};

inline constexpr int kMaxTensorParties = 6;

CorrelationTensor correlation_tensor(const ComplexMatrix& rho, int n);

/// 2 sqrt(t0^2 + (t1 + t2)^2) with t0 the largest product-vector contraction
/// of T and t1, t2 the largest singular values of T', T''.
double horodecki_bell_max(const CorrelationTensor& t);

/// Eigenvalues (larger first) of Eve's state conditioned on a projective
/// measurement at angle theta_prime on party 3 of rho_lambda.
std::pair<double, double> eve_eigenvalues(double lambda, double theta_prime);

/// Upper-branch inversion of B = 2 sqrt((2 lambda - 1)^2 + 4).
double lambda_of_bell(double bell);

struct HolevoCurvePoint {
  double bell_value;
  double chi_upper;
  double entropy_lower;
};

/// chi <= h(1/2 + 1/2 sqrt(B^2/4 - (n-1)^2)); bell in [2(n-1), 2 sqrt(1+(n-1)^2)].
HolevoCurvePoint holevo_bound(double bell, int n);

double binary_entropy(double p);

/// rho_lambda_{0jk} = lambda |psi_0jk><psi_0jk| + (1 - lambda) |psi_1jk><psi_1jk|
/// for which = 2j + k in 0..3.
ComplexMatrix saturating_state(int which, double lambda);

/// Holevo quantity between party 3's outcome (basis at theta_prime) and Eve,
/// computed from the purification of saturating_state(which, lambda).
double holevo_from_purification(int which, double lambda, double theta_prime);

enum class ComparisonCurve { ThisWork, Mabk, ParityChsh, Holz };

std::string to_string(ComparisonCurve c);

/// Closed interval of Bell values where the curve's formula is real and its
/// h-argument lies in [1/2, 1].
std::pair<double, double> curve_domain(ComparisonCurve c);

/// Entropy lower bound at Bell value m; nullopt outside the domain.
std::optional<double> comparison_entropy(ComparisonCurve c, double m);

struct ComparisonRow {
  ComparisonCurve curve;
  double bell_value;
  std::optional<double> chi;
  std::optional<double> entropy;
};

/// `points` evenly spaced samples over each curve's own domain.
std::vector<ComparisonRow> comparison_curves(int points);

}  // namespace ghzcert
