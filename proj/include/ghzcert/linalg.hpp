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

// Dense complex linear algebra used for every 2^N-dimensional operator.
// Party 0 is always the most significant tensor factor.

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace ghzcert {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using StateVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

namespace tol {
inline constexpr double kHerm = 1e-10;
inline constexpr double kEig = 1e-9;
inline constexpr double kNorm = 1e-12;
}  // namespace tol

/// Operators are dense 2^n x 2^n, so party counts are capped here.
inline constexpr int kMaxParties = 12;

namespace pauli {
const ComplexMatrix& id();
const ComplexMatrix& x();
const ComplexMatrix& y();
const ComplexMatrix& z();
/// sigma_0..sigma_3 = I, X, Y, Z.
const ComplexMatrix& by_index(int l);
}  // namespace pauli

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix kron_all(std::span<const ComplexMatrix> factors);
RealMatrix kron(const RealMatrix& a, const RealMatrix& b);

bool is_hermitian(const ComplexMatrix& m, double tolerance = tol::kHerm);

struct EigenDecomposition {
  RealVector values;      // ascending
  ComplexMatrix vectors;  // column k pairs with values[k]
};

/// Throws NonHermitian when m is not Hermitian within tol::kHerm.
EigenDecomposition hermitian_eig(const ComplexMatrix& m);

/// Largest eigenvalue of a Hermitian matrix.
double max_eigenvalue(const ComplexMatrix& m);

/// (|0...0> + |1...1>)/sqrt(2); throws BadArity for n < 2.
StateVector ghz_state(int n);

ComplexMatrix projector(const StateVector& v);

/// Applies ops[0] (x) ops[1] (x) ... to v without materializing the product.
/// Each ops[i] is square; v.size() must equal the product of their sizes.
StateVector apply_local(std::span<const ComplexMatrix> ops,
                        const StateVector& v);

/// Real unit-norm check against tol::kNorm.
bool is_normalized(const StateVector& v, double tolerance = tol::kNorm);

}  // namespace ghzcert
