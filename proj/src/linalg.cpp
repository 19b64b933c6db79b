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

#include "ghzcert/linalg.hpp"

#include <cmath>
#include <string>

#include "ghzcert/errors.hpp"

namespace ghzcert {

namespace pauli {

const ComplexMatrix& id() {
  static const ComplexMatrix m = ComplexMatrix::Identity(2, 2);
  return m;
}

const ComplexMatrix& x() {
  static const ComplexMatrix m = [] {
    ComplexMatrix r(2, 2);
    r << 0, 1, 1, 0;
    return r;
  }();
  return m;
}

const ComplexMatrix& y() {
  static const ComplexMatrix m = [] {
    ComplexMatrix r(2, 2);
    r << 0, Complex(0, -1), Complex(0, 1), 0;
    return r;
  }();
  return m;
}

const ComplexMatrix& z() {
  static const ComplexMatrix m = [] {
    ComplexMatrix r(2, 2);
    r << 1, 0, 0, -1;
    return r;
  }();
  return m;
}

const ComplexMatrix& by_index(int l) {
  switch (l) {
    case 0: return id();
    case 1: return x();
    case 2: return y();
    case 3: return z();
    default:
      throw Error(ErrorKind::BadIndex,
                  "Pauli index " + std::to_string(l) + " not in 0..3");
  }
}

}  // namespace pauli

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

RealMatrix kron(const RealMatrix& a, const RealMatrix& b) {
  RealMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix kron_all(std::span<const ComplexMatrix> factors) {
  ComplexMatrix out = ComplexMatrix::Identity(1, 1);
  for (const auto& f : factors) out = kron(out, f);
  return out;
}

bool is_hermitian(const ComplexMatrix& m, double tolerance) {
  if (m.rows() != m.cols()) return false;
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = i; j < m.cols(); ++j) {
      if (std::abs(m(i, j) - std::conj(m(j, i))) > tolerance) return false;
    }
  }
  return true;
}

EigenDecomposition hermitian_eig(const ComplexMatrix& m) {
  if (!is_hermitian(m)) {
    throw Error(ErrorKind::NonHermitian,
                "matrix of size " + std::to_string(m.rows()) + "x" +
                    std::to_string(m.cols()) + " is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m);
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double max_eigenvalue(const ComplexMatrix& m) {
  if (!is_hermitian(m)) {
    throw Error(ErrorKind::NonHermitian, "max_eigenvalue of non-Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(solver.eigenvalues().size() - 1);
}

StateVector ghz_state(int n) {
  if (n < 2) {
    throw Error(ErrorKind::BadArity,
                "GHZ state needs at least 2 parties, got " + std::to_string(n));
  }
  if (n > kMaxParties) {
    throw Error(ErrorKind::TooLarge,
                "GHZ state capped at " + std::to_string(kMaxParties) + " parties");
  }
  const Eigen::Index dim = Eigen::Index{1} << n;
  StateVector v = StateVector::Zero(dim);
  v(0) = v(dim - 1) = 1.0 / std::sqrt(2.0);
  return v;
}

ComplexMatrix projector(const StateVector& v) { return v * v.adjoint(); }

StateVector apply_local(std::span<const ComplexMatrix> ops,
                        const StateVector& v) {
  Eigen::Index total = 1;
  for (const auto& op : ops) {
    if (op.rows() != op.cols()) {
      throw Error(ErrorKind::DimensionMismatch, "local operator not square");
    }
    total *= op.rows();
  }
  if (total != v.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                "local operators span dimension " + std::to_string(total) +
                    " but vector has " + std::to_string(v.size()));
  }
  StateVector cur = v;
  StateVector next(v.size());
  Eigen::Index inner = total;
  for (const auto& op : ops) {
    const Eigen::Index d = op.rows();
    inner /= d;
    const Eigen::Index outer = total / (inner * d);
    for (Eigen::Index o = 0; o < outer; ++o) {
      for (Eigen::Index in = 0; in < inner; ++in) {
        const Eigen::Index base = o * d * inner + in;
        for (Eigen::Index r = 0; r < d; ++r) {
          Complex acc = 0;
          for (Eigen::Index c = 0; c < d; ++c) {
            acc += op(r, c) * cur(base + c * inner);
          }
          next(base + r * inner) = acc;
        }
      }
    }
    std::swap(cur, next);
  }
  return cur;
}

bool is_normalized(const StateVector& v, double tolerance) {
  return std::abs(v.squaredNorm() - 1.0) <= tolerance;
}

}  // namespace ghzcert
