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

#include "ghzcert/holevo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ghzcert/errors.hpp"
#include "ghzcert/rng.hpp"

namespace ghzcert {

namespace {

constexpr double kEndpointSlack = 1e-12;

const std::vector<std::string>& table_operators() {
  static const std::vector<std::string> ops{"XXX", "XXZ", "XZX", "XZZ",
                                            "ZXI", "ZZI", "ZIX", "ZIZ"};
  return ops;
}

const ComplexMatrix& letter(char c) {
  switch (c) {
    case 'X': return pauli::x();
    case 'Y': return pauli::y();
    case 'Z': return pauli::z();
    default: return pauli::id();
  }
}

ComplexMatrix pauli_string(const std::string& s) {
  std::vector<ComplexMatrix> f;
  for (char c : s) f.push_back(letter(c));
  return kron_all(f);
}

int find_root(std::array<int, 8>& parent, int x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

double von_neumann(const ComplexMatrix& rho) {
  double s = 0;
  for (double l : hermitian_eig(rho).values) {
    if (l > 1e-15) s -= l * std::log2(l);
  }
  return s;
}

// Largest a . T (b (x) c) over unit vectors for a 3 x 9 tensor.
double product_contraction_max(const RealMatrix& t) {
  using Vec3 = Eigen::Vector3d;
  auto contract_a = [&](const Vec3& b, const Vec3& c) {
    Vec3 a = Vec3::Zero();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) a(i) += t(i, 3 * j + k) * b(j) * c(k);
    return a;
  };
  auto contract_b = [&](const Vec3& a, const Vec3& c) {
    Vec3 b = Vec3::Zero();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) b(j) += t(i, 3 * j + k) * a(i) * c(k);
    return b;
  };
  auto contract_c = [&](const Vec3& a, const Vec3& b) {
    Vec3 c = Vec3::Zero();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        for (int k = 0; k < 3; ++k) c(k) += t(i, 3 * j + k) * a(i) * b(j);
    return c;
  };
  auto unit = [](Vec3 v, const Vec3& fallback) {
    const double n = v.norm();
    return n > 1e-300 ? Vec3(v / n) : fallback;
  };

  if (t.cwiseAbs().maxCoeff() == 0.0) return 0.0;

  // First start from the leading singular vectors, then random restarts.
  std::vector<std::pair<Vec3, Vec3>> starts;
  {
    Eigen::JacobiSVD<RealMatrix> svd(t, Eigen::ComputeFullV);
    RealMatrix v = svd.matrixV().col(0);
    Eigen::Matrix3d bc;
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) bc(j, k) = v(3 * j + k);
    Eigen::JacobiSVD<Eigen::Matrix3d> inner(bc, Eigen::ComputeFullU | Eigen::ComputeFullV);
    starts.emplace_back(inner.matrixU().col(0), inner.matrixV().col(0));
  }
  Rng rng(0x7e50'4c11u);
  for (int r = 0; r < 10; ++r) {
    Vec3 b, c;
    for (int k = 0; k < 3; ++k) {
      b(k) = 2 * uniform01(rng) - 1;
      c(k) = 2 * uniform01(rng) - 1;
    }
    starts.emplace_back(unit(b, Vec3::UnitX()), unit(c, Vec3::UnitX()));
  }

  double best = 0;
  for (auto [b, c] : starts) {
    Vec3 a = unit(contract_a(b, c), Vec3::UnitX());
    double value = a.dot(contract_a(b, c));
    for (int it = 0; it < 10000; ++it) {
      b = unit(contract_b(a, c), b);
      c = unit(contract_c(a, b), c);
      a = unit(contract_a(b, c), a);
      const double next = a.dot(contract_a(b, c));
      const bool done = next - value <= 1e-16;
      value = next;
      if (done) break;
    }
    best = std::max(best, value);
  }
  return best;
}

double largest_singular_value(const RealMatrix& m) {
  return Eigen::JacobiSVD<RealMatrix>(m).singularValues()(0);
}

}  // namespace

StateVector ghz_basis_vector(int label) {
  if (label < 0 || label > 7) throw Error(ErrorKind::BadIndex, "GHZ label must be 0..7");
  const int i = label >> 2, j = (label >> 1) & 1, k = label & 1;
  StateVector v = StateVector::Zero(8);
  const double r = 1 / std::sqrt(2.0);
  v(2 * j + k) = r;
  v(4 + 2 * (1 - j) + (1 - k)) = i ? -r : r;
  return v;
}

std::string ghz_basis_name(int label) {
  std::string s = "ψ";
  for (int b = 2; b >= 0; --b) s += ((label >> b) & 1) ? '1' : '0';
  return s;
}

GhzClassification classify_ghz_basis(int n) {
  if (n != 3) {
    throw Error(ErrorKind::Unsupported, "GHZ basis classification is implemented for n = 3");
  }
  GhzClassification out;
  out.operators = table_operators();
  std::array<int, 8> parent;
  std::iota(parent.begin(), parent.end(), 0);
  std::vector<ComplexMatrix> mats;
  for (const auto& s : out.operators) mats.push_back(pauli_string(s));
  for (int label = 0; label < 8; ++label) {
    const StateVector v = ghz_basis_vector(label);
    for (const auto& m : mats) {
      const StateVector w = m * v;
      BasisImage img{-1, 0};
      for (int other = 0; other < 8; ++other) {
        const Complex overlap = ghz_basis_vector(other).dot(w);
        if (std::abs(std::abs(overlap) - 1) < 1e-12) {
          img = {other, overlap.real() > 0 ? 1 : -1};
          break;
        }
      }
      if (img.label < 0) {
        throw Error(ErrorKind::Unsupported, "operator does not permute the GHZ basis");
      }
      out.images[label].push_back(img);
      parent[find_root(parent, label)] = find_root(parent, img.label);
    }
  }
  const int root1 = find_root(parent, 0);
  for (int label = 0; label < 8; ++label) {
    out.class_of[label] = find_root(parent, label) == root1 ? 1 : 2;
  }
  return out;
}

CorrelationTensor correlation_tensor(const ComplexMatrix& rho, int n) {
  if (n < 2) throw Error(ErrorKind::BadArity, "correlation tensor needs n >= 2");
  if (n > kMaxTensorParties) {
    throw Error(ErrorKind::TooLarge, "correlation tensor limited to " +
                                         std::to_string(kMaxTensorParties) + " parties");
  }
  const Eigen::Index dim = Eigen::Index{1} << n;
  if (rho.rows() != dim || rho.cols() != dim) {
    throw Error(ErrorKind::DimensionMismatch, "density matrix is not 2^n square");
  }
  auto tau = [&](const std::vector<int>& l) {
    std::vector<ComplexMatrix> f;
    for (int x : l) f.push_back(pauli::by_index(x));
    return (kron_all(f).cwiseProduct(rho.transpose())).sum().real();
  };

  const int h = n / 2;
  int rows = 1, cols = 1;
  for (int k = 0; k < h; ++k) rows *= 3;
  for (int k = h; k < n; ++k) cols *= 3;
  CorrelationTensor t{n, RealMatrix::Zero(rows, cols), std::nullopt, std::nullopt};
  std::vector<int> l(n, 1);
  for (int idx = 0; idx < rows * cols; ++idx) {
    int rest = idx;
    for (int k = n - 1; k >= 0; --k) {
      l[k] = 1 + rest % 3;
      rest /= 3;
    }
    int m = 0, c = 0;
    for (int k = 0; k < h; ++k) m = 3 * m + (l[k] - 1);
    for (int k = h; k < n; ++k) c = 3 * c + (l[k] - 1);
    t.full(m, c) = tau(l);
  }
  if (n == 3) {
    RealMatrix a(3, 3), b(3, 3);
    for (int p = 1; p <= 3; ++p) {
      for (int q = 1; q <= 3; ++q) {
        a(p - 1, q - 1) = tau({p, q, 0});
        b(p - 1, q - 1) = tau({p, 0, q});
      }
    }
    t.without_third = a;
    t.without_second = b;
  }
  return t;
}

double horodecki_bell_max(const CorrelationTensor& t) {
  if (t.n != 3 || t.full.rows() != 3 || t.full.cols() != 9 || !t.without_third ||
      !t.without_second) {
    throw Error(ErrorKind::Unsupported, "Horodecki maximization needs the n = 3 tensor set");
  }
  const double t0 = product_contraction_max(t.full);
  const double t1 = largest_singular_value(*t.without_third);
  const double t2 = largest_singular_value(*t.without_second);
  return 2 * std::sqrt(t0 * t0 + (t1 + t2) * (t1 + t2));
}

std::pair<double, double> eve_eigenvalues(double lambda, double theta_prime) {
  if (!(lambda >= 0 && lambda <= 1)) {
    throw Error(ErrorKind::BadRange, "lambda must lie in [0, 1]");
  }
  const double q = 4 * lambda * (1 - lambda);
  const double c = std::cos(2 * theta_prime);
  const double r = std::sqrt(std::max(0.0, 1 - q + q * c * c));
  return {(1 + r) / 2, (1 - r) / 2};
}

double lambda_of_bell(double bell) {
  const double hi = 2 * std::sqrt(5.0);
  if (!(bell >= 4 - kEndpointSlack && bell <= hi + kEndpointSlack)) {
    throw Error(ErrorKind::OutOfRange, "Bell value outside [4, 2 sqrt 5]");
  }
  const double rad = std::clamp(bell * bell / 4 - 4, 0.0, 1.0);
  return (1 + std::sqrt(rad)) / 2;
}

HolevoCurvePoint holevo_bound(double bell, int n) {
  if (n < 2) throw Error(ErrorKind::BadArity, "need n >= 2");
  const double m = n - 1;
  const double lo = 2 * m, hi = 2 * std::sqrt(1 + m * m);
  if (!(bell >= lo - kEndpointSlack && bell <= hi + kEndpointSlack)) {
    throw Error(ErrorKind::OutOfRange, "Bell value outside the violation interval");
  }
  const double rad = std::clamp(bell * bell / 4 - m * m, 0.0, 1.0);
  const double chi = binary_entropy(0.5 + 0.5 * std::sqrt(rad));
  return {bell, chi, 1 - chi};
}

double binary_entropy(double p) {
  if (!(p >= 0 && p <= 1)) throw Error(ErrorKind::BadRange, "probability outside [0, 1]");
  if (p == 0 || p == 1) return 0;
  return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
}

ComplexMatrix saturating_state(int which, double lambda) {
  if (which < 0 || which > 3) throw Error(ErrorKind::BadIndex, "saturating state index 0..3");
  if (!(lambda >= 0 && lambda <= 1)) throw Error(ErrorKind::BadRange, "lambda outside [0, 1]");
  return lambda * projector(ghz_basis_vector(which)) +
         (1 - lambda) * projector(ghz_basis_vector(4 + which));
}

double holevo_from_purification(int which, double lambda, double theta_prime) {
  if (which < 0 || which > 3) throw Error(ErrorKind::BadIndex, "saturating state index 0..3");
  if (!(lambda >= 0 && lambda <= 1)) throw Error(ErrorKind::BadRange, "lambda outside [0, 1]");
  // |phi> = sqrt(l) |psi_a>|e0> + sqrt(1-l) |psi_b>|e1>, Eve's qubit last.
  const StateVector a = ghz_basis_vector(which), b = ghz_basis_vector(4 + which);
  StateVector phi = StateVector::Zero(16);
  for (int s = 0; s < 8; ++s) {
    phi(2 * s) = std::sqrt(lambda) * a(s);
    phi(2 * s + 1) = std::sqrt(1 - lambda) * b(s);
  }
  // rho over (party 3, Eve) after tracing out parties 1 and 2.
  ComplexMatrix rho3e = ComplexMatrix::Zero(4, 4);
  for (int p12 = 0; p12 < 4; ++p12) {
    const StateVector v = phi.segment(4 * p12, 4);
    rho3e += v * v.adjoint();
  }
  const double c = std::cos(theta_prime), s = std::sin(theta_prime);
  const std::array<Eigen::Vector2cd, 2> basis{Eigen::Vector2cd(c, s), Eigen::Vector2cd(s, -c)};
  ComplexMatrix rho_e = ComplexMatrix::Zero(2, 2);
  double conditional = 0;
  for (const auto& cv : basis) {
    ComplexMatrix block = ComplexMatrix::Zero(2, 2);
    for (int e = 0; e < 2; ++e)
      for (int f = 0; f < 2; ++f)
        for (int p = 0; p < 2; ++p)
          for (int q = 0; q < 2; ++q)
            block(e, f) += std::conj(cv(p)) * rho3e(2 * p + e, 2 * q + f) * cv(q);
    const double prob = block.trace().real();
    rho_e += block;
    if (prob > 1e-15) conditional += prob * von_neumann(block / prob);
  }
  return von_neumann(rho_e) - conditional;
}

std::string to_string(ComparisonCurve c) {
  switch (c) {
    case ComparisonCurve::ThisWork: return "this_work";
    case ComparisonCurve::Mabk: return "mabk";
    case ComparisonCurve::ParityChsh: return "parity_chsh";
    case ComparisonCurve::Holz: return "holz";
  }
  return "unknown";
}

std::pair<double, double> curve_domain(ComparisonCurve c) {
  switch (c) {
    case ComparisonCurve::ThisWork: return {4.0, 2 * std::sqrt(5.0)};
    case ComparisonCurve::Mabk: return {2 * std::sqrt(2.0), 4.0};
    case ComparisonCurve::ParityChsh: return {1.0, std::sqrt(2.0)};
    case ComparisonCurve::Holz: return {1.0, 1.5};
  }
  throw Error(ErrorKind::BadIndex, "unknown comparison curve");
}

std::optional<double> comparison_entropy(ComparisonCurve c, double m) {
  const auto [lo, hi] = curve_domain(c);
  if (!(m >= lo - kEndpointSlack && m <= hi + kEndpointSlack)) return std::nullopt;
  double arg = 0;
  switch (c) {
    case ComparisonCurve::ThisWork:
      arg = 0.5 + 0.5 * std::sqrt(std::clamp(m * m / 4 - 4, 0.0, 1.0));
      break;
    case ComparisonCurve::Mabk:
      arg = 0.5 + 0.5 * std::sqrt(std::clamp(m * m / 8 - 1, 0.0, 1.0));
      break;
    case ComparisonCurve::ParityChsh:
      arg = 0.5 + 0.5 * std::sqrt(std::clamp(m * m - 1, 0.0, 1.0));
      break;
    case ComparisonCurve::Holz:
      arg = (m + 1 + std::sqrt(std::max(0.0, m * m + 2 * m - 3))) / 4;
      break;
  }
  return 1 - binary_entropy(std::clamp(arg, 0.0, 1.0));
}

std::vector<ComparisonRow> comparison_curves(int points) {
  if (points < 2) throw Error(ErrorKind::BadRange, "need at least 2 points per curve");
  std::vector<ComparisonRow> rows;
  for (ComparisonCurve c : {ComparisonCurve::ThisWork, ComparisonCurve::Mabk,
                            ComparisonCurve::ParityChsh, ComparisonCurve::Holz}) {
    const auto [lo, hi] = curve_domain(c);
    for (int k = 0; k < points; ++k) {
      const double m = k == points - 1 ? hi : lo + (hi - lo) * k / (points - 1);
      const auto e = comparison_entropy(c, m);
      rows.push_back({c, m, e ? std::optional<double>(1 - *e) : std::nullopt, e});
    }
  }
  return rows;
}

}  // namespace ghzcert
