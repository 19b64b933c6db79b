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

#include "ghzcert/randomness.hpp"

#include <cmath>
#include <string>

#include "ghzcert/classical.hpp"
#include "ghzcert/errors.hpp"
#include "ghzcert/quantum.hpp"

namespace ghzcert {

namespace {

std::vector<ComplexMatrix> rotations(const ObservableSet& obs, std::uint32_t x) {
  const int n = obs.parties();
  std::vector<ComplexMatrix> u(n);
  for (int i = 0; i < n; ++i) {
    u[i] = obs.measurement_basis(i, party_bit(x, i, n)).cast<Complex>();
  }
  return u;
}

void check_dim(Eigen::Index dim, const ObservableSet& obs) {
  if (dim != (Eigen::Index{1} << obs.parties())) {
    throw Error(ErrorKind::DimensionMismatch,
                "state dimension " + std::to_string(dim) + " does not match " +
                    std::to_string(obs.parties()) + " qubits");
  }
}

}  // namespace

Behavior born_behavior(const StateVector& psi, const ObservableSet& obs) {
  check_dim(psi.size(), obs);
  const std::uint32_t d = std::uint32_t{1} << obs.parties();
  std::vector<double> table(std::size_t{d} * d);
  for (std::uint32_t x = 0; x < d; ++x) {
    const StateVector amp = apply_local(rotations(obs, x), psi);
    for (std::uint32_t a = 0; a < d; ++a) table[std::size_t{x} * d + a] = std::norm(amp(a));
  }
  return Behavior(obs.parties(), std::move(table));
}

Behavior born_behavior(const ComplexMatrix& rho, const ObservableSet& obs) {
  check_dim(rho.rows(), obs);
  if (rho.cols() != rho.rows()) {
    throw Error(ErrorKind::DimensionMismatch, "density matrix must be square");
  }
  const std::uint32_t d = std::uint32_t{1} << obs.parties();
  std::vector<double> table(std::size_t{d} * d);
  for (std::uint32_t x = 0; x < d; ++x) {
    const ComplexMatrix u = kron_all(rotations(obs, x));
    const ComplexMatrix rotated = u * rho * u.adjoint();
    for (std::uint32_t a = 0; a < d; ++a) {
      table[std::size_t{x} * d + a] = rotated(a, a).real();
    }
  }
  return Behavior(obs.parties(), std::move(table));
}

double guessing_probability(const Behavior& b, const SettingSelector& x) {
  if (x.parties() != b.parties() || !x.is_full()) {
    throw Error(ErrorKind::BadSelector, "guessing needs a full setting tuple, got '" +
                                            x.str() + "'");
  }
  double best = 0;
  for (double p : b.distribution(x.setting_mask())) best = std::max(best, p);
  return best;
}

GlobalEntropy min_entropy_global(const Behavior& b) {
  const int n = b.parties();
  std::uint32_t best_x = 0;
  double best_g = guessing_probability(b, SettingSelector::full(n, 0));
  for (std::uint32_t x = 1; x < b.dim(); ++x) {
    const double g = guessing_probability(b, SettingSelector::full(n, x));
    if (g < best_g * (1 - 1e-12)) {
      best_g = g;
      best_x = x;
    }
  }
  return {-std::log2(best_g), SettingSelector::full(n, best_x)};
}

double min_entropy_local(const Behavior& b, int party, int setting) {
  if (party < 0 || party >= b.parties() || setting < 0 || setting > 1) {
    throw Error(ErrorKind::BadIndex, "party " + std::to_string(party) + ", setting " +
                                         std::to_string(setting));
  }
  const double p0 = b.marginal(party, setting, 0);
  return -std::log2(std::max(p0, 1 - p0));
}

double optimal_guessing_probability(int n, double alpha) {
  if (n < 2) throw Error(ErrorKind::BadArity, "need n >= 2");
  const double m = n - 1;
  return (1 + 1 / std::sqrt(1 + m * m * alpha * alpha)) / std::ldexp(1.0, n);
}

nlohmann::json CertReport::to_json() const {
  nlohmann::json local = nlohmann::json::array();
  for (const auto& s : min_entropy_local) local.push_back({s[0], s[1]});
  return {{"n", n},
          {"alpha", alpha},
          {"bell_value", bell_value},
          {"lhv_bound", lhv_bound},
          {"quantum_bound", quantum_bound},
          {"violates_lhv", violates_lhv},
          {"guessing_probability_global", guessing_probability_global},
          {"min_entropy_global", min_entropy_global},
          {"settings_used", settings_used.str()},
          {"min_entropy_local", local}};
}

CertReport certify_behavior(const BellExpression& expr, const Behavior& b) {
  const int n = expr.parties();
  if (b.parties() != n) {
    throw Error(ErrorKind::DimensionMismatch, "behavior and expression disagree on n");
  }
  CertReport r{};
  r.n = n;
  r.alpha = expr.alpha();
  r.bell_value = eval_on_behavior(expr, b);
  r.lhv_bound = lhv_bound_enumerated(expr).value;
  r.quantum_bound = theorem1_bound(n, expr.alpha());
  r.violates_lhv = r.bell_value > r.lhv_bound + 1e-9;
  const GlobalEntropy g = min_entropy_global(b);
  r.min_entropy_global = g.bits;
  r.settings_used = g.best_x;
  r.guessing_probability_global = guessing_probability(b, g.best_x);
  for (int i = 0; i < n; ++i) {
    r.min_entropy_local.push_back({min_entropy_local(b, i, 0), min_entropy_local(b, i, 1)});
  }
  return r;
}

CertReport certify_optimal(int n, double alpha) {
  return certify_behavior(build_bell(n, alpha),
                          born_behavior(ghz_state(n), optimal_angles(n, alpha)));
}

}  // namespace ghzcert
