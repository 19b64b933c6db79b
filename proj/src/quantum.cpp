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

#include "ghzcert/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>
#include <string>
#include <thread>

#include <boost/math/tools/minima.hpp>

#include "ghzcert/errors.hpp"
#include "ghzcert/rng.hpp"

namespace ghzcert {

namespace {

void check_arity(int n) {
  if (n < 2) {
    throw Error(ErrorKind::BadArity, "need n >= 2, got " + std::to_string(n));
  }
}

void check_dims(const BellExpression& expr, const ObservableSet& obs) {
  if (expr.parties() != obs.parties()) {
    throw Error(ErrorKind::DimensionMismatch,
                "expression has " + std::to_string(expr.parties()) +
                    " parties, observables " + std::to_string(obs.parties()));
  }
}

double top_eigenvalue(const RealMatrix& m) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(solver.eigenvalues().size() - 1);
}

// B = rest + cos(theta) z_part + sin(theta) x_part as a function of the
// angle of one (party, setting).
struct CoordinateSlice {
  RealMatrix rest, z_part, x_part;

  double at(double theta) const {
    return top_eigenvalue(rest + std::cos(theta) * z_part +
                          std::sin(theta) * x_part);
  }
};

CoordinateSlice slice(const BellExpression& expr, const ObservableSet& obs,
                      int party, int setting) {
  const int n = expr.parties();
  const Eigen::Index dim = Eigen::Index{1} << n;
  CoordinateSlice s{RealMatrix::Zero(dim, dim), RealMatrix::Zero(dim, dim),
                    RealMatrix::Zero(dim, dim)};
  RealMatrix zm(2, 2), xm(2, 2);
  zm << 1, 0, 0, -1;
  xm << 0, 1, 1, 0;
  const RealMatrix id2 = RealMatrix::Identity(2, 2);
  for (const auto& [sel, c] : expr.terms()) {
    if (c == 0.0) continue;
    const bool touches =
        sel[party] != Setting::Absent && static_cast<int>(sel[party]) == setting;
    auto product_with = [&](const RealMatrix* replacement) {
      RealMatrix p = RealMatrix::Identity(1, 1);
      for (int i = 0; i < n; ++i) {
        if (i == party && replacement) {
          p = kron(p, *replacement);
        } else if (sel[i] == Setting::Absent) {
          p = kron(p, id2);
        } else {
          p = kron(p, real_observable(obs.angle(i, static_cast<int>(sel[i]))));
        }
      }
      return p;
    };
    if (touches) {
      s.z_part += c * product_with(&zm);
      s.x_part += c * product_with(&xm);
    } else {
      s.rest += c * product_with(nullptr);
    }
  }
  return s;
}

struct LocalResult {
  ObservableSet angles;
  double value;
};

LocalResult coordinate_ascent(const BellExpression& expr, ObservableSet obs,
                              int max_sweeps) {
  constexpr int kScan = 12;
  constexpr double kTwoPi = 2 * std::numbers::pi;
  const int n = expr.parties();
  const int bits = std::numeric_limits<double>::digits / 2;
  double value = top_eigenvalue(to_real_operator(expr, obs));
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    const double before = value;
    for (int party = 0; party < n; ++party) {
      for (int setting = 0; setting < 2; ++setting) {
        const CoordinateSlice s = slice(expr, obs, party, setting);
        const double theta0 = obs.angle(party, setting);
        double best_theta = theta0;
        double best = s.at(theta0);
        for (int k = 1; k < kScan; ++k) {
          const double t = theta0 + kTwoPi * k / kScan;
          if (const double v = s.at(t); v > best) {
            best = v;
            best_theta = t;
          }
        }
        const double h = kTwoPi / kScan;
        auto [t, neg] = boost::math::tools::brent_find_minima(
            [&](double th) { return -s.at(th); }, best_theta - h, best_theta + h,
            bits);
        if (-neg > best) {
          best = -neg;
          best_theta = t;
        }
        if (best > value) {
          value = best;
          obs.set_angle(party, setting, std::remainder(best_theta, kTwoPi));
        }
      }
    }
    if (value - before < 1e-13) break;
  }
  return {std::move(obs), value};
}

}  // namespace

double theorem1_bound(int n, double alpha) {
  check_arity(n);
  if (!std::isfinite(alpha)) throw Error(ErrorKind::BadRange, "alpha must be finite");
  const double m = n - 1;
  return std::sqrt(1 + m * m * alpha * alpha) + std::sqrt(1 + m * m);
}

ObservableSet optimal_angles(int n, double alpha) {
  check_arity(n);
  if (!std::isfinite(alpha)) throw Error(ErrorKind::BadRange, "alpha must be finite");
  const double m = n - 1;
  std::vector<std::array<double, 2>> a(n);
  a[0] = {std::atan2(1.0, m * alpha), std::atan2(1.0, -m)};
  for (int i = 1; i < n; ++i) a[i] = {std::numbers::pi / 2, 0.0};
  return ObservableSet(std::move(a));
}

double max_eigenvalue_bound(const BellExpression& expr, const ObservableSet& obs) {
  check_dims(expr, obs);
  if (expr.parties() > kMaxEigenParties) {
    throw Error(ErrorKind::TooLarge, "eigensolve limited to " +
                                         std::to_string(kMaxEigenParties) + " parties");
  }
  return top_eigenvalue(to_real_operator(expr, obs));
}

double ghz_expectation(const BellExpression& expr, const ObservableSet& obs) {
  check_dims(expr, obs);
  const int n = expr.parties();
  const StateVector ghz = ghz_state(n);
  std::vector<ComplexMatrix> ops(n);
  double total = 0;
  for (const auto& [sel, c] : expr.terms()) {
    if (c == 0.0) continue;
    for (int i = 0; i < n; ++i) {
      ops[i] = sel[i] == Setting::Absent
                   ? pauli::id()
                   : obs.observable(i, static_cast<int>(sel[i]));
    }
    total += c * ghz.dot(apply_local(ops, ghz)).real();
  }
  return total;
}

AngleSearchResult optimize_angles(const BellExpression& expr,
                                  const AngleSearchOptions& options) {
  const int n = expr.parties();
  if (options.starts < 1) {
    throw Error(ErrorKind::BadRange, "angle search needs at least one start");
  }
  if (n > kMaxEigenParties) {
    throw Error(ErrorKind::TooLarge, "angle search limited to " +
                                         std::to_string(kMaxEigenParties) + " parties");
  }
  std::vector<ObservableSet> starts;
  for (int k = 0; k < options.starts; ++k) {
    if (k == 0 && options.initial) {
      check_dims(expr, *options.initial);
      starts.push_back(*options.initial);
      continue;
    }
    Rng rng(derive_seed(options.seed, static_cast<std::uint64_t>(k)));
    std::vector<std::array<double, 2>> a(n);
    for (auto& p : a) {
      p = {std::numbers::pi * uniform01(rng), std::numbers::pi * uniform01(rng)};
    }
    starts.emplace_back(std::move(a));
  }

  std::vector<std::optional<LocalResult>> results(starts.size());
  const unsigned workers = std::max(
      1u, std::min<unsigned>(options.threads ? options.threads
                                             : std::thread::hardware_concurrency(),
                             static_cast<unsigned>(starts.size())));
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t k = w; k < starts.size(); k += workers) {
        results[k] = coordinate_ascent(expr, starts[k], options.max_sweeps);
      }
    });
  }
  for (auto& t : pool) t.join();

  std::size_t best = 0;
  for (std::size_t k = 1; k < results.size(); ++k) {
    if (results[k]->value > results[best]->value) best = k;
  }
  return {results[best]->angles, results[best]->value, static_cast<int>(best)};
}

nlohmann::json SelfTestReport::to_json() const {
  return {{"ancilla_fidelity", ancilla_fidelity},
          {"observable_fidelities", observable_fidelities},
          {"bell_value", bell_value},
          {"theorem1_bound", theorem1_bound}};
}

BlockState random_block_state(int n, int blocks_per_party, int count, std::uint64_t seed) {
  if (n < 2 || n > kMaxParties) throw Error(ErrorKind::BadArity, "bad party count");
  if (blocks_per_party < 1 || blocks_per_party > kMaxBlocksPerParty || count < 1 ||
      std::pow(static_cast<double>(blocks_per_party), n) < count) {
    throw Error(ErrorKind::BadBlocks, "cannot draw that many distinct block tuples");
  }
  Rng rng(seed);
  std::set<std::vector<int>> tuples;
  while (static_cast<int>(tuples.size()) < count) {
    std::vector<int> t(n);
    for (int& k : t) k = static_cast<int>(rng() % static_cast<std::uint64_t>(blocks_per_party));
    tuples.insert(t);
  }
  BlockState s{blocks_per_party, {}};
  double total = 0;
  for (const auto& t : tuples) {
    s.blocks.push_back({0.05 + 0.95 * uniform01(rng), t});
    total += s.blocks.back().weight;
  }
  for (auto& b : s.blocks) b.weight /= total;
  return s;
}

SelfTestReport selftest_verify(const BlockState& state, int n, double alpha) {
  check_arity(n);
  const int blocks = state.blocks_per_party;
  if (blocks < 1 || blocks > kMaxBlocksPerParty) {
    throw Error(ErrorKind::BadBlocks, "blocks per party must be in 1.." +
                                          std::to_string(kMaxBlocksPerParty));
  }
  if (state.blocks.empty()) throw Error(ErrorKind::BadBlocks, "no blocks given");
  double weight_sum = 0;
  std::set<std::vector<int>> seen;
  for (const auto& b : state.blocks) {
    if (!(b.weight >= 0) || !std::isfinite(b.weight)) {
      throw Error(ErrorKind::BadBlocks, "block weight must be >= 0");
    }
    if (static_cast<int>(b.index.size()) != n) {
      throw Error(ErrorKind::BadBlocks, "block index tuple length differs from n");
    }
    for (int k : b.index) {
      if (k < 0 || k >= blocks) throw Error(ErrorKind::BadBlocks, "block index out of range");
    }
    if (!seen.insert(b.index).second) {
      throw Error(ErrorKind::BadBlocks, "duplicate block index tuple");
    }
    weight_sum += b.weight;
  }
  if (std::abs(weight_sum - 1) > 1e-12) {
    throw Error(ErrorKind::BadBlocks, "block weights sum to " + std::to_string(weight_sum));
  }

  const Eigen::Index local = 2 * blocks;
  Eigen::Index primary_dim = 1;
  for (int i = 0; i < n; ++i) primary_dim *= local;
  const Eigen::Index anc_dim = Eigen::Index{1} << n;
  if (primary_dim * anc_dim > (Eigen::Index{1} << 22)) {
    throw Error(ErrorKind::TooLarge, "block realization too large");
  }

  // Tilde state.
  StateVector tilde = StateVector::Zero(primary_dim);
  for (const auto& b : state.blocks) {
    Eigen::Index even = 0, odd = 0;
    for (int i = 0; i < n; ++i) {
      even = even * local + 2 * b.index[i];
      odd = odd * local + 2 * b.index[i] + 1;
    }
    const double amp = std::sqrt(b.weight / 2);
    tilde(even) += amp;
    tilde(odd) += amp;
  }

  const ObservableSet reference = optimal_angles(n, alpha);
  const ComplexMatrix block_id = ComplexMatrix::Identity(blocks, blocks);
  auto tilde_observable = [&](int party, int setting) {
    return kron(block_id, reference.observable(party, setting));
  };

  // Phi: primary index with digits 2k_i + b_i -> (digits 2k_i) (x) ancilla bits b_i.
  auto isometry = [&](const StateVector& in) {
    StateVector out = StateVector::Zero(primary_dim * anc_dim);
    for (Eigen::Index j = 0; j < primary_dim; ++j) {
      if (in(j) == Complex(0)) continue;
      Eigen::Index rest = j, base = 0, place = 1, anc = 0;
      for (int i = n - 1; i >= 0; --i) {
        const Eigen::Index digit = rest % local;
        rest /= local;
        base += (digit - digit % 2) * place;
        place *= local;
        if (digit % 2) anc |= Eigen::Index{1} << (n - 1 - i);
      }
      out(base * anc_dim + anc) += in(j);
    }
    return out;
  };

  const StateVector ghz = ghz_state(n);
  const StateVector mapped = isometry(tilde);

  SelfTestReport report{};
  StateVector junk = StateVector::Zero(primary_dim);
  double fid = 0;
  for (Eigen::Index p = 0; p < primary_dim; ++p) {
    const Complex overlap = ghz.dot(mapped.segment(p * anc_dim, anc_dim));
    junk(p) = overlap;
    fid += std::norm(overlap);
  }
  report.ancilla_fidelity = fid;
  junk.normalize();

  for (int party = 0; party < n; ++party) {
    for (int setting = 0; setting < 2; ++setting) {
      std::vector<ComplexMatrix> ops(n, ComplexMatrix::Identity(local, local));
      ops[party] = tilde_observable(party, setting);
      const StateVector out = isometry(apply_local(ops, tilde));
      std::vector<ComplexMatrix> ref_ops(n, pauli::id());
      ref_ops[party] = reference.observable(party, setting);
      const StateVector target =
          kron(ComplexMatrix(junk), ComplexMatrix(apply_local(ref_ops, ghz)));
      const double f = std::norm(target.dot(out)) /
                       (target.squaredNorm() * out.squaredNorm());
      report.observable_fidelities["A" + std::to_string(party + 1) +
                                   std::to_string(setting)] = f;
    }
  }

  const BellExpression expr = build_bell(n, alpha);
  double bell = 0;
  for (const auto& [sel, c] : expr.terms()) {
    std::vector<ComplexMatrix> ops(n, ComplexMatrix::Identity(local, local));
    for (int i = 0; i < n; ++i) {
      if (sel[i] != Setting::Absent) ops[i] = tilde_observable(i, static_cast<int>(sel[i]));
    }
    bell += c * tilde.dot(apply_local(ops, tilde)).real();
  }
  report.bell_value = bell;
  report.theorem1_bound = theorem1_bound(n, alpha);
  return report;
}

}  // namespace ghzcert
