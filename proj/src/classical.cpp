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

#include "ghzcert/classical.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <thread>

#include "ghzcert/errors.hpp"

namespace ghzcert {

namespace {

struct PackedTerm {
  std::uint32_t mask;  // strategy bits read by this correlator
  double coeff;
};

struct Best {
  std::uint64_t index = 0;
  double value = -INFINITY;
  bool set = false;
};

bool improves(double candidate, const Best& best) {
  if (!best.set) return true;
  return candidate > best.value + 1e-12 * std::max(1.0, std::abs(best.value));
}

Best scan(const std::vector<PackedTerm>& terms, std::uint64_t begin,
          std::uint64_t end) {
  Best best;
  for (std::uint64_t idx = begin; idx < end; ++idx) {
    const auto minus = static_cast<std::uint32_t>(~idx);
    double v = 0;
    for (const auto& t : terms) {
      v += (std::popcount(minus & t.mask) & 1) ? -t.coeff : t.coeff;
    }
    if (improves(v, best)) best = {idx, v, true};
  }
  return best;
}

void check_formula_arity(int n) {
  if (n < 3) {
    throw Error(ErrorKind::BadArity,
                "closed-form LHV bound defined for n >= 3, got " + std::to_string(n));
  }
}

}  // namespace

std::string DeterministicStrategy::str() const {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0 && i % 2 == 0) out += '|';
    out += values[i] > 0 ? '+' : '-';
  }
  return out;
}

LhvResult lhv_bound_enumerated(const BellExpression& expr, unsigned threads) {
  const int n = expr.parties();
  if (n > kMaxEnumerationParties) {
    throw Error(ErrorKind::TooLarge,
                "enumeration over 4^" + std::to_string(n) + " strategies refused");
  }
  const int bits = 2 * n;
  std::vector<PackedTerm> terms;
  for (const auto& [sel, c] : expr.terms()) {
    std::uint32_t mask = 0;
    for (int i = 0; i < n; ++i) {
      if (sel[i] != Setting::Absent) {
        mask |= std::uint32_t{1} << (bits - 1 - (2 * i + static_cast<int>(sel[i])));
      }
    }
    terms.push_back({mask, c});
  }

  const std::uint64_t total = std::uint64_t{1} << bits;
  unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  if (total < (std::uint64_t{1} << 14)) workers = 1;
  const std::uint64_t chunk = (total + workers - 1) / workers;

  std::vector<Best> partial(workers);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    const std::uint64_t begin = std::min<std::uint64_t>(total, w * chunk);
    const std::uint64_t end = std::min<std::uint64_t>(total, begin + chunk);
    pool.emplace_back([&, w, begin, end] { partial[w] = scan(terms, begin, end); });
  }
  for (auto& t : pool) t.join();

  Best best;
  for (const auto& p : partial) {
    if (p.set && improves(p.value, best)) best = p;
  }

  DeterministicStrategy witness;
  witness.values.resize(bits);
  for (int k = 0; k < bits; ++k) {
    witness.values[k] = ((best.index >> (bits - 1 - k)) & 1u) ? 1 : -1;
  }
  // Recompute in term order so the reported value is the witness's own.
  return {expr.deterministic_value(witness.values), witness};
}

double alpha_l(int n) {
  check_formula_arity(n);
  const double nn = n;
  return (2 * nn * nn - 2 * nn * std::sqrt(nn * nn - 2 * nn + 2) + nn - 1) /
         (4 * nn * nn - 5 * nn + 1);
}

std::optional<double> lhv_bound_formula(int n, double alpha) {
  check_formula_arity(n);
  if (!std::isfinite(alpha)) {
    throw Error(ErrorKind::BadRange, "alpha must be finite");
  }
  const double m = n - 1;
  if (alpha <= alpha_l(n)) return std::nullopt;
  if (alpha <= 1.0 / m) return 2 - m * (alpha - 1);
  return m * (alpha + 1);
}

}  // namespace ghzcert
