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

#include "ghzcert/simulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <ostream>
#include <thread>

#include <unsupported/Eigen/FFT>

#include "ghzcert/classical.hpp"
#include "ghzcert/errors.hpp"
#include "ghzcert/randomness.hpp"
#include "ghzcert/rng.hpp"

namespace ghzcert {

namespace {

std::uint32_t draw(const std::vector<double>& cumulative, double u) {
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  const auto idx = static_cast<std::uint32_t>(it - cumulative.begin());
  return std::min<std::uint32_t>(idx, static_cast<std::uint32_t>(cumulative.size() - 1));
}

std::vector<double> cumulative(std::span<const double> w) {
  std::vector<double> c(w.size());
  double s = 0;
  for (std::size_t i = 0; i < w.size(); ++i) c[i] = (s += w[i]);
  for (double& v : c) v /= s;
  return c;
}

std::string bit_string(std::uint32_t v, int n) {
  std::string s;
  for (int i = 0; i < n; ++i) s += static_cast<char>('0' + party_bit(v, i, n));
  return s;
}

}  // namespace

ComplexMatrix NoiseModel::density(int n) const {
  if (!(visibility >= 0.0 && visibility <= 1.0)) {
    throw Error(ErrorKind::BadRange, "visibility must lie in [0, 1]");
  }
  const StateVector g = ghz_state(n);
  const auto d = g.size();
  return visibility * projector(g) +
         ((1.0 - visibility) / static_cast<double>(d)) * ComplexMatrix::Identity(d, d);
}

InputDistribution InputDistribution::uniform(int n) {
  return oversampled(n, 0, 1.0);
}

InputDistribution InputDistribution::oversampled(int n, std::uint32_t target, double factor) {
  if (n < 1 || n > kMaxParties) throw Error(ErrorKind::BadArity, "bad party count");
  const std::uint32_t d = std::uint32_t{1} << n;
  if (target >= d) throw Error(ErrorKind::BadSelector, "target tuple out of range");
  if (!(factor > 0.0) || !std::isfinite(factor)) {
    throw Error(ErrorKind::BadRange, "oversampling factor must be positive");
  }
  InputDistribution q;
  q.weights.assign(d, 1.0);
  q.weights[target] = factor;
  const double total = d - 1 + factor;
  for (double& w : q.weights) w /= total;
  return q;
}

int InputDistribution::parties() const {
  return std::countr_zero(static_cast<std::uint32_t>(weights.size()));
}

std::vector<TrialRecord> sample_trials(const NoiseModel& noise, const ObservableSet& obs,
                                       const InputDistribution& inputs, std::uint64_t rounds,
                                       std::uint64_t seed, unsigned threads) {
  const int n = obs.parties();
  if (rounds < 1) throw Error(ErrorKind::BadRange, "rounds must be at least 1");
  if (inputs.weights.size() != (std::size_t{1} << n)) {
    throw Error(ErrorKind::DimensionMismatch, "input distribution has the wrong size");
  }
  const Behavior b = born_behavior(noise.density(n), obs);
  const std::vector<double> x_cum = cumulative(inputs.weights);
  std::vector<std::vector<double>> a_cum;
  for (std::uint32_t x = 0; x < b.dim(); ++x) a_cum.push_back(cumulative(b.distribution(x)));

  std::vector<TrialRecord> out(rounds);
  const std::uint64_t chunks = (rounds + kChunkRounds - 1) / kChunkRounds;
  const unsigned workers = static_cast<unsigned>(std::max<std::uint64_t>(
      1, std::min<std::uint64_t>(threads ? threads : std::thread::hardware_concurrency(), chunks)));
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::uint64_t c = w; c < chunks; c += workers) {
        Rng rng(derive_seed(seed, c));
        const std::uint64_t end = std::min(rounds, (c + 1) * kChunkRounds);
        for (std::uint64_t r = c * kChunkRounds; r < end; ++r) {
          const std::uint32_t x = draw(x_cum, uniform01(rng));
          const std::uint32_t a = draw(a_cum[x], uniform01(rng));
          out[r] = {r, x, a};
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  return out;
}

Counts Counts::tally(int n, const std::vector<TrialRecord>& records) {
  Counts c;
  c.n = n;
  const std::uint32_t d = std::uint32_t{1} << n;
  c.table.assign(static_cast<std::size_t>(d) * d, 0.0);
  for (const auto& r : records) {
    if (r.x >= d || r.a >= d) throw Error(ErrorKind::BadIndex, "record does not fit n parties");
    c.table[static_cast<std::size_t>(r.x) * d + r.a] += 1;
  }
  return c;
}

Counts Counts::expected(const Behavior& b, const InputDistribution& inputs, double rounds) {
  Counts c;
  c.n = b.parties();
  const std::uint32_t d = b.dim();
  if (inputs.weights.size() != d) {
    throw Error(ErrorKind::DimensionMismatch, "input distribution has the wrong size");
  }
  c.table.resize(static_cast<std::size_t>(d) * d);
  for (std::uint32_t x = 0; x < d; ++x)
    for (std::uint32_t a = 0; a < d; ++a)
      c.table[static_cast<std::size_t>(x) * d + a] = rounds * inputs.weights[x] * b.p(a, x);
  return c;
}

BellEstimate empirical_bell(const Counts& counts, const BellExpression& expr) {
  const int n = expr.parties();
  if (counts.n != n) throw Error(ErrorKind::DimensionMismatch, "counts and expression disagree on n");
  const std::uint32_t d = std::uint32_t{1} << n;
  double estimate = 0, variance = 0;
  for (const auto& [sel, coef] : expr.terms()) {
    const std::uint32_t pm = sel.party_mask();
    const std::uint32_t sm = sel.setting_mask() & pm;
    double total = 0, signed_sum = 0;
    for (std::uint32_t x = 0; x < d; ++x) {
      if ((x & pm) != sm) continue;
      for (std::uint32_t a = 0; a < d; ++a) {
        const double k = counts.table[static_cast<std::size_t>(x) * d + a];
        total += k;
        signed_sum += (std::popcount(a & pm) % 2) ? -k : k;
      }
    }
    if (total < 100) {
      throw Error(ErrorKind::InsufficientData,
                  "correlator " + sel.str() + " has " + std::to_string(total) + " samples");
    }
    const double e = signed_sum / total;
    estimate += coef * e;
    variance += coef * coef * std::max(0.0, 1 - e * e) / total;
  }
  return {estimate, std::sqrt(variance)};
}

BellEstimate empirical_bell(const std::vector<TrialRecord>& records, const BellExpression& expr) {
  return empirical_bell(Counts::tally(expr.parties(), records), expr);
}

nlohmann::json ExtractionReport::to_json() const {
  return {{"n", n},
          {"alpha", alpha},
          {"rounds", rounds},
          {"target_rounds", target_rounds},
          {"bell_estimate", bell_estimate},
          {"bell_std_error", bell_std_error},
          {"bell_lower", bell_lower},
          {"lhv_bound", lhv_bound},
          {"rate_source", rate_source},
          {"device_independent", device_independent},
          {"rate_bits_per_target_round", rate_bits_per_target_round},
          {"raw_bits", raw_bits},
          {"output_bits", output_bits},
          {"caveat", caveat}};
}

ExtractionResult certify_and_extract(const std::vector<TrialRecord>& records,
                                     const BellExpression& expr, const ExtractionParams& params,
                                     std::uint64_t seed, const SdpBackend& backend) {
  const int n = expr.parties();
  const SettingSelector target =
      params.target.parties() == 0 ? SettingSelector::full(n, 0) : params.target;
  if (target.parties() != n || !target.is_full()) {
    throw Error(ErrorKind::BadSelector, "target must give every party a setting");
  }
  const BellEstimate est = empirical_bell(records, expr);
  const double lower = est.estimate - params.sigmas * est.std_error;
  const double lhv = lhv_bound_enumerated(expr).value;
  if (!(lower > lhv)) {
    throw Error(ErrorKind::NoViolation, "Bell estimate " + std::to_string(est.estimate) +
                                            " is not " + std::to_string(params.sigmas) +
                                            " standard errors above the LHV bound " +
                                            std::to_string(lhv));
  }

  ExtractionReport rep{};
  rep.n = n;
  rep.alpha = expr.alpha();
  rep.rounds = records.size();
  rep.bell_estimate = est.estimate;
  rep.bell_std_error = est.std_error;
  rep.bell_lower = lower;
  rep.lhv_bound = lhv;
  if (params.source == RateSource::Npa) {
    const double max_bell = require_converged(npa_max_bell(expr, params.level, backend)).objective;
    const GuessingBound g = solve_guessing(expr, std::min(lower, max_bell), GuessingTarget::global(target),
                                           params.level, backend);
    require_converged(g.solution);
    rep.rate_source = "npa-level-" + std::to_string(params.level);
    rep.device_independent = true;
    rep.rate_bits_per_target_round = g.entropy_lower;
  } else {
    rep.rate_source = "closed-form";
    rep.device_independent = false;
    rep.rate_bits_per_target_round = -std::log2(optimal_guessing_probability(n, expr.alpha()));
  }

  ExtractionResult res;
  const std::uint32_t tx = target.setting_mask();
  for (const auto& r : records) {
    if (r.x != tx) continue;
    ++rep.target_rounds;
    for (int i = 0; i < n; ++i) res.raw.push_back(static_cast<std::uint8_t>(party_bit(r.a, i, n)));
  }
  rep.raw_bits = res.raw.size();
  const double length =
      std::floor(static_cast<double>(rep.target_rounds) * rep.rate_bits_per_target_round) -
      params.slack_bits;
  if (!(length > 0)) {
    throw Error(ErrorKind::OutputTooShort,
                "extractable length " + std::to_string(length) + " is not positive");
  }
  rep.output_bits = static_cast<std::uint64_t>(length);
  rep.caveat =
      "asymptotic i.i.d. accounting: output length is the certified per-round rate times the "
      "number of target rounds minus a fixed slack; no finite-size correction is applied";
  if (!rep.device_independent) {
    rep.caveat += "; the closed-form rate assumes the ideal realization and is not device-independent";
  }
  res.bits = toeplitz_extract(res.raw, rep.output_bits, seed);
  res.report = std::move(rep);
  return res;
}

namespace {

std::uint8_t t_bit(const std::vector<std::uint64_t>& t, std::size_t k) {
  return static_cast<std::uint8_t>((t[k / 64] >> (k % 64)) & 1u);
}

std::vector<std::uint8_t> toeplitz_direct(const std::vector<std::uint8_t>& raw,
                                          const std::vector<std::uint64_t>& t,
                                          std::size_t out_len) {
  const std::size_t in_len = raw.size();
  const std::size_t in_words = (in_len + 63) / 64;
  std::vector<std::uint64_t> r(in_words, 0);
  for (std::size_t j = 0; j < in_len; ++j) {
    if (raw[j] & 1u) r[j / 64] |= std::uint64_t{1} << (j % 64);
  }
  const std::uint64_t last_mask =
      in_len % 64 ? (std::uint64_t{1} << (in_len % 64)) - 1 : ~std::uint64_t{0};
  std::vector<std::uint8_t> out(out_len);
  for (std::size_t i = 0; i < out_len; ++i) {
    const std::size_t offset = out_len - 1 - i;
    std::uint64_t acc = 0;
    for (std::size_t q = 0; q < in_words; ++q) {
      const std::size_t bit = offset + 64 * q;
      const std::size_t s = bit / 64, b = bit % 64;
      std::uint64_t w = t[s] >> b;
      if (b) w |= t[s + 1] << (64 - b);
      if (q + 1 == in_words) w &= last_mask;
      acc ^= w & r[q];
    }
    out[i] = static_cast<std::uint8_t>(std::popcount(acc) & 1);
  }
  return out;
}

// Integer convolution of the window t[j0, j0 + blk + out_len - 1) with the
// reversed raw block; coefficient blk + out_len - 2 - i is the block's
// contribution to out_i.
std::vector<std::uint8_t> toeplitz_fft(const std::vector<std::uint8_t>& raw,
                                       const std::vector<std::uint64_t>& t,
                                       std::size_t out_len) {
  constexpr std::size_t kBlock = std::size_t{1} << 20;
  const std::size_t in_len = raw.size();
  std::vector<std::uint8_t> out(out_len, 0);
  Eigen::FFT<double> fft;
  for (std::size_t j0 = 0; j0 < in_len; j0 += kBlock) {
    const std::size_t blk = std::min(kBlock, in_len - j0);
    const std::size_t win = blk + out_len - 1;
    std::size_t size = 1;
    while (size < win + blk - 1) size <<= 1;
    std::vector<double> a(size, 0.0), b(size, 0.0);
    for (std::size_t k = 0; k < win; ++k) a[k] = t_bit(t, j0 + k);
    for (std::size_t j = 0; j < blk; ++j) b[j] = raw[j0 + blk - 1 - j] & 1u;
    std::vector<std::complex<double>> fa, fb;
    fft.fwd(fa, a);
    fft.fwd(fb, b);
    for (std::size_t k = 0; k < fa.size(); ++k) fa[k] *= fb[k];
    std::vector<double> c;
    fft.inv(c, fa);
    for (std::size_t i = 0; i < out_len; ++i) {
      const double v = c[blk + out_len - 2 - i];
      const double rounded = std::nearbyint(v);
      if (std::abs(v - rounded) > 0.25) {
        throw Error(ErrorKind::OutOfRange, "FFT rounding error in Toeplitz hashing");
      }
      out[i] ^= static_cast<std::uint8_t>(static_cast<std::uint64_t>(rounded) & 1u);
    }
  }
  return out;
}

}  // namespace

std::vector<std::uint8_t> toeplitz_extract(const std::vector<std::uint8_t>& raw,
                                           std::size_t out_len, std::uint64_t seed) {
  const std::size_t in_len = raw.size();
  if (out_len == 0) return {};
  if (in_len == 0) throw Error(ErrorKind::OutputTooShort, "empty raw string");
  const std::size_t t_len = in_len + out_len - 1;
  std::vector<std::uint64_t> t((t_len + 63) / 64 + 1, 0);
  Rng rng(derive_seed(seed, 0));
  for (std::size_t k = 0; k + 1 < t.size(); ++k) t[k] = rng();
  if (static_cast<double>(in_len) * static_cast<double>(out_len) < kToeplitzDirectLimit) {
    return toeplitz_direct(raw, t, out_len);
  }
  return toeplitz_fft(raw, t, out_len);
}

void write_records(std::ostream& out, int n, const std::vector<TrialRecord>& records) {
  for (const auto& r : records) out << r.round << ' ' << bit_string(r.x, n) << ' ' << bit_string(r.a, n) << '\n';
}

void write_bits(std::ostream& out, const std::vector<std::uint8_t>& bits) {
  std::vector<char> bytes((bits.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (bits[i] & 1u) bytes[i / 8] = static_cast<char>(bytes[i / 8] | (0x80 >> (i % 8)));
  }
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

}  // namespace ghzcert
