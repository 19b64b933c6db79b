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
#include <functional>
#include <numbers>
#include <sstream>

#include "ghzcert/errors.hpp"
#include "ghzcert/quantum.hpp"
#include "ghzcert/randomness.hpp"
#include "ghzcert/rng.hpp"
#include "ghzcert/simulator.hpp"

namespace ghzcert {
namespace {

void expect_kind(const std::function<void()>& f, ErrorKind kind) {
  try {
    f();
    ADD_FAILURE() << "no exception";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), kind) << e.what();
  }
}

ObservableSet z_basis(int n) {
  return ObservableSet(std::vector<std::array<double, 2>>(n, {0.0, 0.0}));
}

TEST(Noise, DensityIsAState) {
  for (double v : {0.0, 0.3, 1.0}) {
    const ComplexMatrix rho = NoiseModel{v}.density(3);
    EXPECT_NEAR(rho.trace().real(), 1.0, 1e-14);
    EXPECT_GE(hermitian_eig(rho).values.minCoeff(), -1e-14);
  }
  expect_kind([] { NoiseModel{1.2}.density(3); }, ErrorKind::BadRange);
  expect_kind([] { NoiseModel{std::nan("")}.density(3); }, ErrorKind::BadRange);
}

TEST(Sampling, PerfectGhzZBasisIsPerfectlyCorrelated) {
  const auto recs = sample_trials({1.0}, z_basis(3), InputDistribution::uniform(3), 20000, 11);
  for (const auto& r : recs) EXPECT_TRUE(r.a == 0 || r.a == 7) << r.a;
}

TEST(Sampling, FullyMixedIsUniform) {
  constexpr std::uint64_t rounds = 100000;
  const auto recs = sample_trials({0.0}, optimal_angles(3, 1.0), InputDistribution::uniform(3),
                                  rounds, 5);
  std::vector<double> hist(8, 0);
  for (const auto& r : recs) hist[r.a] += 1;
  const double p = 1.0 / 8, sigma = std::sqrt(rounds * p * (1 - p));
  for (double h : hist) EXPECT_LT(std::abs(h - rounds * p), 4 * sigma);
}

TEST(Sampling, SeedDeterminismAcrossThreadCounts) {
  const auto obs = optimal_angles(3, 1.0);
  const auto q = InputDistribution::uniform(3);
  const auto a = sample_trials({0.9}, obs, q, 200000, 42, 1);
  const auto b = sample_trials({0.9}, obs, q, 200000, 42, 8);
  EXPECT_EQ(a, b);
  const auto c = sample_trials({0.9}, obs, q, 200000, 43, 8);
  EXPECT_NE(a, c);
  std::ostringstream sa, sb;
  write_records(sa, 3, a);
  write_records(sb, 3, b);
  EXPECT_EQ(sa.str(), sb.str());
}

TEST(Sampling, TotalVariationAtHundredThousandRounds) {
  const auto obs = optimal_angles(3, 1.0);
  const auto q = InputDistribution::uniform(3);
  constexpr double rounds = 100000;
  const auto recs = sample_trials({1.0}, obs, q, rounds, 2024);
  const Counts got = Counts::tally(3, recs);
  const Counts want = Counts::expected(born_behavior(ghz_state(3), obs), q, rounds);
  double tv = 0;
  for (std::size_t k = 0; k < got.table.size(); ++k) tv += std::abs(got.table[k] - want.table[k]);
  EXPECT_LT(0.5 * tv / rounds, 0.02);
}

TEST(Sampling, OversampledInputs) {
  const auto q = InputDistribution::oversampled(3, 0, 9.0);
  EXPECT_NEAR(q.weights[0], 9.0 / 16, 1e-15);
  EXPECT_NEAR(q.weights[5], 1.0 / 16, 1e-15);
  EXPECT_EQ(q.parties(), 3);
  expect_kind([] { InputDistribution::oversampled(3, 8, 2.0); }, ErrorKind::BadSelector);
  expect_kind([] { InputDistribution::oversampled(3, 0, 0.0); }, ErrorKind::BadRange);
  expect_kind([] { sample_trials({1.0}, z_basis(3), InputDistribution::uniform(3), 0, 1); },
              ErrorKind::BadRange);
}

TEST(EmpiricalBell, ExpectedCountsReproduceExactValue) {
  for (double alpha : {0.5, 1.0, 10.0}) {
    const BellExpression e = build_bell(3, alpha);
    const Behavior b = born_behavior(NoiseModel{0.7}.density(3), optimal_angles(3, alpha));
    const BellEstimate est =
        empirical_bell(Counts::expected(b, InputDistribution::uniform(3), 1e6), e);
    EXPECT_NEAR(est.estimate, eval_on_behavior(e, b), 1e-12);
  }
}

// With uniform inputs a term whose parties all appear has N/8 samples; the
// standard error must match sqrt(sum c^2 (1 - E^2) / N_S).
TEST(EmpiricalBell, StandardErrorFormula) {
  const BellExpression e = build_bell(3, 1.0);
  const Behavior b = born_behavior(NoiseModel{0.8}.density(3), optimal_angles(3, 1.0));
  const double rounds = 80000;
  const BellEstimate est = empirical_bell(Counts::expected(b, InputDistribution::uniform(3), rounds), e);
  double var = 0;
  for (const auto& [sel, c] : e.terms()) {
    const double corr = correlator(b, sel);
    const double samples = rounds / std::pow(2.0, std::popcount(sel.party_mask()));
    var += c * c * (1 - corr * corr) / samples;
  }
  EXPECT_NEAR(est.std_error, std::sqrt(var), 1e-12);
}

TEST(EmpiricalBell, InsufficientData) {
  const auto recs = sample_trials({1.0}, optimal_angles(3, 1.0), InputDistribution::uniform(3), 400, 3);
  expect_kind([&] { empirical_bell(recs, build_bell(3, 1.0)); }, ErrorKind::InsufficientData);
}

TEST(EmpiricalBell, PerfectVisibilityNearTheoremValue) {
  const auto recs = sample_trials({1.0}, optimal_angles(3, 1.0), InputDistribution::uniform(3),
                                  100000, 77);
  const BellEstimate est = empirical_bell(recs, build_bell(3, 1.0));
  EXPECT_LT(std::abs(est.estimate - 2 * std::sqrt(5.0)), 4 * est.std_error);
}

// White noise multiplies every full correlator by v and the expression has
// no identity term, so the Bell value scales linearly.
TEST(EmpiricalBell, NoisyVisibilityScalesLinearly) {
  const BellExpression e = build_bell(3, 1.0);
  const Behavior b = born_behavior(NoiseModel{0.8}.density(3), optimal_angles(3, 1.0));
  EXPECT_NEAR(eval_on_behavior(e, b), 0.8 * 2 * std::sqrt(5.0), 1e-12);
  const auto recs = sample_trials({0.8}, optimal_angles(3, 1.0), InputDistribution::uniform(3),
                                  100000, 78);
  const BellEstimate est = empirical_bell(recs, e);
  EXPECT_LT(std::abs(est.estimate - 0.8 * 2 * std::sqrt(5.0)), 4 * est.std_error);
}

// Oracle: direct O(out * in) evaluation of the documented Toeplitz rule.
std::vector<std::uint8_t> naive_toeplitz(const std::vector<std::uint8_t>& raw, std::size_t out_len,
                                         std::uint64_t seed) {
  const std::size_t t_len = raw.size() + out_len - 1;
  Rng rng(derive_seed(seed, 0));
  std::vector<std::uint8_t> t;
  while (t.size() < t_len) {
    const std::uint64_t w = rng();
    for (int b = 0; b < 64; ++b) t.push_back(static_cast<std::uint8_t>((w >> b) & 1));
  }
  std::vector<std::uint8_t> out(out_len, 0);
  for (std::size_t i = 0; i < out_len; ++i)
    for (std::size_t j = 0; j < raw.size(); ++j) out[i] ^= t[out_len - 1 - i + j] & raw[j];
  return out;
}

std::vector<std::uint8_t> random_bits(Rng& rng, std::size_t len) {
  std::vector<std::uint8_t> v(len);
  for (auto& b : v) b = static_cast<std::uint8_t>(rng() & 1);
  return v;
}

TEST(Toeplitz, MatchesDirectEvaluation) {
  Rng rng(9);
  for (auto [in, out] : std::vector<std::pair<std::size_t, std::size_t>>{
           {1, 1}, {64, 64}, {65, 3}, {130, 70}, {200, 129}, {1000, 333}}) {
    const auto raw = random_bits(rng, in);
    EXPECT_EQ(toeplitz_extract(raw, out, 17), naive_toeplitz(raw, out, 17)) << in << "x" << out;
  }
}

TEST(Toeplitz, FftPathMatchesDirectRuleOnSampledOutputs) {
  Rng rng(31);
  const std::size_t in = 2'500'000, out = 1'500;
  ASSERT_GT(static_cast<double>(in) * out, kToeplitzDirectLimit);
  auto raw = random_bits(rng, in);
  for (std::size_t j = 0; j < 4096; ++j) raw[j] = 1;  // dense prefix stresses rounding
  const auto got = toeplitz_extract(raw, out, 5);
  ASSERT_EQ(got.size(), out);
  Rng trng(derive_seed(5, 0));
  std::vector<std::uint64_t> t((in + out - 1) / 64 + 1);
  for (auto& w : t) w = trng();
  for (std::size_t i : {std::size_t{0}, std::size_t{1}, std::size_t{63}, std::size_t{64}, std::size_t{700},
                        out - 2, out - 1}) {
    std::uint8_t bit = 0;
    for (std::size_t j = 0; j < in; ++j) {
      const std::size_t k = out - 1 - i + j;
      bit ^= static_cast<std::uint8_t>((t[k / 64] >> (k % 64)) & raw[j] & 1u);
    }
    EXPECT_EQ(got[i], bit) << "output " << i;
  }
}

TEST(Toeplitz, ZeroMapsToZero) {
  const std::vector<std::uint8_t> zeros(999, 0);
  for (auto b : toeplitz_extract(zeros, 500, 1)) EXPECT_EQ(b, 0);
}

TEST(Toeplitz, LinearOverGf2) {
  Rng rng(123);
  for (int trial = 0; trial < 100; ++trial) {
    const auto r1 = random_bits(rng, 300), r2 = random_bits(rng, 300);
    std::vector<std::uint8_t> x(300);
    for (std::size_t j = 0; j < x.size(); ++j) x[j] = r1[j] ^ r2[j];
    const auto e1 = toeplitz_extract(r1, 120, 55), e2 = toeplitz_extract(r2, 120, 55);
    const auto ex = toeplitz_extract(x, 120, 55);
    for (std::size_t i = 0; i < ex.size(); ++i) ASSERT_EQ(ex[i], e1[i] ^ e2[i]);
  }
}

TEST(WriteBits, PacksMsbFirst) {
  std::ostringstream s;
  write_bits(s, {1, 0, 0, 0, 0, 0, 0, 1, 1});
  EXPECT_EQ(s.str(), std::string("\x81\x80", 2));
}

TEST(Extraction, ClosedFormRateAndLength) {
  const BellExpression e = build_bell(3, 10.0);
  const auto recs = sample_trials({1.0}, optimal_angles(3, 10.0), InputDistribution::uniform(3),
                                  100000, 1);
  ExtractionParams p;
  p.source = RateSource::ClosedForm;
  const ExtractionResult res = certify_and_extract(recs, e, p, 5, IpmBackend());
  const double rate = -std::log2((1 + 1 / std::sqrt(401.0)) / 8);
  EXPECT_NEAR(res.report.rate_bits_per_target_round, rate, 1e-12);
  EXPECT_NEAR(rate, 2.93, 5e-3);
  std::uint64_t target = 0;
  for (const auto& r : recs) target += r.x == 0;
  EXPECT_EQ(res.report.target_rounds, target);
  EXPECT_EQ(res.report.raw_bits, 3 * target);
  EXPECT_EQ(res.report.output_bits,
            static_cast<std::uint64_t>(std::floor(target * rate) - 128));
  EXPECT_EQ(res.bits.size(), res.report.output_bits);
  EXPECT_FALSE(res.report.device_independent);
  EXPECT_NE(res.report.caveat.find("asymptotic"), std::string::npos);
  // Deterministic given records and seed.
  EXPECT_EQ(certify_and_extract(recs, e, p, 5, IpmBackend()).bits, res.bits);
}

TEST(Extraction, NpaRateIsBelowClosedForm) {
  const BellExpression e = build_bell(3, 10.0);
  const auto recs = sample_trials({1.0}, optimal_angles(3, 10.0),
                                  InputDistribution::oversampled(3, 0, 8.0), 100000, 2);
  const ExtractionResult res = certify_and_extract(recs, e, ExtractionParams{}, 5, IpmBackend());
  EXPECT_TRUE(res.report.device_independent);
  EXPECT_GT(res.report.rate_bits_per_target_round, 0.0);
  EXPECT_LT(res.report.rate_bits_per_target_round, -std::log2((1 + 1 / std::sqrt(401.0)) / 8));
  EXPECT_EQ(res.report.to_json().at("rate_source"), "npa-level-2");
}

TEST(Extraction, NoViolationAtClassicalStatistics) {
  // v = 0.5 puts the Bell value at 0.5 * 22.26 < 22.
  const BellExpression e = build_bell(3, 10.0);
  const auto recs = sample_trials({0.5}, optimal_angles(3, 10.0), InputDistribution::uniform(3),
                                  20000, 3);
  expect_kind([&] { certify_and_extract(recs, e, ExtractionParams{}, 1, IpmBackend()); },
              ErrorKind::NoViolation);
}

TEST(Extraction, OutputTooShort) {
  const BellExpression e = build_bell(3, 1.0);
  const auto recs = sample_trials({1.0}, optimal_angles(3, 1.0), InputDistribution::uniform(3),
                                  2000, 4);
  ExtractionParams p;
  p.source = RateSource::ClosedForm;
  p.slack_bits = 100000;
  expect_kind([&] { certify_and_extract(recs, e, p, 1, IpmBackend()); }, ErrorKind::OutputTooShort);
}

}  // namespace
}  // namespace ghzcert
