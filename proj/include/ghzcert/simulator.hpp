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

// Monte-Carlo entropy source: noisy GHZ trials, empirical Bell estimation,
// rate certification and Toeplitz extraction.
//
// Sampling algorithm (fixed, so records are reproducible bit for bit):
// rounds are split into chunks of kChunkRounds; chunk c uses a
// std::mt19937_64 seeded with derive_seed(seed, c). Each round draws
// u1 = uniform01 for the setting tuple and u2 = uniform01 for the outcome,
// both inverted through cumulative tables in index order.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "ghzcert/behavior.hpp"
#include "ghzcert/bell.hpp"
#include "ghzcert/linalg.hpp"
#include "ghzcert/npa.hpp"
#include "ghzcert/observables.hpp"

namespace ghzcert {

inline constexpr std::uint64_t kChunkRounds = 1u << 16;

struct NoiseModel {
  double visibility = 1.0;

  /// v |GHZ><GHZ| + (1 - v) I / 2^n; throws BadRange for v outside [0, 1].
  ComplexMatrix density(int n) const;
};

struct TrialRecord {
  std::uint64_t round;
  std::uint32_t x;
  std::uint32_t a;
  bool operator==(const TrialRecord&) const = default;
};

struct InputDistribution {
  std::vector<double> weights;

  static InputDistribution uniform(int n);
  /// Uniform, with `target` weighted `factor` times the other tuples.
  static InputDistribution oversampled(int n, std::uint32_t target, double factor);
  int parties() const;
};

std::vector<TrialRecord> sample_trials(const NoiseModel& noise, const ObservableSet& obs,
                                       const InputDistribution& inputs, std::uint64_t rounds,
                                       std::uint64_t seed, unsigned threads = 0);

/// counts[x * 2^n + a].
struct Counts {
  int n = 0;
  std::vector<double> table;

  static Counts tally(int n, const std::vector<TrialRecord>& records);
  /// rounds * q(x) * p(a|x).
  static Counts expected(const Behavior& b, const InputDistribution& inputs, double rounds);
};

struct BellEstimate {
  double estimate;
  /// sqrt(sum_S c_S^2 (1 - E_S^2) / N_S), treating correlators as independent.
  double std_error;
};

/// Throws InsufficientData naming the first correlator with < 100 samples.
BellEstimate empirical_bell(const Counts& counts, const BellExpression& expr);
BellEstimate empirical_bell(const std::vector<TrialRecord>& records, const BellExpression& expr);

enum class RateSource { Npa, ClosedForm };

struct ExtractionParams {
  RateSource source = RateSource::Npa;
  int level = 2;
  /// Certification tuple; empty selects all-zero settings.
  SettingSelector target;
  int slack_bits = 128;
  double sigmas = 4.0;
};

struct ExtractionReport {
  int n;
  double alpha;
  std::uint64_t rounds;
  std::uint64_t target_rounds;
  double bell_estimate;
  double bell_std_error;
  double bell_lower;
  double lhv_bound;
  std::string rate_source;
  bool device_independent;
  double rate_bits_per_target_round;
  std::uint64_t raw_bits;
  std::uint64_t output_bits;
  std::string caveat;

  nlohmann::json to_json() const;
};

struct ExtractionResult {
  /// One bit per entry (0 or 1).
  std::vector<std::uint8_t> bits;
  std::vector<std::uint8_t> raw;
  ExtractionReport report;
};

/// Raw string: outcome bits (party 0 first) of every round at the target
/// tuple. Output length floor(target_rounds * rate) - slack_bits.
/// Throws NoViolation when the lower Bell estimate does not exceed the LHV
/// bound and OutputTooShort when the length is not positive.
ExtractionResult certify_and_extract(const std::vector<TrialRecord>& records,
                                     const BellExpression& expr, const ExtractionParams& params,
                                     std::uint64_t seed, const SdpBackend& backend);

/// Toeplitz hashing over GF(2): out_i = XOR_j t[out_len - 1 - i + j] raw_j
/// with t drawn from mt19937_64(derive_seed(seed, 0)) 64 bits at a time,
/// least significant bit first. Products larger than kToeplitzDirectLimit
/// bit pairs are evaluated as an FFT convolution in blocks of 2^20 raw bits.
inline constexpr double kToeplitzDirectLimit = 1e9;
std::vector<std::uint8_t> toeplitz_extract(const std::vector<std::uint8_t>& raw,
                                           std::size_t out_len, std::uint64_t seed);

/// One line per round: "<round> <x bits> <a bits>", party 0 first.
void write_records(std::ostream& out, int n, const std::vector<TrialRecord>& records);
/// Packs bits MSB first; the last byte is zero-padded.
void write_bits(std::ostream& out, const std::vector<std::uint8_t>& bits);

}  // namespace ghzcert
