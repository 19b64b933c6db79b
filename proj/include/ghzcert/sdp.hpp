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

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace ghzcert {

/// Symmetric matrix whose (i, j) entry is the scalar variable var[i*size+j].
struct SdpBlock {
  int size = 0;
  std::vector<int> var;
};

struct SdpEquality {
  std::vector<std::pair<int, double>> terms;
  double rhs = 0;
};

/// maximize c.y  subject to  equalities,  every block PSD.
///
/// `bound[i]` is an a-priori bound on |y_i| over the feasible set; it turns
/// an approximate dual solution into a valid upper bound on the optimum.
struct SdpProblem {
  int num_vars = 0;
  std::vector<double> objective;
  std::vector<SdpBlock> blocks;
  std::vector<SdpEquality> equalities;
  std::vector<double> bound;

  /// Checks index ranges and block symmetry; throws BadRange.
  void validate() const;

  /// Standard-form export, "ghzcert-sdp/1" schema (see README).
  nlohmann::json to_json() const;
  static SdpProblem from_json(const nlohmann::json& j);
};

enum class SdpStatus { Converged, MaxIterations };

struct SdpSolution {
  SdpStatus status = SdpStatus::MaxIterations;
  double objective = 0;
  /// Relative distance of the block matrices from the PSD cone plus the
  /// equality residual.
  double primal_residual = 0;
  /// Upper bound on the optimum from the dual iterate minus `objective`.
  double dual_gap = 0;
  double dual_bound = 0;
  long iterations = 0;
  std::vector<double> y;

  nlohmann::json to_json() const;
};

struct SdpSettings {
  double tolerance = 1e-7;
  long max_iterations = 200000;
  double rho = 1.0;
};

class SdpBackend {
 public:
  virtual ~SdpBackend() = default;
  virtual std::string name() const = 0;
  virtual SdpSolution solve(const SdpProblem& problem) const = 0;
};

/// Bundled first-order solver: ADMM alternating a least-squares step on the
/// affine constraints with eigenvalue projection of each block.
class AdmmBackend : public SdpBackend {
 public:
  explicit AdmmBackend(SdpSettings settings = {}) : settings_(settings) {}
  std::string name() const override { return "admm"; }
  SdpSolution solve(const SdpProblem& problem) const override;

 private:
  SdpSettings settings_;
};

struct IpmSettings {
  /// Target for the primal, dual and duality-gap residuals.
  double tolerance = 1e-9;
  /// Largest accepted primal residual and certified relative gap
  /// (dual bound minus objective).
  double accept = 1e-4;
  long max_iterations = 200;
};

/// Primal-dual interior-point solver (HKM direction with Mehrotra
/// predictor-corrector) on the dense Schur complement.
class IpmBackend : public SdpBackend {
 public:
  explicit IpmBackend(IpmSettings settings = {}) : settings_(settings) {}
  std::string name() const override { return "ipm"; }
  SdpSolution solve(const SdpProblem& problem) const override;

 private:
  IpmSettings settings_;
};

/// Throws MaxIterations (with residuals in the message) unless converged.
const SdpSolution& require_converged(const SdpSolution& s);

}  // namespace ghzcert
