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

#include "ghzcert/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>

#include "ghzcert/errors.hpp"

namespace ghzcert {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr const char* kSchema = "ghzcert-sdp/1";

MatrixXd psd_projection(const MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(m);
  const VectorXd clipped = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * clipped.asDiagonal() * es.eigenvectors().transpose();
}

// Gamma(y): scatter the variables into the block matrices.
std::vector<MatrixXd> lift(const SdpProblem& p, const VectorXd& y) {
  std::vector<MatrixXd> out;
  out.reserve(p.blocks.size());
  for (const auto& b : p.blocks) {
    MatrixXd m(b.size, b.size);
    for (int i = 0; i < b.size; ++i)
      for (int j = 0; j < b.size; ++j) m(i, j) = y(b.var[i * b.size + j]);
    out.push_back(std::move(m));
  }
  return out;
}

// Gamma*(M): sum of the block entries sharing each variable.
VectorXd gather(const SdpProblem& p, const std::vector<MatrixXd>& ms) {
  VectorXd out = VectorXd::Zero(p.num_vars);
  for (std::size_t k = 0; k < p.blocks.size(); ++k) {
    const auto& b = p.blocks[k];
    for (int i = 0; i < b.size; ++i)
      for (int j = 0; j < b.size; ++j) out(b.var[i * b.size + j]) += ms[k](i, j);
  }
  return out;
}

void check_consistent(const MatrixXd& g, const VectorXd& h) {
  if (g.rows() == 0) return;
  const VectorXd y0 = g.completeOrthogonalDecomposition().solve(h);
  if ((g * y0 - h).norm() > 1e-9 * (1 + h.norm())) {
    throw Error(ErrorKind::Infeasible, "linear constraints are inconsistent");
  }
}

double frobenius(const std::vector<MatrixXd>& ms) {
  double s = 0;
  for (const auto& m : ms) s += m.squaredNorm();
  return std::sqrt(s);
}

}  // namespace

void SdpProblem::validate() const {
  if (num_vars <= 0) throw Error(ErrorKind::BadRange, "SDP needs at least one variable");
  if (static_cast<int>(objective.size()) != num_vars ||
      static_cast<int>(bound.size()) != num_vars) {
    throw Error(ErrorKind::BadRange, "objective and bound must have num_vars entries");
  }
  for (const auto& b : blocks) {
    if (b.size <= 0 || static_cast<int>(b.var.size()) != b.size * b.size) {
      throw Error(ErrorKind::BadRange, "block index table has the wrong size");
    }
    for (int i = 0; i < b.size; ++i) {
      for (int j = 0; j < b.size; ++j) {
        const int v = b.var[i * b.size + j];
        if (v < 0 || v >= num_vars) throw Error(ErrorKind::BadRange, "block variable out of range");
        if (v != b.var[j * b.size + i]) throw Error(ErrorKind::BadRange, "block is not symmetric");
      }
    }
  }
  for (const auto& e : equalities) {
    for (const auto& [v, c] : e.terms) {
      if (v < 0 || v >= num_vars || !std::isfinite(c)) {
        throw Error(ErrorKind::BadRange, "bad equality term");
      }
    }
  }
}

nlohmann::json SdpProblem::to_json() const {
  nlohmann::json j;
  j["schema"] = kSchema;
  j["sense"] = "maximize";
  j["num_vars"] = num_vars;
  nlohmann::json obj = nlohmann::json::array();
  for (int i = 0; i < num_vars; ++i) {
    if (objective[i] != 0.0) obj.push_back({i, objective[i]});
  }
  j["objective"] = obj;
  nlohmann::json blocks_json = nlohmann::json::array();
  for (const auto& b : blocks) {
    nlohmann::json entries = nlohmann::json::array();
    for (int r = 0; r < b.size; ++r)
      for (int c = r; c < b.size; ++c) entries.push_back({r, c, b.var[r * b.size + c]});
    blocks_json.push_back({{"size", b.size}, {"entries", entries}});
  }
  j["blocks"] = blocks_json;
  nlohmann::json eqs = nlohmann::json::array();
  for (const auto& e : equalities) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [v, c] : e.terms) terms.push_back({v, c});
    eqs.push_back({{"terms", terms}, {"rhs", e.rhs}});
  }
  j["equalities"] = eqs;
  j["var_bounds"] = bound;
  return j;
}

SdpProblem SdpProblem::from_json(const nlohmann::json& j) {
  if (j.value("schema", "") != kSchema) {
    throw Error(ErrorKind::BadRange, "unknown SDP schema");
  }
  SdpProblem p;
  p.num_vars = j.at("num_vars").get<int>();
  p.objective.assign(p.num_vars, 0.0);
  for (const auto& t : j.at("objective")) p.objective.at(t.at(0).get<int>()) = t.at(1).get<double>();
  for (const auto& bj : j.at("blocks")) {
    SdpBlock b;
    b.size = bj.at("size").get<int>();
    b.var.assign(static_cast<std::size_t>(b.size) * b.size, -1);
    for (const auto& e : bj.at("entries")) {
      const int r = e.at(0).get<int>(), c = e.at(1).get<int>(), v = e.at(2).get<int>();
      if (r < 0 || c < 0 || r >= b.size || c >= b.size) {
        throw Error(ErrorKind::BadRange, "block entry out of range");
      }
      b.var[r * b.size + c] = v;
      b.var[c * b.size + r] = v;
    }
    p.blocks.push_back(std::move(b));
  }
  for (const auto& ej : j.at("equalities")) {
    SdpEquality e;
    for (const auto& t : ej.at("terms")) e.terms.emplace_back(t.at(0).get<int>(), t.at(1).get<double>());
    e.rhs = ej.at("rhs").get<double>();
    p.equalities.push_back(std::move(e));
  }
  p.bound = j.at("var_bounds").get<std::vector<double>>();
  p.validate();
  return p;
}

nlohmann::json SdpSolution::to_json() const {
  return {{"status", status == SdpStatus::Converged ? "converged" : "max_iterations"},
          {"objective", objective},
          {"primal_residual", primal_residual},
          {"dual_gap", dual_gap},
          {"dual_bound", dual_bound},
          {"iterations", iterations}};
}

const SdpSolution& require_converged(const SdpSolution& s) {
  if (s.status != SdpStatus::Converged) {
    std::ostringstream msg;
    msg << "SDP stopped after " << s.iterations << " iterations (primal residual "
        << s.primal_residual << ", dual gap " << s.dual_gap << ")";
    throw Error(ErrorKind::MaxIterations, msg.str());
  }
  return s;
}

SdpSolution AdmmBackend::solve(const SdpProblem& p) const {
  p.validate();
  const int nv = p.num_vars;
  const int ne = static_cast<int>(p.equalities.size());

  // Multiplicity of every variable in the blocks; variables outside every
  // block get a unit proximal weight instead.
  VectorXd count = VectorXd::Zero(nv);
  for (const auto& b : p.blocks)
    for (int v : b.var) count(v) += 1;
  const VectorXd d = (count.array() > 0).select(count, VectorXd::Ones(nv));
  const VectorXd dinv = d.cwiseInverse();

  MatrixXd g = MatrixXd::Zero(ne, nv);
  VectorXd h(ne);
  for (int r = 0; r < ne; ++r) {
    for (const auto& [v, c] : p.equalities[r].terms) g(r, v) += c;
    h(r) = p.equalities[r].rhs;
  }
  const VectorXd c = Eigen::Map<const VectorXd>(p.objective.data(), nv);
  const VectorXd bounds = Eigen::Map<const VectorXd>(p.bound.data(), nv);

  // G D^-1 G^T does not depend on rho, so one factorization serves all steps.
  const MatrixXd gram = g * dinv.asDiagonal() * g.transpose();
  Eigen::CompleteOrthogonalDecomposition<MatrixXd> gram_solver(gram);
  check_consistent(g, h);

  double rho = settings_.rho;
  VectorXd y = VectorXd::Zero(nv);
  std::vector<MatrixXd> s, u;
  for (const auto& b : p.blocks) {
    s.push_back(MatrixXd::Zero(b.size, b.size));
    u.push_back(MatrixXd::Zero(b.size, b.size));
  }
  VectorXd nu = VectorXd::Zero(ne);

  SdpSolution out;
  const double tol = settings_.tolerance;
  const double cnorm = c.norm();
  constexpr long kCheckEvery = 25;

  for (long it = 1; it <= settings_.max_iterations; ++it) {
    // y-step: minimize -c.y + rho/2 |Gamma(y) - (S - U)|^2 s.t. G y = h.
    std::vector<MatrixXd> target(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) target[k] = s[k] - u[k];
    VectorXd r = gather(p, target);
    for (int v = 0; v < nv; ++v) {
      if (count(v) == 0) r(v) = y(v);
    }
    const VectorXd free_part = dinv.asDiagonal() * (rho * r + c);
    if (ne > 0) {
      nu = gram_solver.solve(g * free_part - rho * h);
      y = (free_part - dinv.asDiagonal() * (g.transpose() * nu)) / rho;
    } else {
      y = free_part / rho;
    }

    // S-step and dual update.
    const std::vector<MatrixXd> lifted = lift(p, y);
    std::vector<MatrixXd> s_prev = s;
    for (std::size_t k = 0; k < s.size(); ++k) {
      s[k] = psd_projection(lifted[k] + u[k]);
      u[k] += lifted[k] - s[k];
    }

    if (it % kCheckEvery != 0 && it != settings_.max_iterations) continue;

    std::vector<MatrixXd> diff(s.size()), ds(s.size()), w(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) {
      diff[k] = lifted[k] - s[k];
      ds[k] = s[k] - s_prev[k];
      w[k] = -rho * u[k];
    }
    const double scale = 1 + std::max(frobenius(lifted), frobenius(s));
    const double eq_res = ne > 0 ? (g * y - h).norm() / (1 + h.norm()) : 0.0;
    const double primal = frobenius(diff) / scale + eq_res;
    const double dual = rho * gather(p, ds).norm() / (1 + cnorm);

    // Dual bound: for W = -rho U >= 0 and multipliers nu the Lagrangian gives
    // c.y <= h.nu + sum_i |delta_i| bound_i with delta = c - G^T nu + Gamma*(W).
    VectorXd delta = c + gather(p, w);
    if (ne > 0) delta -= g.transpose() * nu;
    const double dual_bound = (ne > 0 ? h.dot(nu) : 0.0) + delta.cwiseAbs().dot(bounds);

    out.iterations = it;
    out.objective = c.dot(y);
    out.primal_residual = primal;
    out.dual_bound = dual_bound;
    out.dual_gap = dual_bound - out.objective;

    const double rel_gap = std::abs(out.dual_gap) / (1 + std::abs(out.objective));
    if (primal < tol && dual < tol && rel_gap < 10 * tol) {
      out.status = SdpStatus::Converged;
      break;
    }

    // Residual balancing.
    if (primal > 10 * dual) {
      rho *= 2;
      for (auto& m : u) m /= 2;
    } else if (dual > 10 * primal) {
      rho /= 2;
      for (auto& m : u) m *= 2;
    }
  }
  out.y.assign(y.data(), y.data() + nv);
  return out;
}

namespace {

// Largest step t <= 1 keeping P + t dP positive definite, given chol(P).
double max_step(const Eigen::LLT<MatrixXd>& chol, const MatrixXd& dp) {
  const MatrixXd l_inv_dp = chol.matrixL().solve(dp);
  const MatrixXd scaled = chol.matrixL().solve(l_inv_dp.transpose());
  const double lo = Eigen::SelfAdjointEigenSolver<MatrixXd>(scaled, Eigen::EigenvaluesOnly)
                        .eigenvalues()
                        .minCoeff();
  return lo < 0 ? -1.0 / lo : std::numeric_limits<double>::infinity();
}

MatrixXd sym(const MatrixXd& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

SdpSolution IpmBackend::solve(const SdpProblem& p) const {
  p.validate();
  const int nv = p.num_vars;
  const int ne = static_cast<int>(p.equalities.size());
  const std::size_t nb = p.blocks.size();

  VectorXd count = VectorXd::Zero(nv);
  for (const auto& b : p.blocks)
    for (int v : b.var) count(v) += 1;
  for (int v = 0; v < nv; ++v) {
    if (count(v) == 0) throw Error(ErrorKind::BadRange, "IPM needs every variable in a block");
  }

  MatrixXd g = MatrixXd::Zero(ne, nv);
  VectorXd h(ne);
  for (int r = 0; r < ne; ++r) {
    for (const auto& [v, c] : p.equalities[r].terms) g(r, v) += c;
    h(r) = p.equalities[r].rhs;
  }
  check_consistent(g, h);
  const VectorXd c = Eigen::Map<const VectorXd>(p.objective.data(), nv);
  const VectorXd bounds = Eigen::Map<const VectorXd>(p.bound.data(), nv);

  int total_dim = 0;
  std::vector<MatrixXd> x, z;
  for (const auto& b : p.blocks) {
    x.push_back(MatrixXd::Identity(b.size, b.size));
    z.push_back(MatrixXd::Identity(b.size, b.size));
    total_dim += b.size;
  }
  VectorXd y = VectorXd::Zero(nv);
  VectorXd nu = VectorXd::Zero(ne);

  SdpSolution best;
  double best_merit = std::numeric_limits<double>::infinity();
  double window_merit = best_merit;
  double tightest = std::numeric_limits<double>::infinity();
  int stall = 0;
  const double tol = settings_.tolerance;
  const double scale_h = 1 + h.norm();
  const double scale_c = 1 + c.norm();

  auto inner = [&](const std::vector<MatrixXd>& a, const std::vector<MatrixXd>& b) {
    double s = 0;
    for (std::size_t k = 0; k < nb; ++k) s += a[k].cwiseProduct(b[k]).sum();
    return s;
  };

  for (long it = 1; it <= settings_.max_iterations; ++it) {
    // Residuals: r_p = h - G y, r_z = Gamma(y) - Z, r_d = c - G^T nu + Gamma*(X).
    const VectorXd r_p = h - g * y;
    std::vector<MatrixXd> r_z = lift(p, y);
    for (std::size_t k = 0; k < nb; ++k) r_z[k] -= z[k];
    const VectorXd r_d = c - g.transpose() * nu + gather(p, x);
    const double mu = inner(x, z) / total_dim;

    const double pobj = c.dot(y);
    const double dobj = h.dot(nu);
    const double primal = r_p.norm() / scale_h + frobenius(r_z) / (1 + frobenius(z));
    const double dual = r_d.norm() / scale_c;
    const double rel_gap = std::abs(dobj - pobj) / (1 + std::abs(pobj) + std::abs(dobj));

    // The dual residual is absorbed into a rigorous bound, so the merit is
    // the primal residual plus the certified relative gap. Near the
    // floating-point floor progress stops; the best iterate is kept.
    const double bound = dobj + r_d.cwiseAbs().dot(bounds);
    const double merit = std::max(primal, std::abs(bound - pobj) / (1 + std::abs(pobj)));
    if (merit < best_merit) {
      best_merit = merit;
      best.iterations = it;
      best.objective = pobj;
      best.primal_residual = primal;
      best.y.assign(y.data(), y.data() + nv);
    }
    // X stays positive definite, so every iterate yields a valid bound.
    tightest = std::min(tightest, bound);
    if (primal < tol && dual < tol && rel_gap < tol) break;
    stall = merit < 0.5 * window_merit ? 0 : stall + 1;
    if (stall == 0) window_merit = merit;
    if (stall >= 6 && mu < 1e-7 * (1 + std::abs(pobj))) break;

    std::vector<MatrixXd> z_inv(nb);
    std::vector<Eigen::LLT<MatrixXd>> chol_x(nb), chol_z(nb);
    for (std::size_t k = 0; k < nb; ++k) {
      chol_x[k].compute(x[k]);
      chol_z[k].compute(z[k]);
      z_inv[k] = chol_z[k].solve(MatrixXd::Identity(z[k].rows(), z[k].cols()));
    }

    // Schur complement M_uv = <F_u, X F_v Z^-1>.
    MatrixXd m = MatrixXd::Zero(nv, nv);
    for (std::size_t k = 0; k < nb; ++k) {
      const auto& b = p.blocks[k];
      const int s = b.size;
      for (int a = 0; a < s; ++a)
        for (int bb = 0; bb < s; ++bb) {
          const int u = b.var[a * s + bb];
          for (int cc = 0; cc < s; ++cc) {
            const double xv = x[k](bb, cc);
            if (xv == 0.0) continue;
            for (int d = 0; d < s; ++d) m(u, b.var[cc * s + d]) += xv * z_inv[k](d, a);
          }
        }
    }
    m = sym(m);
    m.diagonal().array() += 1e-14 * (1 + m.diagonal().cwiseAbs().maxCoeff());
    const Eigen::LDLT<MatrixXd> m_fact(m);
    const MatrixXd m_inv_gt = m_fact.solve(g.transpose());
    const Eigen::LDLT<MatrixXd> schur_fact(g * m_inv_gt);

    // Direction for complementarity target K: dX = sym((K - X dZ) Z^-1).
    struct Step {
      VectorXd dy, dnu;
      std::vector<MatrixXd> dx, dz;
    };
    auto direction = [&](const std::vector<MatrixXd>& k_target) {
      std::vector<MatrixXd> r(nb);
      for (std::size_t k = 0; k < nb; ++k) r[k] = sym((k_target[k] - x[k] * r_z[k]) * z_inv[k]);
      // [M G^T; G 0] [dy; dnu] = [r_d + Gamma*(R); r_p]
      const VectorXd rhs1 = r_d + gather(p, r);
      Step st;
      auto kkt_solve = [&](const VectorXd& b1, const VectorXd& b2, VectorXd& dy, VectorXd& dnu) {
        const VectorXd m_inv_b1 = m_fact.solve(b1);
        dnu = ne > 0 ? VectorXd(schur_fact.solve(g * m_inv_b1 - b2)) : VectorXd();
        dy = ne > 0 ? VectorXd(m_inv_b1 - m_inv_gt * dnu) : m_inv_b1;
      };
      kkt_solve(rhs1, r_p, st.dy, st.dnu);
      for (int refine = 0; refine < 3; ++refine) {
        VectorXd e1 = rhs1 - m * st.dy;
        if (ne > 0) e1 -= g.transpose() * st.dnu;
        const VectorXd e2 = ne > 0 ? VectorXd(r_p - g * st.dy) : VectorXd();
        VectorXd cy, cnu;
        kkt_solve(e1, e2, cy, cnu);
        st.dy += cy;
        if (ne > 0) st.dnu += cnu;
      }
      st.dz = lift(p, st.dy);
      st.dx.resize(nb);
      for (std::size_t k = 0; k < nb; ++k) {
        st.dz[k] += r_z[k];
        st.dx[k] = r[k] - sym(x[k] * (st.dz[k] - r_z[k]) * z_inv[k]);
      }
      // Rounding in X dZ Z^-1 grows with cond(Z); restore the linearized
      // dual equality exactly with the least-norm correction Gamma(w),
      // using Gamma*(Gamma(w)) = count .* w.
      VectorXd err = gather(p, st.dx) + r_d;
      if (ne > 0) err -= g.transpose() * st.dnu;
      const std::vector<MatrixXd> fix = lift(p, -err.cwiseQuotient(count));
      for (std::size_t k = 0; k < nb; ++k) st.dx[k] += fix[k];
      return st;
    };
    auto step_lengths = [&](const Step& st) {
      double ap = 1.0, ad = 1.0;
      for (std::size_t k = 0; k < nb; ++k) {
        ap = std::min(ap, max_step(chol_z[k], st.dz[k]));
        ad = std::min(ad, max_step(chol_x[k], st.dx[k]));
      }
      return std::pair{ap, ad};
    };

    std::vector<MatrixXd> k_aff(nb);
    for (std::size_t k = 0; k < nb; ++k) k_aff[k] = -x[k] * z[k];
    const Step aff = direction(k_aff);
    const auto [ap_aff, ad_aff] = step_lengths(aff);
    double mu_aff = 0;
    for (std::size_t k = 0; k < nb; ++k) {
      mu_aff += ((x[k] + ad_aff * aff.dx[k]).cwiseProduct(z[k] + ap_aff * aff.dz[k])).sum();
    }
    mu_aff /= total_dim;
    const double sigma = std::clamp(std::pow(std::max(mu_aff, 0.0) / mu, 3), 0.0, 1.0);

    std::vector<MatrixXd> k_cor(nb);
    for (std::size_t k = 0; k < nb; ++k) {
      k_cor[k] = sigma * mu * MatrixXd::Identity(x[k].rows(), x[k].cols()) - x[k] * z[k] -
                 aff.dx[k] * aff.dz[k];
    }
    const Step st = direction(k_cor);
    auto [ap, ad] = step_lengths(st);
    ap = std::min(1.0, 0.95 * ap);
    ad = std::min(1.0, 0.95 * ad);

    y += ap * st.dy;
    if (ne > 0) nu += ad * st.dnu;
    for (std::size_t k = 0; k < nb; ++k) {
      z[k] = sym(z[k] + ap * st.dz[k]);
      x[k] = sym(x[k] + ad * st.dx[k]);
    }
  }
  best.dual_bound = tightest;
  best.dual_gap = tightest - best.objective;
  best.status = best_merit < settings_.accept ? SdpStatus::Converged : SdpStatus::MaxIterations;
  return best;
}

}  // namespace ghzcert
