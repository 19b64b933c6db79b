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

// Command-line front end. Exit codes: 0 success, 1 cross-check or
// certification failure, 2 usage or invalid input, 3 solver non-convergence.

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ghzcert/classical.hpp"
#include "ghzcert/csv.hpp"
#include "ghzcert/errors.hpp"
#include "ghzcert/holevo.hpp"
#include "ghzcert/npa.hpp"
#include "ghzcert/quantum.hpp"
#include "ghzcert/randomness.hpp"
#include "ghzcert/rng.hpp"
#include "ghzcert/simulator.hpp"

namespace {

using namespace ghzcert;
using nlohmann::json;

enum Exit { kOk = 0, kCrossCheck = 1, kUsage = 2, kSolver = 3 };

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<json> objects;

  void add(const std::vector<std::pair<std::string, json>>& fields,
           const std::vector<std::string>& csv_fields) {
    if (header.empty())
      for (const auto& [k, v] : fields) header.push_back(k);
    json o = json::object();
    for (const auto& [k, v] : fields) o[k] = v;
    objects.push_back(std::move(o));
    rows.push_back(csv_fields);
  }
};

json opt_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path, std::ios::binary);
      if (!file_) throw Error(ErrorKind::BadRange, "cannot open " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

void emit_table(const Table& t, const std::string& format, const std::string& path) {
  Output out(path);
  if (format == "json") {
    out.stream() << json(t.objects).dump(2) << '\n';
  } else {
    write_csv(out.stream(), t.header, t.rows);
  }
}

void emit_json(const json& j, const std::string& path) {
  Output out(path);
  out.stream() << j.dump(2) << '\n';
}

std::unique_ptr<SdpBackend> make_backend(const std::string& name) {
  if (name == "admm") return std::make_unique<AdmmBackend>();
  return std::make_unique<IpmBackend>();
}

bool theorem1_applies(int n, double alpha) {
  return n >= 3 ? alpha > alpha_l(n) : alpha == 1.0;
}

// ---- bounds ---------------------------------------------------------------

struct BoundsArgs {
  int n = 3;
  double alpha = 1.0;
  int starts = 20;
  std::uint64_t seed = 7;
  unsigned threads = 0;
  std::string format = "text";
  std::string out;
};

int cmd_bounds(const BoundsArgs& a) {
  const BellExpression expr = build_bell(a.n, a.alpha);
  std::optional<double> formula;
  if (a.n >= 3) formula = lhv_bound_formula(a.n, a.alpha);
  const LhvResult lhv = lhv_bound_enumerated(expr, a.threads);
  const double q = theorem1_bound(a.n, a.alpha);
  const bool applies = theorem1_applies(a.n, a.alpha);

  std::optional<double> eig, search;
  if (a.n <= kMaxEigenParties) eig = max_eigenvalue_bound(expr, optimal_angles(a.n, a.alpha));
  if (a.n <= 8) {
    AngleSearchOptions opts;
    opts.starts = a.starts;
    opts.seed = a.seed;
    opts.threads = a.threads;
    search = optimize_angles(expr, opts).value;
  }

  std::vector<std::string> failures;
  if (formula && std::abs(*formula - lhv.value) > 1e-9) failures.push_back("lhv formula vs enumeration");
  if (applies && eig && std::abs(*eig - q) > 1e-8) failures.push_back("eigenvalue at optimal angles vs theorem bound");
  if (applies && search && (*search > q + 1e-9 || *search < q - 1e-6)) {
    failures.push_back("angle search vs theorem bound");
  }

  json j = {{"n", a.n},
            {"alpha", a.alpha},
            {"lhv", {{"formula", opt_json(formula)},
                     {"enumerated", lhv.value},
                     {"witness", lhv.witness.str()}}},
            {"quantum", {{"theorem1", q},
                         {"theorem1_applies", applies},
                         {"eigenvalue_at_optimal_angles", opt_json(eig)},
                         {"angle_search", opt_json(search)}}},
            {"cross_check_failures", failures}};
  if (a.format == "json") {
    emit_json(j, a.out);
  } else {
    Output out(a.out);
    auto& s = out.stream();
    s << "n = " << a.n << ", alpha = " << csv_number(a.alpha) << '\n';
    s << "LHV bound (enumerated): " << csv_number(lhv.value) << "  witness " << lhv.witness.str() << '\n';
    s << "LHV bound (formula):    " << (formula ? csv_number(*formula) : "undefined") << '\n';
    s << "Quantum bound (Theorem 1): " << csv_number(q) << (applies ? "" : "  (outside its validity range)") << '\n';
    s << "  eigenvalue at optimal angles: " << (eig ? csv_number(*eig) : "skipped") << '\n';
    s << "  angle search:                 " << (search ? csv_number(*search) : "skipped") << '\n';
    for (const auto& f : failures) s << "CROSS-CHECK FAILED: " << f << '\n';
  }
  return failures.empty() ? kOk : kCrossCheck;
}

// ---- certify ---------------------------------------------------------------

int cmd_certify(int n, double alpha, const std::string& format, const std::string& out) {
  const CertReport r = certify_optimal(n, alpha);
  if (format == "json") {
    emit_json(r.to_json(), out);
  } else {
    Output o(out);
    auto& s = o.stream();
    s << "Bell value " << csv_number(r.bell_value) << " (LHV " << csv_number(r.lhv_bound)
      << ", quantum " << csv_number(r.quantum_bound) << ")\n";
    s << "global guessing probability " << csv_number(r.guessing_probability_global)
      << " at settings " << r.settings_used.str() << '\n';
    s << "global min-entropy " << csv_number(r.min_entropy_global) << " bits\n";
  }
  const double expected = optimal_guessing_probability(n, alpha);
  return std::abs(r.guessing_probability_global - expected) < 1e-9 ? kOk : kCrossCheck;
}

// ---- holevo / fig4 -----------------------------------------------------------

int cmd_holevo_curve(int n, int points, const std::string& format, const std::string& out) {
  if (points < 2) throw Error(ErrorKind::BadRange, "need at least 2 points");
  const double lo = 2.0 * (n - 1), hi = 2 * std::sqrt(1.0 + (n - 1.0) * (n - 1.0));
  Table t;
  for (int k = 0; k < points; ++k) {
    const double b = k + 1 == points ? hi : lo + (hi - lo) * k / (points - 1);
    const HolevoCurvePoint p = holevo_bound(b, n);
    t.add({{"bell_value", p.bell_value}, {"chi_upper", p.chi_upper}, {"entropy_lower", p.entropy_lower}},
          {csv_number(p.bell_value), csv_number(p.chi_upper), csv_number(p.entropy_lower)});
  }
  emit_table(t, format, out);
  return kOk;
}

int cmd_compare_fig4(int points, const std::string& format, const std::string& out) {
  Table t;
  for (const auto& r : comparison_curves(points)) {
    t.add({{"curve", to_string(r.curve)}, {"bell_value", r.bell_value},
           {"chi", opt_json(r.chi)}, {"entropy", opt_json(r.entropy)}},
          {to_string(r.curve), csv_number(r.bell_value), csv_number(r.chi), csv_number(r.entropy)});
  }
  emit_table(t, format, out);
  return kOk;
}

// ---- robustness ----------------------------------------------------------------

struct RobustnessArgs {
  int n = 3;
  double alpha = 10.0;
  int level = 2;
  int points = 10;
  std::vector<double> bell_values;
  std::string target;
  std::string local;
  std::string mode = "equal";
  std::string solver = "ipm";
  unsigned threads = 0;
  std::string export_sdp;
  std::string format = "csv";
  std::string out;
};

GuessingTarget parse_target(int n, const std::string& target, const std::string& local) {
  if (!local.empty()) {
    const auto colon = local.find(':');
    if (colon == std::string::npos) throw Error(ErrorKind::BadSelector, "--local expects party:setting");
    const int party = std::stoi(local.substr(0, colon));
    const int setting = std::stoi(local.substr(colon + 1));
    if (party < 1 || party > n) throw Error(ErrorKind::BadIndex, "party must be in 1..n");
    return GuessingTarget::local(party - 1, setting);
  }
  return GuessingTarget::global(target.empty() ? SettingSelector::full(n, 0)
                                               : SettingSelector::parse(target));
}

int cmd_robustness(const RobustnessArgs& a) {
  const BellExpression expr = build_bell(a.n, a.alpha);
  const GuessingTarget target = parse_target(a.n, a.target, a.local);
  const BellConstraint mode = a.mode == "at-least" ? BellConstraint::AtLeast : BellConstraint::Equal;
  const auto backend = make_backend(a.solver);
  if (a.level == 3) std::cerr << "warning: level 3 is experimental\n";

  std::vector<double> grid = a.bell_values;
  if (grid.empty()) {
    if (a.points < 2) throw Error(ErrorKind::BadRange, "need at least 2 grid points");
    const double lo = lhv_bound_enumerated(expr, a.threads).value;
    const double hi = theorem1_bound(a.n, a.alpha);
    for (int k = 0; k < a.points; ++k) {
      grid.push_back(k + 1 == a.points ? hi : lo + (hi - lo) * k / (a.points - 1));
    }
  }

  if (!a.export_sdp.empty()) {
    json problems = json::array();
    for (double b : grid) {
      const MomentProblem mp = build_guessing_sdp(expr, b, target, a.level, *backend, mode);
      problems.push_back({{"bell_value", b}, {"target", target.str()}, {"level", a.level},
                          {"problem", mp.sdp.to_json()}});
    }
    emit_json(problems, a.export_sdp);
  }

  const auto rows = robustness_curve(expr, a.level, grid, target, *backend, mode, a.threads);
  Table t;
  for (const auto& r : rows) {
    t.add({{"bell_value", r.bell_value}, {"g_upper", r.g_upper}, {"entropy_lower", r.entropy_lower},
           {"level", r.level}, {"solver_residual", r.solver_residual}},
          {csv_number(r.bell_value), csv_number(r.g_upper), csv_number(r.entropy_lower),
           std::to_string(r.level), csv_number(r.solver_residual)});
  }
  emit_table(t, a.format, a.out);
  return kOk;
}

// ---- selftest -------------------------------------------------------------------

struct SelftestArgs {
  int n = 3;
  double alpha = 1.0;
  int blocks_per_party = 2;
  int blocks = 2;
  int draws = 1;
  std::uint64_t seed = 1;
  std::string out;
};

int cmd_selftest(const SelftestArgs& a) {
  json reports = json::array();
  bool ok = true;
  for (int d = 0; d < a.draws; ++d) {
    const BlockState s = random_block_state(a.n, a.blocks_per_party, a.blocks, derive_seed(a.seed, d));
    const SelfTestReport r = selftest_verify(s, a.n, a.alpha);
    json entry = r.to_json();
    json blocks = json::array();
    for (const auto& b : s.blocks) blocks.push_back({{"weight", b.weight}, {"index", b.index}});
    entry["blocks"] = blocks;
    reports.push_back(entry);
    ok = ok && std::abs(r.ancilla_fidelity - 1) < 1e-10;
    for (const auto& [name, f] : r.observable_fidelities) ok = ok && std::abs(f - 1) < 1e-10;
  }
  emit_json(reports, a.out);
  return ok ? kOk : kCrossCheck;
}

// ---- simulate -------------------------------------------------------------------

struct SimulateArgs {
  int n = 3;
  double alpha = 1.0;
  double visibility = 1.0;
  std::uint64_t rounds = 100000;
  std::uint64_t seed = 1;
  std::string rate = "npa";
  int level = 2;
  double oversample = 1.0;
  unsigned threads = 0;
  std::string solver = "ipm";
  std::string records, raw, bits, report;
};

void write_file(const std::string& path, const std::function<void(std::ostream&)>& f) {
  if (path.empty()) return;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::BadRange, "cannot open " + path);
  f(out);
}

int cmd_simulate(const SimulateArgs& a) {
  const BellExpression expr = build_bell(a.n, a.alpha);
  const auto recs = sample_trials({a.visibility}, optimal_angles(a.n, a.alpha),
                                  InputDistribution::oversampled(a.n, 0, a.oversample), a.rounds,
                                  a.seed, a.threads);
  write_file(a.records, [&](std::ostream& o) { write_records(o, a.n, recs); });
  ExtractionParams p;
  p.source = a.rate == "closed-form" ? RateSource::ClosedForm : RateSource::Npa;
  p.level = a.level;
  const auto backend = make_backend(a.solver);
  const ExtractionResult res = certify_and_extract(recs, expr, p, derive_seed(a.seed, 0xe7), *backend);
  write_file(a.raw, [&](std::ostream& o) { write_bits(o, res.raw); });
  write_file(a.bits, [&](std::ostream& o) { write_bits(o, res.bits); });
  json j = res.report.to_json();
  j["visibility"] = a.visibility;
  j["seed"] = a.seed;
  emit_json(j, a.report);
  return kOk;
}

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::MaxIterations:
    case ErrorKind::Infeasible:
      return kSolver;
    case ErrorKind::NoViolation:
    case ErrorKind::OutputTooShort:
    case ErrorKind::InsufficientData:
      return kCrossCheck;
    default:
      return kUsage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Device-independent randomness certification for GHZ-type Bell inequalities"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "0.1.0");

  BoundsArgs bounds;
  auto* c_bounds = app.add_subcommand("bounds", "LHV and quantum bounds with cross-checks");
  c_bounds->add_option("--n", bounds.n, "parties")->required()->check(CLI::Range(2, 12));
  c_bounds->add_option("--alpha", bounds.alpha, "family parameter")->required();
  c_bounds->add_option("--starts", bounds.starts, "angle-search starts")->check(CLI::PositiveNumber);
  c_bounds->add_option("--seed", bounds.seed, "angle-search seed");
  c_bounds->add_option("--threads", bounds.threads, "worker threads (0 = all)");
  c_bounds->add_option("--format", bounds.format)->check(CLI::IsMember({"text", "json"}));
  c_bounds->add_option("--out", bounds.out, "output path (default stdout)");

  int cert_n = 3;
  double cert_alpha = 1.0;
  std::string cert_format = "json", cert_out;
  auto* c_cert = app.add_subcommand("certify", "randomness of the optimal realization");
  c_cert->add_option("--n", cert_n)->required()->check(CLI::Range(2, 12));
  c_cert->add_option("--alpha", cert_alpha)->required();
  c_cert->add_option("--format", cert_format)->check(CLI::IsMember({"text", "json"}));
  c_cert->add_option("--out", cert_out);

  int hol_n = 3, hol_points = 101;
  std::string hol_format = "csv", hol_out;
  auto* c_hol = app.add_subcommand("holevo-curve", "Holevo bound versus Bell value");
  c_hol->add_option("--n", hol_n)->check(CLI::Range(2, 12));
  c_hol->add_option("--points", hol_points);
  c_hol->add_option("--format", hol_format)->check(CLI::IsMember({"csv", "json"}));
  c_hol->add_option("--out", hol_out);

  int fig_points = 101;
  std::string fig_format = "csv", fig_out;
  auto* c_fig = app.add_subcommand("compare-fig4", "conditional-entropy comparison curves");
  c_fig->add_option("--points", fig_points);
  c_fig->add_option("--format", fig_format)->check(CLI::IsMember({"csv", "json"}));
  c_fig->add_option("--out", fig_out);

  RobustnessArgs rob;
  auto* c_rob = app.add_subcommand("robustness", "NPA guessing-probability curve");
  c_rob->add_option("--n", rob.n)->check(CLI::Range(2, 4));
  c_rob->add_option("--alpha", rob.alpha);
  c_rob->add_option("--level", rob.level)->check(CLI::Range(1, 3));
  c_rob->add_option("--points", rob.points, "grid points from the LHV to the quantum bound");
  c_rob->add_option("--bell-values", rob.bell_values, "explicit grid")->delimiter(',');
  c_rob->add_option("--target", rob.target, "global setting tuple, e.g. 000");
  c_rob->add_option("--local", rob.local, "local target party:setting, party from 1");
  c_rob->add_option("--mode", rob.mode)->check(CLI::IsMember({"equal", "at-least"}));
  c_rob->add_option("--solver", rob.solver)->check(CLI::IsMember({"ipm", "admm"}));
  c_rob->add_option("--threads", rob.threads);
  c_rob->add_option("--export-sdp", rob.export_sdp, "write the SDPs as ghzcert-sdp/1 JSON");
  c_rob->add_option("--format", rob.format)->check(CLI::IsMember({"csv", "json"}));
  c_rob->add_option("--out", rob.out);

  SelftestArgs st;
  auto* c_st = app.add_subcommand("selftest", "isometry check on random block realizations");
  c_st->add_option("--n", st.n)->check(CLI::Range(2, 6));
  c_st->add_option("--alpha", st.alpha);
  c_st->add_option("--blocks-per-party", st.blocks_per_party)->check(CLI::Range(1, kMaxBlocksPerParty));
  c_st->add_option("--blocks", st.blocks)->check(CLI::PositiveNumber);
  c_st->add_option("--draws", st.draws)->check(CLI::PositiveNumber);
  c_st->add_option("--seed", st.seed);
  c_st->add_option("--out", st.out);

  SimulateArgs sim;
  auto* c_sim = app.add_subcommand("simulate", "sample, certify and extract");
  c_sim->add_option("--n", sim.n)->check(CLI::Range(2, 4));
  c_sim->add_option("--alpha", sim.alpha);
  c_sim->add_option("--visibility", sim.visibility)->check(CLI::Range(0.0, 1.0));
  c_sim->add_option("--rounds", sim.rounds)->check(CLI::PositiveNumber);
  c_sim->add_option("--seed", sim.seed);
  c_sim->add_option("--rate", sim.rate)->check(CLI::IsMember({"npa", "closed-form"}));
  c_sim->add_option("--level", sim.level)->check(CLI::Range(1, 3));
  c_sim->add_option("--oversample", sim.oversample, "weight of the certification tuple");
  c_sim->add_option("--threads", sim.threads);
  c_sim->add_option("--solver", sim.solver)->check(CLI::IsMember({"ipm", "admm"}));
  c_sim->add_option("--records", sim.records, "line-delimited trial records");
  c_sim->add_option("--raw", sim.raw, "raw bits (binary)");
  c_sim->add_option("--bits", sim.bits, "extracted bits (binary)");
  c_sim->add_option("--report", sim.report, "JSON report (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*c_bounds) return cmd_bounds(bounds);
    if (*c_cert) return cmd_certify(cert_n, cert_alpha, cert_format, cert_out);
    if (*c_hol) return cmd_holevo_curve(hol_n, hol_points, hol_format, hol_out);
    if (*c_fig) return cmd_compare_fig4(fig_points, fig_format, fig_out);
    if (*c_rob) return cmd_robustness(rob);
    if (*c_st) return cmd_selftest(st);
    if (*c_sim) return cmd_simulate(sim);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
