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

#include "ghzcert/npa.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <thread>

#include "ghzcert/behavior.hpp"
#include "ghzcert/errors.hpp"

namespace ghzcert {

namespace {

using LinearForm = std::map<int, double>;

bool word_less(const Word& a, const Word& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

void check_level(int n, int level) {
  if (n < 2) throw Error(ErrorKind::BadArity, "NPA needs n >= 2");
  if (level < 1 || level > kMaxNpaLevel) {
    throw Error(ErrorKind::BadRange, "NPA level must be 1, 2 or 3");
  }
}

// Moment variables of one branch, keyed by their representative word.
class MomentIndex {
 public:
  MomentIndex(int n, int level) : n_(n), level_(level), words_(build_words(n, level)) {
    const int m = static_cast<int>(words_.size());
    table_.resize(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        Word prod = adjoint(words_[i]);
        prod.insert(prod.end(), words_[j].begin(), words_[j].end());
        const Word key = moment_key(prod);
        auto [it, inserted] = ids_.emplace(key, static_cast<int>(keys_.size()));
        if (inserted) keys_.push_back(key);
        table_[static_cast<std::size_t>(i) * m + j] = it->second;
      }
    }
  }

  int size() const { return static_cast<int>(keys_.size()); }
  const std::vector<Word>& words() const { return words_; }
  const std::vector<Word>& keys() const { return keys_; }

  int id(const Word& w) const {
    auto it = ids_.find(moment_key(w));
    if (it == ids_.end()) {
      throw Error(ErrorKind::Unsupported,
                  "moment " + word_str(w) + " is not in the level-" + std::to_string(level_) +
                      " moment matrix for n = " + std::to_string(n_));
    }
    return it->second;
  }

  SdpBlock block(int offset) const {
    SdpBlock b;
    b.size = static_cast<int>(words_.size());
    b.var.reserve(table_.size());
    for (int v : table_) b.var.push_back(offset + v);
    return b;
  }

 private:
  int n_;
  int level_;
  std::vector<Word> words_;
  std::vector<Word> keys_;
  std::map<Word, int> ids_;
  std::vector<int> table_;
};

void add(LinearForm& f, int var, double c) {
  if (c != 0.0) f[var] += c;
}

// <prod_{i in S} A_i> with A = 2P - 1, expanded into projector moments.
void add_correlator(LinearForm& f, const MomentIndex& idx, int offset,
                    const SettingSelector& sel, double coef) {
  std::vector<Letter> present;
  for (int i = 0; i < sel.parties(); ++i) {
    if (sel[i] != Setting::Absent) present.push_back({i, static_cast<int>(sel[i])});
  }
  const int k = static_cast<int>(present.size());
  for (std::uint32_t t = 0; t < (1u << k); ++t) {
    Word w;
    int size = 0;
    for (int b = 0; b < k; ++b) {
      if (t & (1u << b)) {
        w.push_back(present[b]);
        ++size;
      }
    }
    const double sign = ((k - size) % 2) ? -1.0 : 1.0;
    add(f, offset + idx.id(w), coef * sign * std::ldexp(1.0, size));
  }
}

LinearForm bell_form(const BellExpression& expr, const MomentIndex& idx, int offset) {
  LinearForm f;
  for (const auto& [sel, c] : expr.terms()) {
    if (c != 0.0) add_correlator(f, idx, offset, sel, c);
  }
  return f;
}

// p(a = outcomes | x = settings) for the parties listed in `parties`.
void add_probability(LinearForm& f, const MomentIndex& idx, int offset,
                     const std::vector<Letter>& letters, const std::vector<int>& outcomes) {
  // Parties with outcome 0 must carry their projector; outcome-1 parties
  // contribute (1 - P), expanded over subsets.
  std::vector<Letter> fixed, optional;
  for (std::size_t i = 0; i < letters.size(); ++i) {
    (outcomes[i] == 0 ? fixed : optional).push_back(letters[i]);
  }
  const int k = static_cast<int>(optional.size());
  for (std::uint32_t t = 0; t < (1u << k); ++t) {
    Word w = fixed;
    int extra = 0;
    for (int b = 0; b < k; ++b) {
      if (t & (1u << b)) {
        w.push_back(optional[b]);
        ++extra;
      }
    }
    add(f, offset + idx.id(w), (extra % 2) ? -1.0 : 1.0);
  }
}

SdpEquality as_equality(const LinearForm& f, double rhs) {
  SdpEquality e;
  e.terms.assign(f.begin(), f.end());
  e.rhs = rhs;
  return e;
}

double coefficient_mass(const BellExpression& expr) {
  double s = 0;
  for (const auto& [sel, c] : expr.terms()) s += std::abs(c);
  return s;
}

MomentProblem skeleton(const MomentIndex& idx, int n, int level, int branches) {
  MomentProblem mp;
  mp.n = n;
  mp.level = level;
  mp.experimental = level >= 3;
  mp.words = idx.words();
  mp.moments = idx.keys();
  mp.branches = branches;
  mp.sdp.num_vars = branches * idx.size();
  for (int e = 0; e < branches; ++e) mp.sdp.blocks.push_back(idx.block(e * idx.size()));
  // Every moment of a branch is bounded by the branch weight, itself <= 1.
  mp.sdp.bound.assign(mp.sdp.num_vars, 1.0);
  mp.sdp.objective.assign(mp.sdp.num_vars, 0.0);
  return mp;
}

}  // namespace

Word canonical(const Word& w) {
  Word sorted = w;
  std::stable_sort(sorted.begin(), sorted.end(),
                   [](const Letter& a, const Letter& b) { return a.party < b.party; });
  Word out;
  for (const Letter& l : sorted) {
    if (!out.empty() && out.back() == l) continue;
    out.push_back(l);
  }
  return out;
}

Word adjoint(const Word& w) {
  return canonical(Word(w.rbegin(), w.rend()));
}

Word moment_key(const Word& w) {
  const Word c = canonical(w);
  const Word a = adjoint(c);
  return std::min(c, a);
}

std::string word_str(const Word& w) {
  if (w.empty()) return "1";
  std::string s;
  for (const Letter& l : w) {
    s += static_cast<char>('a' + l.party);
    s += static_cast<char>('0' + l.setting);
  }
  return s;
}

std::vector<Word> build_words(int n, int level) {
  check_level(n, level);
  if (n > kMaxParties) throw Error(ErrorKind::TooLarge, "too many parties");
  std::vector<Letter> letters;
  for (int p = 0; p < n; ++p)
    for (int s = 0; s < 2; ++s) letters.push_back({p, s});
  std::set<Word> found{Word{}};
  std::vector<Word> frontier{Word{}};
  for (int len = 1; len <= level; ++len) {
    std::vector<Word> next;
    for (const Word& w : frontier) {
      for (const Letter& l : letters) {
        Word x = w;
        x.push_back(l);
        next.push_back(x);
        found.insert(canonical(x));
      }
    }
    frontier = std::move(next);
  }
  std::vector<Word> words(found.begin(), found.end());
  std::sort(words.begin(), words.end(), word_less);
  const bool too_large = (level >= 2 && n > 4) || (level >= 3 && n > 3);
  if (too_large) {
    throw Error(ErrorKind::TooLarge, "level-" + std::to_string(level) + " basis for n = " +
                                         std::to_string(n) + " has " +
                                         std::to_string(words.size()) + " words");
  }
  return words;
}

GuessingTarget GuessingTarget::global(SettingSelector settings) {
  if (!settings.is_full()) {
    throw Error(ErrorKind::BadSelector, "global target needs every party's setting");
  }
  GuessingTarget t;
  t.is_global = true;
  t.settings = std::move(settings);
  return t;
}

GuessingTarget GuessingTarget::local(int party, int setting) {
  if (party < 0 || setting < 0 || setting > 1) {
    throw Error(ErrorKind::BadIndex, "bad local target");
  }
  GuessingTarget t;
  t.is_global = false;
  t.party = party;
  t.setting = setting;
  return t;
}

std::string GuessingTarget::str() const {
  if (is_global) return settings.str();
  return "party" + std::to_string(party + 1) + ":" + std::to_string(setting);
}

MomentProblem build_max_bell_sdp(const BellExpression& expr, int level) {
  const int n = expr.parties();
  check_level(n, level);
  const MomentIndex idx(n, level);
  MomentProblem mp = skeleton(idx, n, level, 1);
  for (const auto& [v, c] : bell_form(expr, idx, 0)) mp.sdp.objective[v] += c;
  mp.sdp.equalities.push_back(as_equality({{idx.id({}), 1.0}}, 1.0));
  return mp;
}

SdpSolution npa_max_bell(const BellExpression& expr, int level, const SdpBackend& backend) {
  return backend.solve(build_max_bell_sdp(expr, level).sdp);
}

MomentProblem build_guessing_sdp(const BellExpression& expr, double bell_value,
                                 const GuessingTarget& target, int level,
                                 const SdpBackend& backend, BellConstraint mode) {
  const int n = expr.parties();
  check_level(n, level);
  if (!std::isfinite(bell_value)) throw Error(ErrorKind::BadRange, "Bell value must be finite");
  if (target.is_global && target.settings.parties() != n) {
    throw Error(ErrorKind::BadSelector, "target has the wrong number of parties");
  }
  if (!target.is_global && target.party >= n) {
    throw Error(ErrorKind::BadIndex, "target party out of range");
  }
  const MomentIndex idx(n, level);

  const SdpSolution max_bell = require_converged(npa_max_bell(expr, level, backend));
  if (bell_value > max_bell.objective + 1e-6 * (1 + std::abs(max_bell.objective))) {
    throw Error(ErrorKind::InfeasibleValue,
                "Bell value " + std::to_string(bell_value) + " exceeds the level-" +
                    std::to_string(level) + " maximum " + std::to_string(max_bell.objective));
  }

  const int branches = target.is_global ? (1 << n) : 2;
  MomentProblem mp = skeleton(idx, n, level, branches);
  const int k = idx.size();

  LinearForm weights, bell;
  for (int e = 0; e < branches; ++e) {
    const int offset = e * k;
    add(weights, offset + idx.id({}), 1.0);
    for (const auto& [v, c] : bell_form(expr, idx, offset)) add(bell, v, c);

    LinearForm guess;
    if (target.is_global) {
      std::vector<Letter> letters;
      std::vector<int> outcomes;
      for (int i = 0; i < n; ++i) {
        letters.push_back({i, static_cast<int>(target.settings[i])});
        outcomes.push_back(party_bit(static_cast<std::uint32_t>(e), i, n));
      }
      add_probability(guess, idx, offset, letters, outcomes);
    } else {
      add_probability(guess, idx, offset, {{target.party, target.setting}}, {e});
    }
    for (const auto& [v, c] : guess) mp.sdp.objective[v] += c;
  }

  mp.sdp.equalities.push_back(as_equality(weights, 1.0));
  if (mode == BellConstraint::AtLeast) {
    // Bell - s = value with s >= 0 held in its own 1x1 block.
    const int slack = mp.sdp.num_vars++;
    mp.sdp.objective.push_back(0.0);
    mp.sdp.bound.push_back(coefficient_mass(expr) + std::abs(bell_value));
    mp.sdp.blocks.push_back({1, {slack}});
    add(bell, slack, -1.0);
  }
  mp.sdp.equalities.push_back(as_equality(bell, bell_value));
  return mp;
}

GuessingBound solve_guessing(const BellExpression& expr, double bell_value,
                             const GuessingTarget& target, int level,
                             const SdpBackend& backend, BellConstraint mode) {
  const MomentProblem mp = build_guessing_sdp(expr, bell_value, target, level, backend, mode);
  SdpSolution s = backend.solve(mp.sdp);
  // The dual bound is a certified upper bound; the primal objective is not.
  const double g = std::clamp(s.dual_bound, 0.0, 1.0);
  return {g, -std::log2(g), std::move(s)};
}

std::vector<RobustnessRow> robustness_curve(const BellExpression& expr, int level,
                                            const std::vector<double>& bell_values,
                                            const GuessingTarget& target,
                                            const SdpBackend& backend, BellConstraint mode,
                                            unsigned threads) {
  std::vector<std::optional<GuessingBound>> results(bell_values.size());
  std::vector<std::exception_ptr> errors(bell_values.size());
  const unsigned workers = std::max(
      1u, std::min<unsigned>(threads ? threads : std::thread::hardware_concurrency(),
                             static_cast<unsigned>(bell_values.size())));
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t k = w; k < bell_values.size(); k += workers) {
        try {
          results[k] = solve_guessing(expr, bell_values[k], target, level, backend, mode);
        } catch (...) {
          errors[k] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<RobustnessRow> rows;
  for (std::size_t k = 0; k < bell_values.size(); ++k) {
    const GuessingBound& r = *results[k];
    require_converged(r.solution);
    rows.push_back({bell_values[k], r.g_upper, r.entropy_lower, level,
                    r.solution.primal_residual});
  }
  return rows;
}

}  // namespace ghzcert
