// Copyright 2026 The irsos Authors. All rights reserved.
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

#include "irsos/nash.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>

namespace irsos {
namespace {

double Seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

const BlockStructure& Structure(const Polynomial& u) {
  if (!u.structure()) {
    throw StructureMismatchError("utility needs a block structure");
  }
  return *u.structure();
}

void CheckUtilities(const std::vector<Polynomial>& utilities) {
  if (utilities.size() < 2) {
    throw std::invalid_argument("equilibrium search needs >= 2 players");
  }
  const BlockStructure& s = Structure(utilities[0]);
  if (s.num_players() != utilities.size()) {
    throw StructureMismatchError("need one utility per player");
  }
  for (const Polynomial& u : utilities) {
    if (!utilities[0].SameLayout(u)) {
      throw StructureMismatchError("utilities have different layouts");
    }
  }
}

// Max violation of the player's simplex constraints at a local strategy.
double StrategyViolation(const BlockStructure& s, int player,
                         std::span<const double> v) {
  auto [first, count] = s.PlayerRange(player);
  if (v.size() != count) return 1e300;
  double worst = 0.0;
  for (int j = 0; j < s.num_infosets(player); ++j) {
    const auto& b = s.block(s.BlockIndex(player, j));
    double sum = 0;
    for (int a = 0; a < b.size; ++a) {
      double x = v[b.offset - first + a];
      worst = std::max(worst, -x);
      sum += x;
    }
    worst = std::max(worst, std::abs(sum - 1.0));
  }
  return worst;
}

std::vector<double> Local(const BlockStructure& s, int player,
                          std::span<const double> full) {
  auto [first, count] = s.PlayerRange(player);
  return std::vector<double>(full.begin() + first,
                             full.begin() + first + count);
}

Verification FromHierarchy(const HierarchyResult& r, double current,
                           const std::string& method) {
  Verification v;
  v.current = current;
  v.method = method;
  v.exact = r.exact;
  v.diagnostics = r.diagnostics;
  if (r.bound) v.best = *r.bound;
  if (!r.atoms.empty()) v.best_response = r.atoms[0].point;
  v.gain = v.best - current;
  return v;
}

}  // namespace

Eigen::MatrixXd RandomTheta(int num_vars, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd a(num_vars + 1, num_vars + 1);
  for (int r = 0; r < a.rows(); ++r) {
    for (int c = 0; c < a.cols(); ++c) a(r, c) = g(rng);
  }
  return a.transpose() * a +
         1e-3 * Eigen::MatrixXd::Identity(num_vars + 1, num_vars + 1);
}

Polynomial Deviate(const Polynomial& u, int player,
                   std::span<const double> deviation) {
  const BlockStructure& s = Structure(u);
  auto [first, count] = s.PlayerRange(player);
  if (deviation.size() != count) {
    throw StructureMismatchError("deviation has the wrong length");
  }
  std::vector<bool> fixed(s.num_variables(), false);
  std::vector<double> values(s.num_variables(), 0.0);
  for (int a = 0; a < count; ++a) {
    fixed[first + a] = true;
    values[first + a] = deviation[a];
  }
  return u.PartialEvaluate(fixed, values);
}

Polynomial Restrict(const Polynomial& u, int player,
                    std::span<const double> profile) {
  const BlockStructure& s = Structure(u);
  auto [first, count] = s.PlayerRange(player);
  std::vector<bool> fixed(s.num_variables(), true);
  for (int a = 0; a < count; ++a) fixed[first + a] = false;
  Polynomial partial = u.PartialEvaluate(fixed, profile);
  auto local = std::make_shared<const BlockStructure>(s.PlayerStructure(player));
  Polynomial out(local);
  for (const auto& [m, c] : partial.terms()) {
    std::vector<std::pair<int, int>> shifted;
    for (const auto& [v, e] : m.terms()) shifted.push_back({v - first, e});
    out.AddTerm(MultiIndex(shifted), c);
  }
  return out;
}

std::vector<std::vector<double>> PlayerVertices(const BlockStructure& s,
                                                int player, long long cap) {
  auto [first, count] = s.PlayerRange(player);
  long long total = 1;
  for (int j = 0; j < s.num_infosets(player); ++j) {
    total *= s.num_actions(player, j);
    if (total > cap) {
      throw VertexCapExceededError("player " + std::to_string(player) +
                                   " has more than " + std::to_string(cap) +
                                   " pure strategies");
    }
  }
  std::vector<std::vector<double>> out;
  std::vector<int> choice(s.num_infosets(player), 0);
  for (long long k = 0; k < total; ++k) {
    std::vector<double> v(count, 0.0);
    for (int j = 0; j < choice.size(); ++j) {
      const auto& b = s.block(s.BlockIndex(player, j));
      v[b.offset - first + choice[j]] = 1.0;
    }
    out.push_back(std::move(v));
    for (int j = choice.size() - 1; j >= 0; --j) {
      if (++choice[j] < s.num_actions(player, j)) break;
      choice[j] = 0;
    }
  }
  return out;
}

bool IsMultiAffine(const Polynomial& u) {
  const BlockStructure& s = Structure(u);
  for (const auto& [m, c] : u.terms()) {
    std::vector<int> seen(s.num_blocks(), 0);
    for (const auto& [v, e] : m.terms()) {
      if (e > 1 || ++seen[s.variable(v).block] > 1) return false;
    }
  }
  return true;
}

SelectorProgram::SelectorProgram(std::vector<Polynomial> utilities,
                                 Eigen::MatrixXd theta, bool welfare)
    : utilities_(std::move(utilities)),
      theta_(std::move(theta)),
      welfare_(welfare) {
  CheckUtilities(utilities_);
  structure_ = utilities_[0].structure();
  const int n = structure_->num_variables();
  if (theta_.rows() != n + 1 || theta_.cols() != n + 1) {
    throw std::invalid_argument("Theta must have dimension n0 + 1");
  }
  if ((theta_ - theta_.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("Theta must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(theta_);
  if (es.eigenvalues()(0) <= 0) {
    throw std::invalid_argument("Theta must be positive definite");
  }
  kkt_ = KktAugmentedSet(utilities_, structure_);
  cuts_.resize(utilities_.size());
}

int SelectorProgram::num_cuts() const {
  int n = 0;
  for (const auto& c : cuts_) n += c.size();
  return n;
}

void SelectorProgram::AddCut(int player, std::vector<double> deviation) {
  if (StrategyViolation(*structure_, player, deviation) > 1e-8) {
    throw std::invalid_argument("cut deviation is not a strategy");
  }
  cuts_.at(player).push_back(std::move(deviation));
}

Polynomial SelectorProgram::CutPolynomial(
    int player, std::span<const double> deviation) const {
  return (utilities_[player] - Deviate(utilities_[player], player, deviation))
      .Cleaned(0.0);
}

Polynomial SelectorProgram::Phi() const {
  const int n = structure_->num_variables();
  auto basis = [&](int k) {
    return k == 0 ? Polynomial::Constant(structure_, 1.0)
                  : Polynomial::Variable(structure_, k - 1);
  };
  Polynomial phi(structure_);
  for (int r = 0; r <= n; ++r) {
    for (int c = 0; c <= n; ++c) {
      if (theta_(r, c) != 0.0) phi += theta_(r, c) * (basis(r) * basis(c));
    }
  }
  return phi;
}

Polynomial SelectorProgram::Objective() const {
  if (!welfare_) return -1.0 * Phi();
  Polynomial w(structure_);
  for (const Polynomial& u : utilities_) w += u;
  return w;
}

SemiAlgebraicSet SelectorProgram::Set() const {
  SemiAlgebraicSet set = kkt_;
  for (int i = 0; i < cuts_.size(); ++i) {
    for (const auto& v : cuts_[i]) {
      Polynomial g = CutPolynomial(i, v);
      if (!g.IsZero()) set.inequalities.push_back(g);
    }
  }
  return set;
}

Verification VerifyCandidate(const std::vector<Polynomial>& utilities,
                             std::span<const double> candidate, int player,
                             const NashOptions& options) {
  const Polynomial& u = utilities.at(player);
  const BlockStructure& s = Structure(u);
  SemiAlgebraicSet box = SimplexSet(u.structure());
  if (box.MaxViolation(candidate) > 1e-6) {
    throw std::invalid_argument("candidate is not a strategy profile");
  }
  Polynomial p = Restrict(u, player, candidate);
  double current = u.Evaluate(candidate);

  Verification v;
  if (p.degree() <= 0) {
    v.current = current;
    v.best = p.constant_term();
    v.gain = v.best - current;
    v.best_response = Local(s, player, candidate);
    v.exact = true;
    v.method = "constant";
    return v;
  }
  v = FromHierarchy(RunHierarchy(p, Formulation::kKktAugmented, options.verify),
                    current, "kkt_augmented");
  if (!v.exact && IsMultiAffine(p)) {
    HierarchyOptions vr = options.verify;
    vr.d_max = 0;
    std::vector<std::string> diag = v.diagnostics;
    v = FromHierarchy(RunHierarchy(p, Formulation::kVertexRestricted, vr),
                      current, "vertex_restricted");
    diag.insert(diag.end(), v.diagnostics.begin(), v.diagnostics.end());
    v.diagnostics = diag;
  }
  if (!v.exact) {
    std::vector<std::string> diag = v.diagnostics;
    v = FromHierarchy(RunHierarchy(p, Formulation::kVanilla, options.verify),
                      current, "vanilla");
    diag.insert(diag.end(), v.diagnostics.begin(), v.diagnostics.end());
    v.diagnostics = diag;
  }
  if (v.best_response.empty()) {
    // No extracted maximizer: fall back to the best pure strategy as the
    // deviation, keeping the relaxation bound as the gain.
    double best = -1e300;
    for (const auto& vert : PlayerVertices(s, player, options.vertex_cap)) {
      double val = p.Evaluate(vert);
      if (val > best) best = val, v.best_response = vert;
    }
    v.diagnostics.push_back("best response taken from pure strategies");
  }
  return v;
}

std::string NashKindName(NashOutcome::Kind kind) {
  switch (kind) {
    case NashOutcome::Kind::kEquilibrium:
      return "equilibrium";
    case NashOutcome::Kind::kNonexistence:
      return "nonexistence";
    case NashOutcome::Kind::kInconclusive:
      return "inconclusive";
  }
  return "?";
}

Json NashOutcome::ToJson(const BlockStructure* structure) const {
  Json j;
  j["verdict"] = NashKindName(kind);
  j["method"] = method;
  j["seed"] = seed;
  if (kind == Kind::kEquilibrium) {
    j["equilibrium"] = structure ? StrategyToJson(*structure, equilibrium)
                                 : Json(equilibrium);
    j["point"] = equilibrium;
  } else {
    j["equilibrium"] = nullptr;
  }
  j["omega"] = gains;
  j["cuts"] = cuts;
  j["evidence"] = evidence;
  Json rs = Json::array();
  for (const RoundLog& r : rounds) {
    Json rj;
    rj["round"] = r.round;
    rj["selector"] = r.selector;
    rj["selector_value"] = r.selector_value ? Json(*r.selector_value)
                                            : Json(nullptr);
    rj["degree"] = r.degree ? Json(*r.degree) : Json(nullptr);
    rj["candidate"] = r.candidate;
    rj["omega"] = r.gains;
    rj["cuts_added"] = r.cuts_added;
    rj["seconds"] = r.seconds;
    rs.push_back(rj);
  }
  j["rounds"] = rs;
  j["diagnostics"] = diagnostics;
  j["seconds"] = seconds;
  return j;
}

namespace {

// Runs the selector once and fills the round log. Returns the result.
HierarchyResult Select(const SelectorProgram& prog,
                       const HierarchyOptions& options, RoundLog& log,
                       NashOutcome& out) {
  HierarchyResult r = SolvePop(prog.Objective(), prog.Set(), options,
                               Formulation::kKktAugmented);
  for (const auto& d : r.diagnostics) {
    out.diagnostics.push_back("round " + std::to_string(log.round) + ": " + d);
  }
  if (r.infeasible) {
    log.selector = "infeasible";
    log.degree = r.degrees.empty() ? std::nullopt
                                   : std::optional<int>(r.degrees.back().d);
  } else if (r.exact) {
    log.selector = "exact";
    log.degree = r.exact_degree;
    log.selector_value = r.bound;
    log.candidate = r.atoms[0].point;
  } else {
    log.selector = "inconclusive";
    if (!r.degrees.empty()) log.degree = r.degrees.back().d;
    log.selector_value = r.bound;
  }
  return r;
}

void Nonexistence(const RoundLog& log, int cuts, NashOutcome& out) {
  out.kind = NashOutcome::Kind::kNonexistence;
  out.evidence = "selector moment relaxation infeasible at order " +
                 (log.degree ? std::to_string(*log.degree) : "?") + " with " +
                 std::to_string(cuts) + " cuts";
}

std::vector<Verification> VerifyAll(const std::vector<Polynomial>& utilities,
                                    const std::vector<double>& candidate,
                                    const NashOptions& options,
                                    RoundLog& log, NashOutcome& out) {
  std::vector<Verification> vs;
  for (int i = 0; i < utilities.size(); ++i) {
    vs.push_back(VerifyCandidate(utilities, candidate, i, options));
    log.gains.push_back(vs.back().gain);
    if (!vs.back().exact) {
      out.diagnostics.push_back("round " + std::to_string(log.round) +
                                ": verification of player " +
                                std::to_string(i) + " not exact (" +
                                vs.back().method + ")");
    }
  }
  return vs;
}

}  // namespace

NashOutcome SvcSolve(const std::vector<Polynomial>& utilities,
                     const NashOptions& options) {
  auto start = std::chrono::steady_clock::now();
  CheckUtilities(utilities);
  NashOutcome out;
  out.method = "svc";
  out.seed = options.seed;
  SelectorProgram prog(
      utilities,
      RandomTheta(utilities[0].structure()->num_variables(), options.seed),
      options.welfare);
  HierarchyOptions sel = options.selector;
  for (int round = 1; round <= options.max_rounds; ++round) {
    auto t0 = std::chrono::steady_clock::now();
    RoundLog log;
    log.round = round;
    HierarchyResult r = Select(prog, sel, log, out);
    if (options.verbose) {
      std::fprintf(stderr, "[svc] round %d selector %s cuts %d\n", round,
                   log.selector.c_str(), prog.num_cuts());
    }
    if (log.selector != "exact") {
      log.seconds = Seconds(t0);
      out.rounds.push_back(log);
      if (log.selector == "infeasible") {
        Nonexistence(log, prog.num_cuts(), out);
      } else {
        out.evidence = "selector not exact up to the maximum order";
      }
      break;
    }
    // Later rounds only add constraints; start where this one ended.
    if (r.exact_degree && sel.d_max > 0) {
      sel.d_start = std::min(*r.exact_degree, sel.d_max);
    }
    std::vector<Verification> vs =
        VerifyAll(utilities, log.candidate, options, log, out);
    bool all_ok = true;
    for (int i = 0; i < vs.size(); ++i) {
      if (vs[i].gain <= options.eps) continue;
      all_ok = false;
      prog.AddCut(i, vs[i].best_response);
      ++log.cuts_added;
    }
    log.seconds = Seconds(t0);
    out.rounds.push_back(log);
    if (all_ok) {
      out.kind = NashOutcome::Kind::kEquilibrium;
      out.equilibrium = log.candidate;
      out.gains = log.gains;
      out.evidence = "every unilateral gain <= " + std::to_string(options.eps);
      break;
    }
    if (log.cuts_added == 0) {
      out.evidence = "no valid cut for the current candidate";
      break;
    }
    if (round == options.max_rounds) out.evidence = "round limit reached";
  }
  out.cuts = prog.num_cuts();
  out.seconds = Seconds(start);
  return out;
}

NashOutcome NamOneShot(const std::vector<Polynomial>& utilities,
                       const NashOptions& options) {
  auto start = std::chrono::steady_clock::now();
  CheckUtilities(utilities);
  for (const Polynomial& u : utilities) {
    if (!IsMultiAffine(u)) {
      throw std::invalid_argument(
          "one-shot vertex selection needs multi-affine utilities");
    }
  }
  const BlockStructure& s = *utilities[0].structure();
  NashOutcome out;
  out.method = "nam";
  out.seed = options.seed;
  SelectorProgram prog(utilities, RandomTheta(s.num_variables(), options.seed),
                       options.welfare);
  for (int i = 0; i < utilities.size(); ++i) {
    for (auto& v : PlayerVertices(s, i, options.vertex_cap)) {
      prog.AddCut(i, std::move(v));
    }
  }
  auto t0 = std::chrono::steady_clock::now();
  RoundLog log;
  log.round = 1;
  Select(prog, options.selector, log, out);
  if (log.selector == "infeasible") {
    Nonexistence(log, prog.num_cuts(), out);
  } else if (log.selector == "exact") {
    std::vector<Verification> vs =
        VerifyAll(utilities, log.candidate, options, log, out);
    bool all_ok = std::all_of(vs.begin(), vs.end(), [&](const auto& v) {
      return v.gain <= options.eps;
    });
    if (all_ok) {
      out.kind = NashOutcome::Kind::kEquilibrium;
      out.equilibrium = log.candidate;
      out.gains = log.gains;
      out.evidence = "every unilateral gain <= " + std::to_string(options.eps);
    } else {
      out.evidence = "selected point fails verification";
    }
  } else {
    out.evidence = "selector not exact up to the maximum order";
  }
  log.seconds = Seconds(t0);
  out.rounds.push_back(log);
  out.cuts = prog.num_cuts();
  out.seconds = Seconds(start);
  return out;
}

}  // namespace irsos
