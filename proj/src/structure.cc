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

#include "irsos/structure.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <random>

#include "irsos/sdp.h"

namespace irsos {
namespace {

double Seconds(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// Uniform point of the product of simplices, or of [-1, 1]^n without one.
std::vector<double> SamplePoint(const BlockStructure* s, int n, bool simplex,
                                std::mt19937_64& rng) {
  std::vector<double> x(n);
  if (simplex && s != nullptr) {
    std::exponential_distribution<double> e(1.0);
    for (const auto& b : s->blocks()) {
      double sum = 0;
      for (int a = 0; a < b.size; ++a) sum += x[b.offset + a] = e(rng);
      for (int a = 0; a < b.size; ++a) x[b.offset + a] /= sum;
    }
  } else {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (double& v : x) v = u(rng);
  }
  return x;
}

PolyMatrix Negated(PolyMatrix m) {
  for (Polynomial& p : m.entries) p *= -1.0;
  return m;
}

}  // namespace

Json SosMatrixCertificate::ToJson() const {
  Json j;
  j["kind"] = kind;
  if (player >= 0) j["player"] = player;
  j["certified"] = certified;
  j["falsified"] = falsified;
  j["margin"] = margin;
  j["sdp_status"] = sdp_status;
  if (falsified) {
    j["witness"] = {{"point", witness_point},
                    {"direction", witness_direction},
                    {"value", witness_value}};
  }
  Json b = Json::array();
  for (const auto& [z, m] : basis) {
    b.push_back("z" + std::to_string(z) +
                (m.is_constant() ? "" : "*" + m.ToString()));
  }
  j["basis"] = b;
  Json g = Json::array();
  for (int r = 0; r < gram.rows(); ++r) {
    std::vector<double> row(gram.cols());
    for (int c = 0; c < gram.cols(); ++c) row[c] = gram(r, c);
    g.push_back(row);
  }
  j["gram"] = g;
  return j;
}

SosMatrixCertificate CertifySosMatrix(const PolyMatrix& m,
                                      const CertifyOptions& options) {
  SosMatrixCertificate cert;
  const int n = m.rows;
  if (n == 0) {
    cert.certified = true;
    cert.sdp_status = "empty";
    return cert;
  }
  const int nv = m.entries[0].num_variables();
  const BlockStructure* structure = m.entries[0].structure().get();
  double scale = 0.0;
  for (const Polynomial& p : m.entries) {
    scale = std::max(scale, p.MaxAbsCoefficient());
  }

  std::mt19937_64 rng(options.seed);
  for (int k = 0; k < options.samples && scale > 0; ++k) {
    std::vector<double> x = SamplePoint(structure, nv, k % 2 == 0, rng);
    std::vector<double> v = m.Evaluate(x);
    Eigen::MatrixXd mat =
        Eigen::Map<const Eigen::MatrixXd>(v.data(), n, n).transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mat);
    if (es.eigenvalues()(0) < -options.falsify_tol * scale) {
      cert.falsified = true;
      cert.witness_point = x;
      Eigen::VectorXd z = es.eigenvectors().col(0);
      cert.witness_direction.assign(z.data(), z.data() + n);
      cert.witness_value = es.eigenvalues()(0);
      cert.sdp_status = "skipped";
      return cert;
    }
  }

  int k = (m.MaxDegree() + 1) / 2;
  for (int a = 0; a < n; ++a) {
    for (const MultiIndex& beta : MonomialsUpToDegree(nv, k)) {
      cert.basis.push_back({a, beta});
    }
  }
  const int dim = cert.basis.size();
  if (scale == 0.0) {
    cert.certified = true;
    cert.sdp_status = "zero";
    cert.gram = Eigen::MatrixXd::Zero(dim, dim);
    return cert;
  }

  // z_a is variable nv + a of the scalarized polynomial.
  auto key = [nv](int a, int b, const MultiIndex& mu) {
    return mu * MultiIndex::Var(nv + a) * MultiIndex::Var(nv + b);
  };
  std::map<MultiIndex, double> target;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      for (const auto& [mono, c] : m(a, b).terms()) {
        target[key(a, b, mono)] += c / scale;
      }
    }
  }

  SdpProblem prob;
  prob.sense = SdpProblem::Sense::kMaximize;
  int t = prob.AddVariable();
  prob.objective[t] = 1.0;
  int block = prob.AddBlock(dim);
  std::map<MultiIndex, SdpProblem::Equality> rows;
  for (int i = 0; i < dim; ++i) {
    prob.AddEntry(t, block, i, i, -1.0);
    for (int j = i; j < dim; ++j) {
      int q = prob.AddVariable();
      prob.AddEntry(q, block, i, j, 1.0);
      const auto& [a, ba] = cert.basis[i];
      const auto& [b, bb] = cert.basis[j];
      rows[key(a, b, ba * bb)].terms.push_back({q, i == j ? 1.0 : 2.0});
    }
  }
  for (auto& [mono, eq] : rows) {
    auto it = target.find(mono);
    eq.rhs = it == target.end() ? 0.0 : it->second;
    prob.equalities.push_back(std::move(eq));
  }

  SdpOptions sdp;
  sdp.tol = options.sdp_tol;
  SdpSolution sol = SolveSdp(prob, sdp);
  cert.sdp_status = SdpStatusName(sol.status);
  if (!SolutionUsable(sol)) return cert;
  cert.margin = sol.x(t);
  cert.certified = cert.margin >= -options.margin_tol;
  cert.gram = sol.primal[block] +
              sol.x(t) * Eigen::MatrixXd::Identity(dim, dim);
  cert.gram *= scale;
  return cert;
}

PolyMatrix TangentProjection(const PolyMatrix& m, const BlockStructure& s,
                             int first) {
  // Column k of A is e_{plus[k]} - e_{minus[k]}, indices relative to first.
  std::vector<int> plus, minus;
  for (const auto& b : s.blocks()) {
    if (b.offset < first || b.offset + b.size > first + m.rows) continue;
    const int last = b.offset + b.size - 1 - first;
    for (int a = 0; a + 1 < b.size; ++a) {
      plus.push_back(b.offset + a - first);
      minus.push_back(last);
    }
  }
  const int k = plus.size();
  PolyMatrix out{k, k, {}};
  if (k == 0) return out;
  out.entries.assign(k * k, m.entries[0].ZeroLike());
  for (int p = 0; p < k; ++p) {
    for (int q = 0; q < k; ++q) {
      out(p, q) = m(plus[p], plus[q]) - m(plus[p], minus[q]) -
                  m(minus[p], plus[q]) + m(minus[p], minus[q]);
    }
  }
  return out;
}

Polynomial EliminateLastActions(const Polynomial& u) {
  if (!u.structure()) throw StructureMismatchError("needs a block structure");
  const BlockStructure& s = *u.structure();
  std::vector<Polynomial> sub;
  for (int v = 0; v < s.num_variables(); ++v) {
    const auto& b = s.block(s.variable(v).block);
    if (v != b.offset + b.size - 1) {
      sub.push_back(u.VariableLike(v));
      continue;
    }
    Polynomial last = u.ConstantLike(1.0);
    for (int a = 0; a + 1 < b.size; ++a) last -= u.VariableLike(b.offset + a);
    sub.push_back(std::move(last));
  }
  Polynomial out = u.ZeroLike();
  for (const auto& [m, c] : u.terms()) {
    Polynomial t = u.ConstantLike(c);
    for (const auto& [v, e] : m.terms()) {
      for (int k = 0; k < e; ++k) t = t * sub[v];
    }
    out += t;
  }
  return out.Cleaned(0.0);
}

PolyMatrix TangentHessian(const Polynomial& u, int player) {
  Polynomial r = EliminateLastActions(u);
  const BlockStructure& s = *u.structure();
  return TangentProjection(HessianBlock(r, player), s,
                           s.PlayerRange(player).first);
}

PolyMatrix TangentSymmetrizedJacobian(
    const std::vector<Polynomial>& utilities) {
  if (utilities.empty()) return {};
  std::vector<Polynomial> r;
  for (const Polynomial& u : utilities) r.push_back(EliminateLastActions(u));
  return TangentProjection(SymmetrizedJacobian(r), *utilities[0].structure(),
                           0);
}

std::vector<SosMatrixCertificate> CertifySosConcave(
    const std::vector<Polynomial>& utilities, const CertifyOptions& options) {
  std::vector<SosMatrixCertificate> out;
  for (int i = 0; i < utilities.size(); ++i) {
    SosMatrixCertificate c =
        CertifySosMatrix(Negated(TangentHessian(utilities[i], i)), options);
    c.kind = "sos_concave";
    c.player = i;
    out.push_back(std::move(c));
  }
  return out;
}

SosMatrixCertificate CertifySosMonotone(const std::vector<Polynomial>& utilities,
                                        const CertifyOptions& options) {
  SosMatrixCertificate c =
      CertifySosMatrix(Negated(TangentSymmetrizedJacobian(utilities)),
                       options);
  c.kind = "sos_monotone";
  return c;
}

SosMatrixCertificate CertifySosConvex(const Polynomial& u,
                                      const CertifyOptions& options) {
  const BlockStructure* s = u.structure().get();
  PolyMatrix h;
  if (s != nullptr && s->num_players() == 1) {
    h = TangentHessian(u, 0);
  } else {
    int n = u.num_variables();
    h = PolyMatrix{n, n, {}};
    h.entries.assign(n * n, u.ZeroLike());
    for (int a = 0; a < n; ++a) {
      Polynomial da = u.Derivative(a);
      for (int b = 0; b < n; ++b) h(a, b) = da.Derivative(b);
    }
  }
  SosMatrixCertificate c = CertifySosMatrix(h, options);
  c.kind = "sos_convex";
  return c;
}

HierarchyResult SolveFirstLevel(const Polynomial& u,
                                const HierarchyOptions& options, double tol) {
  if (!u.structure() || u.structure()->num_players() != 1) {
    throw StructureMismatchError("first-level solve expects a single player");
  }
  auto start = std::chrono::steady_clock::now();
  SemiAlgebraicSet set = SimplexSet(u.structure());
  HierarchyResult result;
  result.formulation = Formulation::kVanilla;
  result.min_order = set.MinimalOrder(u);
  const int d = result.min_order;

  DegreeRecord rec;
  rec.d = d;
  MomentRelaxation rel = BuildMomentRelaxation(u, set, d, options.moment);
  if (rel.infeasible) {
    rec.status = "infeasible";
    result.infeasible = true;
    result.degrees.push_back(rec);
    result.seconds = Seconds(start);
    return result;
  }
  rec.num_free = rel.space->num_free();
  rec.matrix_size = rel.MomentMatrixSize();
  SdpOptions sdp;
  sdp.tol = options.tol;
  sdp.max_iter = options.max_iter;
  SdpSolution sol = SolveSdp(rel.problem, sdp);
  rec.status = SdpStatusName(sol.status);
  if (!SolutionUsable(sol)) {
    result.degrees.push_back(rec);
    result.diagnostics.push_back("SDP status " + rec.status);
    result.seconds = Seconds(start);
    return result;
  }
  rec.moment_value = sol.objective;
  result.bound = sol.objective;
  if (options.compute_sos) {
    SdpSolution ss =
        SolveSdp(BuildSosRelaxation(u, set, d, options.moment).problem, sdp);
    rec.sos_status = SdpStatusName(ss.status);
    if (SolutionUsable(ss)) rec.sos_value = ss.objective;
  }
  MomentVector y = rel.Moments(sol.x);
  rec.rank = NumericalRank(y.Matrix(d), options.rank_tol);
  rec.flat_order = Flatness(y, result.min_order, options.rank_tol);

  const Reduction& red = rel.space->reduction();
  std::vector<double> first(red.num_reduced());
  for (int v = 0; v < red.num_reduced(); ++v) first[v] = y[MultiIndex::Var(v)];
  std::vector<double> point = red.Lift(first);
  double value = u.Evaluate(point);
  double violation = set.MaxViolation(point);
  result.atoms.push_back({point, 1.0, value});
  result.exact = violation <= tol && std::abs(value - sol.objective) <= tol;
  if (result.exact) {
    result.exact_degree = d;
    result.flat_order = rec.flat_order;
  } else {
    result.diagnostics.push_back(
        "first-moment point value " + std::to_string(value) +
        " vs bound " + std::to_string(sol.objective) + ", violation " +
        std::to_string(violation));
  }
  rec.seconds = Seconds(start);
  result.degrees.push_back(rec);
  result.seconds = Seconds(start);
  return result;
}

HierarchyResult SolveSosConcave(const Polynomial& u,
                                const HierarchyOptions& options,
                                const CertifyOptions& certify) {
  std::vector<SosMatrixCertificate> certs = CertifySosConcave({u}, certify);
  if (!certs[0].certified) {
    throw NotCertifiedError("objective is not certified SOS-concave");
  }
  return SolveFirstLevel(u, options);
}

}  // namespace irsos
