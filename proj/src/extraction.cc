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

#include "irsos/extraction.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace irsos {

using Eigen::MatrixXd;
using Eigen::VectorXd;

std::string ExtractionErrorName(ExtractionError::Kind kind) {
  switch (kind) {
    case ExtractionError::Kind::kNotFlat:
      return "NotFlat";
    case ExtractionError::Kind::kAtomInfeasible:
      return "AtomInfeasible";
    case ExtractionError::Kind::kDegenerateEchelon:
      return "DegenerateEchelon";
  }
  return "?";
}

VectorXd Nnls(const MatrixXd& a, const VectorXd& b) {
  const int n = a.cols();
  VectorXd x = VectorXd::Zero(n);
  std::vector<bool> passive(n, false);
  const double tol = 1e-12 * std::max(1.0, a.cwiseAbs().maxCoeff()) * n;
  for (int outer = 0; outer < 3 * n + 10; ++outer) {
    VectorXd w = a.transpose() * (b - a * x);
    int best = -1;
    double wmax = tol;
    for (int j = 0; j < n; ++j) {
      if (!passive[j] && w(j) > wmax) {
        wmax = w(j);
        best = j;
      }
    }
    if (best < 0) break;
    passive[best] = true;
    for (int inner = 0; inner < 3 * n + 10; ++inner) {
      std::vector<int> p;
      for (int j = 0; j < n; ++j) {
        if (passive[j]) p.push_back(j);
      }
      MatrixXd ap(a.rows(), p.size());
      for (int k = 0; k < p.size(); ++k) ap.col(k) = a.col(p[k]);
      VectorXd z = ap.colPivHouseholderQr().solve(b);
      bool feasible = true;
      for (int k = 0; k < p.size(); ++k) feasible = feasible && z(k) > 0;
      if (feasible) {
        x.setZero();
        for (int k = 0; k < p.size(); ++k) x(p[k]) = z(k);
        break;
      }
      double alpha = 1.0;
      for (int k = 0; k < p.size(); ++k) {
        if (z(k) <= 0) {
          alpha = std::min(alpha, x(p[k]) / (x(p[k]) - z(k)));
        }
      }
      for (int k = 0; k < p.size(); ++k) {
        x(p[k]) += alpha * (z(k) - x(p[k]));
        if (x(p[k]) <= tol) {
          x(p[k]) = 0.0;
          passive[p[k]] = false;
        }
      }
    }
  }
  return x;
}

namespace {

// Column echelon form of v restricted to candidate rows [0, candidates).
// Returns the pivot rows; v becomes R with R(pivot_k, :) = e_k.
std::vector<int> ColumnEchelon(MatrixXd& v, int candidates, double pivot_tol) {
  const int r = v.cols();
  const double scale = std::max(v.cwiseAbs().maxCoeff(), 1e-300);
  std::vector<int> pivots;
  std::vector<bool> used(v.rows(), false);
  for (int k = 0; k < r; ++k) {
    int prow = -1, pcol = -1;
    double best = -1.0;
    for (int i = 0; i < candidates; ++i) {
      if (used[i]) continue;
      for (int c = k; c < r; ++c) {
        double a = std::abs(v(i, c));
        if (a > best) {
          best = a;
          prow = i;
          pcol = c;
        }
      }
    }
    if (prow < 0 || best < pivot_tol * scale) {
      std::ostringstream os;
      os << "pivot " << best << " below tolerance at step " << k;
      throw ExtractionError(ExtractionError::Kind::kDegenerateEchelon,
                            os.str());
    }
    v.col(k).swap(v.col(pcol));
    v.col(k) /= v(prow, k);
    for (int c = 0; c < r; ++c) {
      if (c != k) v.col(c) -= v(prow, c) * v.col(k);
    }
    used[prow] = true;
    pivots.push_back(prow);
  }
  return pivots;
}

std::vector<double> Dirichlet(int n, std::mt19937_64& rng) {
  std::gamma_distribution<double> gamma(1.0, 1.0);
  std::vector<double> w(n);
  double s = 0.0;
  for (double& x : w) s += (x = gamma(rng));
  for (double& x : w) x /= s;
  return w;
}

// Real spectrum with pairwise gaps above tol.
bool SimpleRealSpectrum(const MatrixXd& t, double tol) {
  const int n = t.rows();
  double scale = std::max(1.0, t.cwiseAbs().maxCoeff());
  for (int k = 0; k + 1 < n; ++k) {
    if (std::abs(t(k + 1, k)) > 1e-10 * scale) return false;
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (std::abs(t(i, i) - t(j, j)) < tol * scale) return false;
    }
  }
  return true;
}

}  // namespace

AtomicMeasure Extract(const MomentVector& y, int s,
                      const ExtractionOptions& options,
                      ExtractionTrace* trace) {
  const MomentSpace& space = y.space();
  const Reduction& red = space.reduction();
  if (s < 1 || s > y.order()) {
    throw ExtractionError(ExtractionError::Kind::kNotFlat,
                          "extraction order outside [1, d]");
  }
  MatrixXd m = y.Matrix(s);
  const int r = NumericalRank(m, options.rank_tol);
  const int r_low = NumericalRank(y.Matrix(s - 1), options.rank_tol);
  if (r != r_low || r == 0) {
    std::ostringstream os;
    os << "rank M_" << s << " = " << r << ", rank M_" << s - 1 << " = "
       << r_low;
    throw ExtractionError(ExtractionError::Kind::kNotFlat, os.str());
  }

  // M_s = V V^T from the r leading eigenpairs.
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(m);
  const int n = m.rows();
  MatrixXd v(n, r);
  for (int k = 0; k < r; ++k) {
    int col = n - 1 - k;
    v.col(k) = es.eigenvectors().col(col) *
               std::sqrt(std::max(es.eigenvalues()(col), 0.0));
  }
  MatrixXd factor = v;
  std::vector<int> basis =
      ColumnEchelon(v, space.CountUpTo(s - 1), options.pivot_tol);

  const int nr = red.num_reduced();
  std::vector<MatrixXd> mult(nr, MatrixXd(r, r));
  for (int eta = 0; eta < nr; ++eta) {
    for (int k = 0; k < r; ++k) {
      MultiIndex prod = red.Normal(space.monomials()[basis[k]] *
                                   MultiIndex::Var(eta));
      int row = space.IndexOf(prod);
      if (row < 0 || row >= n) {
        throw ExtractionError(ExtractionError::Kind::kDegenerateEchelon,
                              "shifted basis monomial outside M_s");
      }
      mult[eta].row(k) = v.row(row);
    }
  }

  std::mt19937_64 rng(options.seed);
  std::vector<double> lambda;
  MatrixXd q = MatrixXd::Identity(r, r);
  int resamples = 0;
  if (nr > 0) {
    for (;; ++resamples) {
      lambda = Dirichlet(nr, rng);
      MatrixXd comb = MatrixXd::Zero(r, r);
      for (int eta = 0; eta < nr; ++eta) comb += lambda[eta] * mult[eta];
      Eigen::RealSchur<MatrixXd> schur(comb);
      q = schur.matrixU();
      if (SimpleRealSpectrum(schur.matrixT(), options.gap_tol) ||
          resamples >= options.max_resamples) {
        break;
      }
    }
  }

  std::vector<std::vector<double>> reduced(r, std::vector<double>(nr));
  for (int k = 0; k < r; ++k) {
    for (int eta = 0; eta < nr; ++eta) {
      reduced[k][eta] = q.col(k).dot(mult[eta] * q.col(k));
    }
  }

  // Clamp to the strategy polytope, then check the set constraints.
  const SemiAlgebraicSet& set = red.set();
  const BlockStructure& st = *set.structure;
  AtomicMeasure out;
  out.rank = r;
  for (int k = 0; k < r; ++k) {
    std::vector<double> p = red.Lift(reduced[k]);
    for (const auto& b : st.blocks()) {
      double sum = 0.0;
      for (int a = 0; a < b.size; ++a) {
        double& x = p[b.offset + a];
        if (x < 0.0 && x >= -options.clamp_tol) x = 0.0;
        if (x > 1.0 && x <= 1.0 + options.clamp_tol) x = 1.0;
        sum += x;
      }
      if (sum > 0 && std::abs(sum - 1.0) <= options.clamp_tol) {
        for (int a = 0; a < b.size; ++a) p[b.offset + a] /= sum;
      }
    }
    double viol = set.MaxViolation(p);
    if (viol > options.clamp_tol) {
      std::ostringstream os;
      os << "atom " << k << " violates the set by " << viol;
      throw ExtractionError(ExtractionError::Kind::kAtomInfeasible, os.str());
    }
    out.atoms.push_back(std::move(p));
  }
  std::sort(out.atoms.begin(), out.atoms.end());

  // Weights from the moments of degree <= 2 (more if too few equations).
  int wdeg = std::min(2, 2 * y.order());
  if (space.CountUpTo(wdeg) < r) wdeg = 2 * y.order();
  const int rows = space.CountUpTo(wdeg);
  MatrixXd a(rows, r);
  VectorXd rhs(rows);
  for (int k = 0; k < r; ++k) {
    std::vector<double> pr = red.Project(out.atoms[k]);
    for (int i = 0; i < rows; ++i) a(i, k) = space.monomials()[i].Evaluate(pr);
  }
  for (int i = 0; i < rows; ++i) rhs(i) = y.values()[i];
  VectorXd ls = a.colPivHouseholderQr().solve(rhs);
  if (ls.minCoeff() < -1e-8) {
    std::ostringstream os;
    os << "negative weight " << ls.minCoeff();
    throw ExtractionError(ExtractionError::Kind::kAtomInfeasible, os.str());
  }
  VectorXd w = Nnls(a, rhs);
  double total = w.sum();
  if (total <= 0 || w.minCoeff() <= 1e-12) {
    throw ExtractionError(ExtractionError::Kind::kAtomInfeasible,
                          "an atom received zero weight");
  }
  for (int k = 0; k < r; ++k) out.weights.push_back(w(k) / total);

  if (trace) {
    trace->order = s;
    trace->rank = r;
    trace->factor = factor;
    trace->rewriting = v;
    trace->basis = basis;
    trace->multiplication = mult;
    trace->combination = lambda;
    trace->resamples = resamples;
  }
  return out;
}

AtomReport CertifyAtoms(const AtomicMeasure& m, const Polynomial& u,
                        double bound, const SemiAlgebraicSet& set,
                        std::optional<double> riesz_value, double tol) {
  AtomReport rep;
  for (int k = 0; k < m.atoms.size(); ++k) {
    double viol = set.MaxViolation(m.atoms[k]);
    double val = u.Evaluate(m.atoms[k]);
    rep.violations.push_back(viol);
    rep.values.push_back(val);
    rep.mixture_value += m.weights[k] * val;
    std::ostringstream os;
    if (viol > tol) {
      os << "atom " << k << " infeasible by " << viol;
      rep.messages.push_back(os.str());
      rep.ok = false;
    }
    if (std::abs(val - bound) > tol * std::max(1.0, std::abs(bound))) {
      std::ostringstream vs;
      vs << "atom " << k << " value " << val << " differs from bound "
         << bound;
      rep.messages.push_back(vs.str());
      rep.ok = false;
    }
  }
  if (riesz_value && std::abs(rep.mixture_value - *riesz_value) >
                         1e-6 * std::max(1.0, std::abs(*riesz_value))) {
    std::ostringstream os;
    os << "mixture value " << rep.mixture_value << " differs from L(u) = "
       << *riesz_value;
    rep.messages.push_back(os.str());
    rep.ok = false;
  }
  return rep;
}

}  // namespace irsos
