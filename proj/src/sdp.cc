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

#include "irsos/sdp.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace irsos {

using Eigen::MatrixXd;
using Eigen::VectorXd;

int SdpProblem::AddVariable() {
  coefficients.emplace_back();
  objective.push_back(0.0);
  return num_vars++;
}

int SdpProblem::AddBlock(int dim) {
  if (dim < 1) throw DimensionMismatchError("block dimension must be >= 1");
  block_dims.push_back(dim);
  return block_dims.size() - 1;
}

void SdpProblem::AddEntry(int var, int block, int row, int col, double value) {
  if (value == 0.0) return;
  if (row > col) std::swap(row, col);
  Entry e{block, row, col, value};
  if (var < 0) {
    constant.push_back(e);
  } else {
    if (var >= num_vars) throw DimensionMismatchError("unknown variable");
    coefficients[var].push_back(e);
  }
}

void SdpProblem::Check() const {
  if (coefficients.size() != num_vars || objective.size() != num_vars) {
    throw DimensionMismatchError("coefficient/objective size != num_vars");
  }
  auto check_entry = [this](const Entry& e) {
    if (e.block < 0 || e.block >= block_dims.size()) {
      throw DimensionMismatchError("entry references unknown block");
    }
    int n = block_dims[e.block];
    if (e.row < 0 || e.col < 0 || e.row >= n || e.col >= n) {
      throw DimensionMismatchError("entry outside its block");
    }
  };
  for (int d : block_dims) {
    if (d < 1) throw DimensionMismatchError("block dimension must be >= 1");
  }
  for (const Entry& e : constant) check_entry(e);
  for (const auto& col : coefficients) {
    for (const Entry& e : col) check_entry(e);
  }
  for (const Equality& eq : equalities) {
    for (const auto& [v, a] : eq.terms) {
      if (v < 0 || v >= num_vars) {
        throw DimensionMismatchError("equality references unknown variable");
      }
    }
  }
}

std::vector<MatrixXd> SdpProblem::BlockValues(const VectorXd& x) const {
  std::vector<MatrixXd> out;
  for (int d : block_dims) out.push_back(MatrixXd::Zero(d, d));
  auto add = [&out](const Entry& e, double s) {
    out[e.block](e.row, e.col) += s * e.value;
    if (e.row != e.col) out[e.block](e.col, e.row) += s * e.value;
  };
  for (const Entry& e : constant) add(e, 1.0);
  for (int i = 0; i < num_vars; ++i) {
    if (x[i] == 0.0) continue;
    for (const Entry& e : coefficients[i]) add(e, x[i]);
  }
  return out;
}

double SdpProblem::ObjectiveValue(const VectorXd& x) const {
  double v = objective_offset;
  for (int i = 0; i < num_vars; ++i) v += objective[i] * x[i];
  return v;
}

void SdpProblem::DumpText(std::ostream& os) const {
  os.precision(17);
  os << "# vars " << num_vars << " blocks";
  for (int d : block_dims) os << " " << d;
  os << " sense " << (sense == Sense::kMinimize ? "min" : "max") << "\n";
  for (int i = 0; i < num_vars; ++i) {
    if (objective[i] != 0.0) os << i << " -1 0 0 " << objective[i] << "\n";
  }
  for (const Entry& e : constant) {
    os << "-1 " << e.block << " " << e.row << " " << e.col << " " << e.value
       << "\n";
  }
  for (int i = 0; i < num_vars; ++i) {
    for (const Entry& e : coefficients[i]) {
      os << i << " " << e.block << " " << e.row << " " << e.col << " "
         << e.value << "\n";
    }
  }
  for (int j = 0; j < equalities.size(); ++j) {
    for (const auto& [v, a] : equalities[j].terms) {
      os << "eq " << j << " " << v << " " << a << "\n";
    }
    os << "eq " << j << " rhs " << equalities[j].rhs << "\n";
  }
}

std::string SdpStatusName(SdpStatus s) {
  switch (s) {
    case SdpStatus::kOptimal:
      return "Optimal";
    case SdpStatus::kInfeasible:
      return "Infeasible";
    case SdpStatus::kUnbounded:
      return "Unbounded";
    case SdpStatus::kSlowProgress:
      return "SlowProgress";
    case SdpStatus::kIterationLimit:
      return "IterationLimit";
  }
  return "Unknown";
}

namespace {

using Blocks = std::vector<MatrixXd>;

double Inner(const Blocks& a, const Blocks& b) {
  double s = 0;
  for (int k = 0; k < a.size(); ++k) s += a[k].cwiseProduct(b[k]).sum();
  return s;
}

double Norm(const Blocks& a) { return std::sqrt(Inner(a, a)); }

void Axpy(double alpha, const Blocks& x, Blocks& y) {
  for (int k = 0; k < y.size(); ++k) y[k] += alpha * x[k];
}

Blocks Scaled(const Blocks& a, double s) {
  Blocks r = a;
  for (MatrixXd& m : r) m *= s;
  return r;
}

void Symmetrize(Blocks& a) {
  for (MatrixXd& m : a) m = 0.5 * (m + m.transpose()).eval();
}

// Some factor L with L L^T = S; Cholesky when possible.
bool Factor(const MatrixXd& s, MatrixXd& l) {
  Eigen::LLT<MatrixXd> llt(s);
  if (llt.info() == Eigen::Success) {
    l = llt.matrixL();
    return true;
  }
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(s);
  if (es.info() != Eigen::Success || es.eigenvalues().maxCoeff() <= 0) {
    return false;
  }
  double floor = 1e-300;
  VectorXd d = es.eigenvalues().cwiseMax(floor).cwiseSqrt();
  l = es.eigenvectors() * d.asDiagonal();
  return true;
}

class Solver {
 public:
  Solver(const SdpProblem& p, const SdpOptions& o) : p_(p), opt_(o) {
    p_.Check();
    m_ = p.num_vars;
    nb_ = p.block_dims.size();
    neq_ = p.equalities.size();
    c_ = VectorXd::Zero(m_);
    double sign = p.sense == SdpProblem::Sense::kMaximize ? -1.0 : 1.0;
    for (int i = 0; i < m_; ++i) c_[i] = sign * p.objective[i];
    a_ = MatrixXd::Zero(neq_, m_);
    b_ = VectorXd::Zero(neq_);
    for (int j = 0; j < neq_; ++j) {
      for (const auto& [v, a] : p.equalities[j].terms) a_(j, v) += a;
      b_[j] = p.equalities[j].rhs;
    }
    h_ = p.BlockValues(VectorXd::Zero(m_));
    // Per-block entry lists grouped by variable.
    block_entries_.assign(nb_, {});
    block_vars_.assign(nb_, {});
    for (int i = 0; i < m_; ++i) {
      std::vector<bool> touched(nb_, false);
      for (const auto& e : p.coefficients[i]) {
        block_entries_[e.block].push_back({i, e.row, e.col, e.value});
        if (!touched[e.block]) {
          touched[e.block] = true;
          block_vars_[e.block].push_back(i);
        }
      }
    }
    for (int k = 0; k < nb_; ++k) {
      auto& list = block_entries_[k];
      std::stable_sort(list.begin(), list.end(),
                       [](const VarEntry& a, const VarEntry& b) {
                         return a.var < b.var;
                       });
      block_var_start_.push_back({});
      auto& start = block_var_start_.back();
      for (int t = 0; t < list.size(); ++t) {
        if (t == 0 || list[t].var != list[t - 1].var) start.push_back(t);
      }
      start.push_back(list.size());
    }
    cone_degree_ = 0;
    for (int d : p.block_dims) cone_degree_ += d;
  }

  SdpSolution Run();

 private:
  struct VarEntry {
    int var;
    int row;
    int col;
    double value;
  };

  // F x = sum_i x_i F_i.
  Blocks FApply(const VectorXd& x) const {
    Blocks out;
    for (int d : p_.block_dims) out.push_back(MatrixXd::Zero(d, d));
    for (int k = 0; k < nb_; ++k) {
      MatrixXd& m = out[k];
      for (const VarEntry& e : block_entries_[k]) {
        double v = x[e.var] * e.value;
        m(e.row, e.col) += v;
        if (e.row != e.col) m(e.col, e.row) += v;
      }
    }
    return out;
  }
  // (F^T Z)_i = <F_i, Z>.
  VectorXd FtApply(const Blocks& z) const {
    VectorXd out = VectorXd::Zero(m_);
    for (int k = 0; k < nb_; ++k) {
      const MatrixXd& m = z[k];
      for (const VarEntry& e : block_entries_[k]) {
        out[e.var] += e.value * (e.row == e.col ? m(e.row, e.row)
                                                : m(e.row, e.col) + m(e.col, e.row));
      }
    }
    return out;
  }
  Blocks WApplyInv(const Blocks& m) const {
    Blocks out(nb_);
    for (int k = 0; k < nb_; ++k) out[k] = winv_[k] * m[k] * winv_[k];
    return out;
  }
  Blocks WApply(const Blocks& m) const {
    Blocks out(nb_);
    for (int k = 0; k < nb_; ++k) {
      MatrixXd w = r_[k] * r_[k].transpose();
      out[k] = w * m[k] * w;
    }
    return out;
  }

  bool ComputeScaling();
  void AssembleSchur();
  bool FactorSchur();
  void SolveK(const VectorXd& rx, const VectorXd& ry, VectorXd& dx,
              VectorXd& dy) const;
  double MaxStep(const Blocks& ds, const Blocks& dz, double dtau,
                 double dkappa) const;

  const SdpProblem& p_;
  SdpOptions opt_;
  int m_ = 0, nb_ = 0, neq_ = 0, cone_degree_ = 0;
  VectorXd c_, b_;
  MatrixXd a_;
  Blocks h_;
  std::vector<std::vector<VarEntry>> block_entries_;
  std::vector<std::vector<int>> block_vars_;
  std::vector<std::vector<int>> block_var_start_;

  // Iterate.
  VectorXd x_, y_;
  Blocks s_, z_;
  double tau_ = 1, kappa_ = 1;

  // Scaling.
  Blocks r_, rinv_, winv_;
  std::vector<VectorXd> lambda_;

  // Linear algebra.
  MatrixXd hmat_;
  Eigen::LLT<MatrixXd> hfact_;
  Eigen::LLT<MatrixXd> sfact_;
};

bool Solver::ComputeScaling() {
  r_.resize(nb_);
  rinv_.resize(nb_);
  winv_.resize(nb_);
  lambda_.resize(nb_);
  for (int k = 0; k < nb_; ++k) {
    MatrixXd ls, lz;
    if (!Factor(s_[k], ls) || !Factor(z_[k], lz)) return false;
    Eigen::JacobiSVD<MatrixXd> svd(lz.transpose() * ls,
                                   Eigen::ComputeFullU | Eigen::ComputeFullV);
    VectorXd lam = svd.singularValues();
    if (lam.minCoeff() <= 0 || !lam.allFinite()) return false;
    VectorXd isq = lam.cwiseSqrt().cwiseInverse();
    r_[k] = ls * svd.matrixV() * isq.asDiagonal();
    rinv_[k] = isq.asDiagonal() * svd.matrixU().transpose() * lz.transpose();
    winv_[k] = rinv_[k].transpose() * rinv_[k];
    lambda_[k] = lam;
  }
  return true;
}

void Solver::AssembleSchur() {
  hmat_ = MatrixXd::Zero(m_, m_);
  for (int k = 0; k < nb_; ++k) {
    const int n = p_.block_dims[k];
    const MatrixXd& w = winv_[k];
    const auto& list = block_entries_[k];
    const auto& start = block_var_start_[k];
    const int groups = start.size() - 1;
    MatrixXd bmat(n, n);
    for (int g = 0; g < groups; ++g) {
      bmat.setZero();
      auto sv = bmat.selfadjointView<Eigen::Upper>();
      for (int t = start[g]; t < start[g + 1]; ++t) {
        const VarEntry& e = list[t];
        if (e.row == e.col) {
          sv.rankUpdate(w.col(e.row), e.value);
        } else {
          sv.rankUpdate(w.col(e.row), w.col(e.col), e.value);
        }
      }
      const int j = list[start[g]].var;
      for (int g2 = g; g2 < groups; ++g2) {
        double acc = 0;
        for (int t = start[g2]; t < start[g2 + 1]; ++t) {
          const VarEntry& e = list[t];
          acc += e.row == e.col ? e.value * bmat(e.row, e.row)
                                : 2.0 * e.value * bmat(e.row, e.col);
        }
        const int i = list[start[g2]].var;
        hmat_(i, j) += acc;
      }
    }
  }
  hmat_.triangularView<Eigen::StrictlyUpper>() =
      hmat_.triangularView<Eigen::StrictlyLower>().transpose();
}

bool Solver::FactorSchur() {
  MatrixXd m = hmat_;
  if (neq_ > 0) m += a_.transpose() * a_;
  double scale = std::max(1.0, m.diagonal().cwiseAbs().maxCoeff());
  double reg = 0;
  for (int attempt = 0; attempt < 6; ++attempt) {
    MatrixXd mr = m;
    if (reg > 0) mr.diagonal().array() += reg;
    hfact_.compute(mr);
    if (hfact_.info() == Eigen::Success) break;
    reg = reg == 0 ? 1e-14 * scale : reg * 100;
    if (attempt == 5) return false;
  }
  if (neq_ > 0) {
    MatrixXd t = hfact_.solve(a_.transpose());
    MatrixXd s = a_ * t;
    double sscale = std::max(1.0, s.diagonal().cwiseAbs().maxCoeff());
    double sreg = 0;
    for (int attempt = 0; attempt < 6; ++attempt) {
      MatrixXd sr = s;
      if (sreg > 0) sr.diagonal().array() += sreg;
      sfact_.compute(sr);
      if (sfact_.info() == Eigen::Success) break;
      sreg = sreg == 0 ? 1e-14 * sscale : sreg * 100;
      if (attempt == 5) return false;
    }
  }
  return true;
}

// [H A^T; A 0] [dx; dy] = [rx; ry] via (H + A^T A) and its Schur complement.
void Solver::SolveK(const VectorXd& rx, const VectorXd& ry, VectorXd& dx,
                    VectorXd& dy) const {
  if (neq_ == 0) {
    dx = hfact_.solve(rx);
    dy = VectorXd::Zero(0);
    return;
  }
  VectorXd r1 = rx + a_.transpose() * ry;
  VectorXd t = hfact_.solve(r1);
  dy = sfact_.solve(a_ * t - ry);
  dx = hfact_.solve(r1 - a_.transpose() * dy);
}

double Solver::MaxStep(const Blocks& ds, const Blocks& dz, double dtau,
                       double dkappa) const {
  double alpha = std::numeric_limits<double>::infinity();
  for (int k = 0; k < nb_; ++k) {
    VectorXd isq = lambda_[k].cwiseSqrt().cwiseInverse();
    for (int which = 0; which < 2; ++which) {
      MatrixXd scaled =
          which == 0 ? MatrixXd(rinv_[k] * ds[k] * rinv_[k].transpose())
                     : MatrixXd(r_[k].transpose() * dz[k] * r_[k]);
      MatrixXd t = isq.asDiagonal() * scaled * isq.asDiagonal();
      t = 0.5 * (t + t.transpose()).eval();
      double mn = t.rows() == 1
                      ? t(0, 0)
                      : Eigen::SelfAdjointEigenSolver<MatrixXd>(
                            t, Eigen::EigenvaluesOnly)
                            .eigenvalues()
                            .minCoeff();
      if (mn < 0) alpha = std::min(alpha, -1.0 / mn);
    }
  }
  if (dtau < 0) alpha = std::min(alpha, -tau_ / dtau);
  if (dkappa < 0) alpha = std::min(alpha, -kappa_ / dkappa);
  return alpha;
}

SdpSolution Solver::Run() {
  x_ = VectorXd::Zero(m_);
  y_ = VectorXd::Zero(neq_);
  s_.clear();
  z_.clear();
  for (int d : p_.block_dims) {
    s_.push_back(MatrixXd::Identity(d, d));
    z_.push_back(MatrixXd::Identity(d, d));
  }
  tau_ = kappa_ = 1.0;

  const double resx0 = std::max(1.0, c_.norm());
  const double resy0 = std::max(1.0, b_.norm());
  const double resz0 = std::max(1.0, Norm(h_));

  SdpSolution sol;
  sol.status = SdpStatus::kIterationLimit;
  int slow_count = 0;
  double prev_mu = std::numeric_limits<double>::infinity();
  // Best iterate by max(pres, dres, gap), returned when the method stalls.
  struct Snapshot {
    VectorXd x, y;
    Blocks s, z;
    double tau, kappa, pres, dres, gap;
  };
  std::optional<Snapshot> best;
  double best_merit = std::numeric_limits<double>::infinity();
  int since_best = 0;
  auto finish = [&](SdpStatus status) {
    if ((status == SdpStatus::kSlowProgress ||
         status == SdpStatus::kIterationLimit) &&
        best) {
      x_ = best->x;
      y_ = best->y;
      s_ = best->s;
      z_ = best->z;
      tau_ = best->tau;
      kappa_ = best->kappa;
      sol.primal_residual = best->pres;
      sol.dual_residual = best->dres;
      sol.gap = best->gap;
    }
    sol.status = status;
    double t = (status == SdpStatus::kInfeasible ||
                status == SdpStatus::kUnbounded)
                   ? 1.0
                   : tau_;
    sol.x = x_ / t;
    sol.y = y_ / t;
    sol.dual = Scaled(z_, 1.0 / t);
    Symmetrize(sol.dual);
    if (status == SdpStatus::kInfeasible) {
      double denom = -(Inner(h_, z_) + b_.dot(y_));
      sol.dual = Scaled(z_, 1.0 / denom);
      Symmetrize(sol.dual);
      sol.y = y_ / denom;
    }
    if (status == SdpStatus::kUnbounded) {
      sol.x = x_ / (-c_.dot(x_));
    }
    sol.primal = p_.BlockValues(sol.x);
    sol.objective = p_.ObjectiveValue(sol.x);
    double dcost = -Inner(h_, sol.dual) - b_.dot(sol.y);
    sol.dual_objective = p_.sense == SdpProblem::Sense::kMaximize
                             ? -dcost + p_.objective_offset
                             : dcost + p_.objective_offset;
    return sol;
  };

  for (int iter = 0; iter <= opt_.max_iter; ++iter) {
    sol.iterations = iter;
    // Residuals.
    Blocks fx = FApply(x_);
    VectorXd ftz = FtApply(z_);
    VectorXd e1 = -ftz + a_.transpose() * y_ + c_ * tau_;
    VectorXd e2 = -a_ * x_ + b_ * tau_;
    Blocks e3 = fx;
    Axpy(tau_, h_, e3);
    Axpy(-1.0, s_, e3);
    double hz = Inner(h_, z_);
    double cx = c_.dot(x_), by = b_.dot(y_);
    double e4 = -cx - by - hz - kappa_;

    double sz = Inner(s_, z_);
    double mu = (sz + tau_ * kappa_) / (cone_degree_ + 1);
    double pcost = cx / tau_, dcost = (-hz - by) / tau_;
    double pres = std::max(Norm(e3) / tau_ / resz0,
                           neq_ ? e2.norm() / tau_ / resy0 : 0.0);
    double dres = e1.norm() / tau_ / resx0;
    double gap = std::abs(pcost - dcost) /
                 (1.0 + std::abs(pcost) + std::abs(dcost));
    double compl_gap = sz / (tau_ * tau_) / (1.0 + std::abs(pcost));
    sol.primal_residual = pres;
    sol.dual_residual = dres;
    sol.gap = std::max(gap, compl_gap);
    if (opt_.verbose) {
      std::fprintf(stderr,
                   "%3d pcost %.9e dcost %.9e pres %.2e dres %.2e gap %.2e "
                   "tau %.2e kappa %.2e\n",
                   iter, pcost, dcost, pres, dres, sol.gap, tau_, kappa_);
    }
    if (pres <= opt_.tol && dres <= opt_.tol && sol.gap <= opt_.tol) {
      return finish(SdpStatus::kOptimal);
    }
    double merit = std::max({pres, dres, sol.gap});
    if (merit < best_merit) {
      best_merit = merit;
      best = Snapshot{x_, y_, s_, z_, tau_, kappa_, pres, dres, sol.gap};
      since_best = 0;
    } else if (++since_best >= 8 && best_merit <= 1e3 * opt_.tol) {
      return finish(SdpStatus::kSlowProgress);
    }
    // Infeasibility certificates.
    if (hz + by < 0) {
      VectorXd ray = -ftz + a_.transpose() * y_;
      double pinf = ray.norm() / resx0 / (-(hz + by));
      if (pinf <= opt_.tol) return finish(SdpStatus::kInfeasible);
    }
    if (cx < 0) {
      Blocks gx = fx;
      Axpy(-1.0, s_, gx);
      double dinf = std::max(Norm(gx) / resz0,
                             neq_ ? (a_ * x_).norm() / resy0 : 0.0) /
                    (-cx);
      if (dinf <= opt_.tol) return finish(SdpStatus::kUnbounded);
    }
    if (iter == opt_.max_iter) break;

    if (mu > 0 && prev_mu < std::numeric_limits<double>::infinity()) {
      if ((prev_mu - mu) / prev_mu < 1e-3) {
        if (++slow_count >= 10) return finish(SdpStatus::kSlowProgress);
      } else {
        slow_count = 0;
      }
    }
    prev_mu = mu;

    if (!ComputeScaling()) return finish(SdpStatus::kSlowProgress);
    AssembleSchur();
    if (!FactorSchur()) return finish(SdpStatus::kSlowProgress);

    // Direction independent of the right-hand side.
    VectorXd x2, y2;
    {
      Blocks wh = WApplyInv(h_);
      VectorXd rx = -FtApply(wh) - c_;
      SolveK(rx, b_, x2, y2);
    }
    Blocks z2 = FApply(x2);
    for (int k = 0; k < nb_; ++k) z2[k] += h_[k];
    z2 = WApplyInv(z2);
    for (MatrixXd& mm : z2) mm = -mm;
    const double denom_base =
        -c_.dot(x2) - b_.dot(y2) - Inner(h_, z2);

    struct Direction {
      VectorXd dx, dy;
      Blocks ds, dz;
      double dtau, dkappa;
    };
    auto direction = [&](double sigma, const Blocks& dsv, double dkap) {
      // dsv is the complementarity right-hand side in the scaled space.
      const double f = 1.0 - sigma;
      VectorXd dxr = -f * e1;
      VectorXd dyr = -f * e2;
      Blocks dzr = Scaled(e3, -f);
      double dtaur = -f * e4;
      Blocks rc(nb_);
      for (int k = 0; k < nb_; ++k) {
        const VectorXd& lam = lambda_[k];
        MatrixXd xs = dsv[k];
        for (int a = 0; a < lam.size(); ++a) {
          for (int b = 0; b < lam.size(); ++b) {
            xs(a, b) = 2.0 * xs(a, b) / (lam[a] + lam[b]);
          }
        }
        rc[k] = r_[k] * xs * r_[k].transpose();
      }
      Blocks t = dzr;
      Axpy(1.0, rc, t);
      Blocks wt = WApplyInv(t);
      VectorXd rx = dxr + FtApply(wt);
      VectorXd x1, y1;
      SolveK(rx, -dyr, x1, y1);
      Blocks fx1 = FApply(x1);
      Blocks z1 = t;
      Axpy(-1.0, fx1, z1);
      z1 = WApplyInv(z1);
      double num = dtaur + dkap / tau_ + c_.dot(x1) + b_.dot(y1) +
                   Inner(h_, z1);
      double den = denom_base + kappa_ / tau_;
      Direction d;
      d.dtau = num / den;
      d.dx = x1 + d.dtau * x2;
      d.dy = neq_ ? VectorXd(y1 + d.dtau * y2) : VectorXd::Zero(0);
      d.dz = z1;
      Axpy(d.dtau, z2, d.dz);
      d.ds = FApply(d.dx);
      Axpy(d.dtau, h_, d.ds);
      Axpy(-1.0, dzr, d.ds);
      Symmetrize(d.ds);
      Symmetrize(d.dz);
      d.dkappa = (dkap - kappa_ * d.dtau) / tau_;
      return d;
    };

    // Predictor.
    Blocks ds_aff(nb_);
    for (int k = 0; k < nb_; ++k) {
      ds_aff[k] = -MatrixXd(lambda_[k].cwiseAbs2().asDiagonal());
    }
    Direction aff = direction(0.0, ds_aff, -tau_ * kappa_);
    double alpha_aff = std::min(1.0, MaxStep(aff.ds, aff.dz, aff.dtau,
                                             aff.dkappa));
    double sigma = std::pow(1.0 - alpha_aff, 3);
    sigma = std::clamp(sigma, 0.0, 1.0);

    // Corrector.
    Blocks ds_cor(nb_);
    for (int k = 0; k < nb_; ++k) {
      MatrixXd dst = rinv_[k] * aff.ds[k] * rinv_[k].transpose();
      MatrixXd dzt = r_[k].transpose() * aff.dz[k] * r_[k];
      MatrixXd prod = 0.5 * (dst * dzt + dzt * dst);
      ds_cor[k] = -MatrixXd(lambda_[k].cwiseAbs2().asDiagonal()) - prod;
      ds_cor[k].diagonal().array() += sigma * mu;
    }
    double dk = -tau_ * kappa_ + sigma * mu - aff.dtau * aff.dkappa;
    Direction dir = direction(sigma, ds_cor, dk);
    double alpha = std::min(1.0, opt_.step_fraction *
                                     MaxStep(dir.ds, dir.dz, dir.dtau,
                                             dir.dkappa));
    if (!(alpha > 0) || !std::isfinite(alpha)) {
      return finish(SdpStatus::kSlowProgress);
    }

    x_ += alpha * dir.dx;
    if (neq_) y_ += alpha * dir.dy;
    Axpy(alpha, dir.ds, s_);
    Axpy(alpha, dir.dz, z_);
    Symmetrize(s_);
    Symmetrize(z_);
    tau_ += alpha * dir.dtau;
    kappa_ += alpha * dir.dkappa;
  }
  return finish(SdpStatus::kIterationLimit);
}

double MinEigenvalue(const MatrixXd& m) {
  if (m.size() == 0) return 0.0;
  MatrixXd s = 0.5 * (m + m.transpose());
  return Eigen::SelfAdjointEigenSolver<MatrixXd>(s, Eigen::EigenvaluesOnly)
      .eigenvalues()
      .minCoeff();
}

}  // namespace

SdpSolution SolveSdp(const SdpProblem& problem, const SdpOptions& options) {
  if (!(options.tol > 0) || options.max_iter < 1) {
    throw std::invalid_argument("need tol > 0 and max_iter >= 1");
  }
  Solver solver(problem, options);
  return solver.Run();
}

CertificateReport CheckCertificate(const SdpProblem& p, const SdpSolution& s,
                                   double tol) {
  p.Check();
  CertificateReport rep;
  const double limit = 10 * tol;
  auto flag = [&rep](const std::string& what) {
    rep.ok = false;
    rep.violations.push_back(what);
  };
  const int nb = p.block_dims.size();
  if (s.x.size() != p.num_vars || s.dual.size() != nb ||
      s.primal.size() != nb) {
    flag("solution dimensions do not match the problem");
    return rep;
  }
  // Gradient of the user objective in minimization form.
  const double sign = p.sense == SdpProblem::Sense::kMaximize ? -1.0 : 1.0;
  VectorXd c(p.num_vars);
  for (int i = 0; i < p.num_vars; ++i) c[i] = sign * p.objective[i];
  VectorXd ftz = VectorXd::Zero(p.num_vars);
  for (int i = 0; i < p.num_vars; ++i) {
    for (const auto& e : p.coefficients[i]) {
      const MatrixXd& z = s.dual[e.block];
      ftz[i] += e.value * (e.row == e.col ? z(e.row, e.row)
                                          : z(e.row, e.col) + z(e.col, e.row));
    }
  }
  VectorXd aty = VectorXd::Zero(p.num_vars);
  double by = 0;
  if (s.y.size() == p.equalities.size()) {
    for (int j = 0; j < p.equalities.size(); ++j) {
      for (const auto& [v, a] : p.equalities[j].terms) aty[v] += a * s.y[j];
      by += p.equalities[j].rhs * s.y[j];
    }
  }
  double hz = 0;
  for (const auto& e : p.constant) {
    const MatrixXd& z = s.dual[e.block];
    hz += e.value * (e.row == e.col ? z(e.row, e.row)
                                    : z(e.row, e.col) + z(e.col, e.row));
  }
  rep.min_dual_eigenvalue = std::numeric_limits<double>::infinity();
  for (const MatrixXd& z : s.dual) {
    rep.min_dual_eigenvalue = std::min(rep.min_dual_eigenvalue, MinEigenvalue(z));
  }

  if (s.status == SdpStatus::kInfeasible) {
    // F^T Z = A^T y with <F_0, Z> + b^T y = -1.
    rep.dual_residual = (ftz - aty).norm() / std::max(1.0, c.norm());
    double value = hz + by;
    rep.gap = std::abs(value + 1.0);
    if (rep.dual_residual > limit) flag("infeasibility ray residual too large");
    if (rep.gap > limit) flag("infeasibility certificate not normalized");
    if (rep.min_dual_eigenvalue < -limit) flag("certificate Z not PSD");
    return rep;
  }

  std::vector<MatrixXd> values = p.BlockValues(s.x);
  double hnorm = 0;
  for (const auto& e : p.constant) hnorm += e.value * e.value;
  hnorm = std::max(1.0, std::sqrt(hnorm));
  double diff = 0;
  rep.min_primal_eigenvalue = std::numeric_limits<double>::infinity();
  for (int k = 0; k < nb; ++k) {
    diff += (values[k] - s.primal[k]).squaredNorm();
    rep.min_primal_eigenvalue =
        std::min(rep.min_primal_eigenvalue, MinEigenvalue(s.primal[k]));
  }
  double eq_res = 0;
  for (int j = 0; j < p.equalities.size(); ++j) {
    double r = -p.equalities[j].rhs;
    for (const auto& [v, a] : p.equalities[j].terms) r += a * s.x[v];
    eq_res += r * r;
  }
  rep.primal_residual = std::max(std::sqrt(diff) / hnorm, std::sqrt(eq_res));
  if (s.status == SdpStatus::kUnbounded) {
    if (rep.min_primal_eigenvalue < -limit) flag("primal block not PSD");
    return rep;
  }
  // Dual feasibility: c = F^T Z - A^T y in minimization form.
  rep.dual_residual = (c - ftz + aty).norm() / std::max(1.0, c.norm());
  double pcost = c.dot(s.x);
  double dcost = -hz - by;
  rep.gap = std::abs(pcost - dcost) / (1 + std::abs(pcost) + std::abs(dcost));
  double scale = 1.0;
  for (const MatrixXd& m : s.primal) scale = std::max(scale, m.cwiseAbs().maxCoeff());
  if (rep.primal_residual > limit) flag("primal residual too large");
  if (rep.min_primal_eigenvalue < -limit * scale) flag("primal block not PSD");
  if (s.status == SdpStatus::kOptimal) {
    if (rep.dual_residual > limit) flag("dual residual too large");
    if (rep.gap > limit) flag("duality gap too large");
    if (rep.min_dual_eigenvalue < -limit * scale) flag("dual block not PSD");
  }
  return rep;
}

}  // namespace irsos
