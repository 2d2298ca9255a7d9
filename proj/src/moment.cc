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

#include "irsos/moment.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "irsos/extraction.h"

namespace irsos {

using Eigen::MatrixXd;
using Eigen::VectorXd;

std::string FormulationName(Formulation f) {
  switch (f) {
    case Formulation::kVanilla:
      return "vanilla";
    case Formulation::kVertexRestricted:
      return "vertex_restricted";
    case Formulation::kKktAugmented:
      return "kkt_augmented";
  }
  return "?";
}

Formulation ParseFormulation(const std::string& name) {
  if (name == "vanilla") return Formulation::kVanilla;
  if (name == "vertex_restricted" || name == "vr") {
    return Formulation::kVertexRestricted;
  }
  if (name == "kkt_augmented" || name == "kkt") {
    return Formulation::kKktAugmented;
  }
  throw std::invalid_argument("unknown formulation: " + name);
}

// ---------------------------------------------------------------------------
// Semi-algebraic sets.

Polynomial SemiAlgebraicSet::BallPolynomial() const {
  Polynomial p = Polynomial::Constant(structure, archimedean_bound);
  for (int v = 0; v < structure->num_variables(); ++v) {
    p.AddTerm(MultiIndex::Var(v, 2), -1.0);
  }
  return p;
}

std::vector<Polynomial> SemiAlgebraicSet::AllInequalities() const {
  std::vector<Polynomial> all = inequalities;
  all.push_back(BallPolynomial());
  return all;
}

namespace {

int HalfDegree(const Polynomial& p) { return (p.degree() + 1) / 2; }

}  // namespace

int SemiAlgebraicSet::MinimalOrder(const Polynomial& objective) const {
  int d = std::max(1, HalfDegree(objective));
  for (const Polynomial& g : inequalities) d = std::max(d, HalfDegree(g));
  for (const Polynomial& h : equalities) d = std::max(d, HalfDegree(h));
  return d;
}

double SemiAlgebraicSet::MaxViolation(std::span<const double> point) const {
  double worst = 0.0;
  for (const Polynomial& g : AllInequalities()) {
    worst = std::max(worst, -g.Evaluate(point));
  }
  for (const Polynomial& h : equalities) {
    worst = std::max(worst, std::abs(h.Evaluate(point)));
  }
  return worst;
}

SemiAlgebraicSet SimplexSet(StructurePtr structure) {
  SemiAlgebraicSet set;
  set.structure = structure;
  for (int v = 0; v < structure->num_variables(); ++v) {
    set.inequalities.push_back(Polynomial::Variable(structure, v));
  }
  for (const auto& b : structure->blocks()) {
    Polynomial h = Polynomial::Constant(structure, -1.0);
    for (int a = 0; a < b.size; ++a) h.AddTerm(MultiIndex::Var(b.offset + a), 1);
    set.equalities.push_back(h);
  }
  set.archimedean_bound = std::max(1, structure->num_blocks());
  return set;
}

SemiAlgebraicSet VertexRestrictedSet(StructurePtr structure) {
  SemiAlgebraicSet set = SimplexSet(structure);
  set.inequalities.clear();
  for (int v = 0; v < structure->num_variables(); ++v) {
    Polynomial b(structure);
    b.AddTerm(MultiIndex::Var(v, 2), 1.0);
    b.AddTerm(MultiIndex::Var(v), -1.0);
    set.equalities.push_back(b);
  }
  return set;
}

SemiAlgebraicSet KktAugmentedSet(const std::vector<Polynomial>& utilities,
                                 StructurePtr structure) {
  if (utilities.size() != structure->num_players()) {
    throw StructureMismatchError("need one utility per player");
  }
  for (const Polynomial& u : utilities) {
    if (!u.structure() || !(*u.structure() == *structure)) {
      throw StructureMismatchError("utility structure differs from the set");
    }
  }
  SemiAlgebraicSet set = SimplexSet(structure);
  for (int i = 0; i < structure->num_players(); ++i) {
    for (int j = 0; j < structure->num_infosets(i); ++j) {
      const auto& block = structure->block(structure->BlockIndex(i, j));
      std::vector<Polynomial> w = GradientBlock(utilities[i], i, j);
      Polynomial nu(structure);
      for (int a = 0; a < block.size; ++a) {
        nu += Polynomial::Variable(structure, block.offset + a) * w[a];
      }
      for (int a = 0; a < block.size; ++a) {
        Polynomial lambda = (nu - w[a]).Cleaned(0.0);
        if (lambda.IsZero()) continue;
        set.inequalities.push_back(lambda);
        set.equalities.push_back(
            Polynomial::Variable(structure, block.offset + a) * lambda);
      }
    }
  }
  return set;
}

SemiAlgebraicSet FormulationSet(Formulation f,
                                const std::vector<Polynomial>& utilities) {
  if (utilities.empty() || !utilities[0].structure()) {
    throw StructureMismatchError("utilities need a block structure");
  }
  StructurePtr s = utilities[0].structure();
  switch (f) {
    case Formulation::kVanilla:
      return SimplexSet(s);
    case Formulation::kVertexRestricted:
      return VertexRestrictedSet(s);
    case Formulation::kKktAugmented:
      return KktAugmentedSet(utilities, s);
  }
  return SimplexSet(s);
}

// ---------------------------------------------------------------------------
// Reduction.

namespace {

// Is p = c * (x_v^2 - x_v) for some v? Returns v or -1.
int BinaryVariable(const Polynomial& p) {
  if (p.num_terms() != 2) return -1;
  auto it = p.terms().begin();
  const auto& [m1, c1] = *it++;
  const auto& [m2, c2] = *it;
  if (m1.terms().size() != 1 || m2.terms().size() != 1) return -1;
  int v = m1.terms()[0].first;
  if (m2.terms()[0].first != v) return -1;
  if (m1.degree() != 1 || m2.degree() != 2) return -1;
  if (std::abs(c1 + c2) > 1e-12 * std::max(std::abs(c1), std::abs(c2))) {
    return -1;
  }
  return v;
}

// Reduced row echelon form in place; columns are processed left to right.
// Columns whose remaining entries fall below `tol` are zeroed below the
// current rank. Returns the pivot columns (pivot row k is row k).
std::vector<int> Rref(MatrixXd& e, double tol) {
  const int rows = e.rows(), cols = e.cols();
  std::vector<int> pivots;
  int rank = 0;
  for (int c = 0; c < cols && rank < rows; ++c) {
    Eigen::Index r = 0;
    double mx = e.col(c).tail(rows - rank).cwiseAbs().maxCoeff(&r);
    r += rank;
    if (mx <= tol) {
      e.col(c).tail(rows - rank).setZero();
      continue;
    }
    if (r != rank) e.row(r).swap(e.row(rank));
    e.row(rank) /= e(rank, c);
    VectorXd f = e.col(c);
    f(rank) = 0.0;
    const int w = cols - c;
    e.rightCols(w).noalias() -= f * e.row(rank).rightCols(w);
    e.col(c).setZero();
    e(rank, c) = 1.0;
    pivots.push_back(c);
    ++rank;
  }
  if (rank < rows) e.bottomRows(rows - rank).setZero();
  return pivots;
}

// Full RREF with complete pivoting over every column but the last one, which
// holds the constant term. Returns the pivot column of each nonzero row.
std::vector<int> RrefCompletePivot(MatrixXd& e, double tol) {
  const int rows = e.rows(), cols = e.cols() - 1;
  std::vector<int> pivots;
  for (int rank = 0; rank < rows; ++rank) {
    Eigen::Index r = 0, c = 0;
    double mx = e.block(rank, 0, rows - rank, cols).cwiseAbs().maxCoeff(&r, &c);
    if (mx <= tol) {
      e.block(rank, 0, rows - rank, cols).setZero();
      break;
    }
    r += rank;
    if (r != rank) e.row(r).swap(e.row(rank));
    e.row(rank) /= e(rank, c);
    VectorXd f = e.col(c);
    f(rank) = 0.0;
    e.noalias() -= f * e.row(rank);
    e.col(c).setZero();
    e(rank, c) = 1.0;
    pivots.push_back(c);
  }
  return pivots;
}

}  // namespace

Reduction::Reduction(const SemiAlgebraicSet& set, bool eliminate)
    : set_(set), num_full_(set.structure->num_variables()) {
  const int n = num_full_;
  std::vector<bool> eliminated(n, false);
  // Linear equalities: row k solves for pivot variable pivot_var[k].
  std::vector<VectorXd> rows;
  std::vector<int> pivot_var;
  std::vector<bool> is_linear(set.equalities.size(), false);
  if (eliminate) {
    for (int k = 0; k < set.equalities.size(); ++k) {
      const Polynomial& h = set.equalities[k];
      if (h.degree() != 1) continue;
      is_linear[k] = true;
      VectorXd row = VectorXd::Zero(n + 1);
      for (const auto& [m, c] : h.terms()) {
        if (m.is_constant()) {
          row(n) += c;
        } else {
          row(m.terms()[0].first) += c;
        }
      }
      for (int r = 0; r < rows.size(); ++r) {
        double f = row(pivot_var[r]);
        if (f != 0.0) row -= f * rows[r];
      }
      double scale = row.head(n).cwiseAbs().maxCoeff();
      int p = -1;
      for (int v = n - 1; v >= 0; --v) {
        if (std::abs(row(v)) > 1e-12 * std::max(scale, 1.0)) {
          p = v;
          break;
        }
      }
      if (p < 0) {
        if (std::abs(row(n)) > 1e-9) infeasible_ = true;
        continue;
      }
      row /= row(p);
      for (int r = 0; r < rows.size(); ++r) {
        double f = rows[r](p);
        if (f != 0.0) rows[r] -= f * row;
      }
      rows.push_back(row);
      pivot_var.push_back(p);
      eliminated[p] = true;
    }
  }
  reduced_of_.assign(n, -1);
  for (int v = 0; v < n; ++v) {
    if (!eliminated[v]) {
      reduced_of_[v] = kept_.size();
      kept_.push_back(v);
    }
  }
  const int nr = kept_.size();
  binary_.assign(nr, false);
  substitution_.assign(n, Polynomial(nr));
  for (int v = 0; v < n; ++v) {
    if (reduced_of_[v] >= 0) {
      substitution_[v].AddTerm(MultiIndex::Var(reduced_of_[v]), 1.0);
    }
  }
  for (int r = 0; r < rows.size(); ++r) {
    Polynomial s(nr);
    s.AddTerm(MultiIndex(), -rows[r](n));
    for (int v = 0; v < n; ++v) {
      if (v == pivot_var[r] || rows[r](v) == 0.0) continue;
      s.AddTerm(MultiIndex::Var(reduced_of_[v]), -rows[r](v));
    }
    substitution_[pivot_var[r]] = s;
  }

  if (eliminate) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (int k = 0; k < set.equalities.size(); ++k) {
        if (is_linear[k]) continue;
        int v = BinaryVariable(Reduce(set.equalities[k]).Cleaned(1e-14));
        if (v >= 0 && !binary_[v]) {
          binary_[v] = true;
          changed = true;
        }
      }
    }
  }

  auto scale_of = [](const Polynomial& p) {
    return std::max(1.0, p.MaxAbsCoefficient());
  };
  for (int k = 0; k < set.equalities.size(); ++k) {
    const Polynomial& h = set.equalities[k];
    Polynomial r = Reduce(h).Cleaned(1e-13 * scale_of(h));
    if (r.IsZero()) continue;
    if (r.degree() == 0) {
      if (std::abs(r.constant_term()) > 1e-9) infeasible_ = true;
      continue;
    }
    equalities_.push_back({r, h.degree(), k});
  }
  std::vector<Polynomial> ineq = set.AllInequalities();
  for (int k = 0; k < ineq.size(); ++k) {
    const Polynomial& g = ineq[k];
    Polynomial r = Reduce(g).Cleaned(1e-13 * scale_of(g));
    if (r.degree() == 0) {
      if (r.constant_term() < -1e-9) infeasible_ = true;
      continue;
    }
    inequalities_.push_back({r, g.degree(), k});
  }
}

Polynomial Reduction::Multiply(const Polynomial& a, const Polynomial& b) const {
  Polynomial out(num_reduced());
  for (const auto& [ma, ca] : a.terms()) {
    for (const auto& [mb, cb] : b.terms()) {
      out.AddTerm(Normal(ma * mb), ca * cb);
    }
  }
  return out;
}

Polynomial Reduction::Reduce(const Polynomial& full) const {
  if (full.num_variables() != num_full_) {
    throw StructureMismatchError("polynomial has the wrong number of variables");
  }
  Polynomial out(num_reduced());
  for (const auto& [m, c] : full.terms()) {
    Polynomial prod(num_reduced());
    prod.AddTerm(MultiIndex(), c);
    for (const auto& [v, e] : m.terms()) {
      for (int k = 0; k < e; ++k) prod = Multiply(prod, substitution_[v]);
    }
    out += prod;
  }
  return out;
}

std::vector<double> Reduction::Project(std::span<const double> full) const {
  if (full.size() != num_full_) {
    throw StructureMismatchError("point has the wrong dimension");
  }
  std::vector<double> r(kept_.size());
  for (int i = 0; i < kept_.size(); ++i) r[i] = full[kept_[i]];
  return r;
}

std::vector<double> Reduction::Lift(std::span<const double> reduced) const {
  if (reduced.size() != kept_.size()) {
    throw StructureMismatchError("point has the wrong dimension");
  }
  std::vector<double> full(num_full_);
  for (int v = 0; v < num_full_; ++v) {
    full[v] = substitution_[v].Evaluate(reduced);
  }
  return full;
}

// ---------------------------------------------------------------------------
// Moment space.

double LinearForm::Evaluate(const VectorXd& x) const {
  double s = constant;
  for (const auto& [v, c] : terms) s += c * x(v);
  return s;
}

namespace {

// Dense accumulator for sparse linear forms.
class FormBuilder {
 public:
  explicit FormBuilder(int n) : dense_(n, 0.0), mark_(n, false) {}
  void Add(const LinearForm& f, double s) {
    constant_ += s * f.constant;
    for (const auto& [v, c] : f.terms) {
      if (!mark_[v]) {
        mark_[v] = true;
        touched_.push_back(v);
      }
      dense_[v] += s * c;
    }
  }
  LinearForm Take(double drop = 1e-13) {
    LinearForm f;
    f.constant = constant_;
    std::sort(touched_.begin(), touched_.end());
    double scale = 0.0;
    for (int v : touched_) scale = std::max(scale, std::abs(dense_[v]));
    for (int v : touched_) {
      if (std::abs(dense_[v]) > drop * std::max(scale, 1.0)) {
        f.terms.emplace_back(v, dense_[v]);
      }
      dense_[v] = 0.0;
      mark_[v] = false;
    }
    if (std::abs(f.constant) < 1e-14) f.constant = 0.0;
    touched_.clear();
    constant_ = 0.0;
    return f;
  }

 private:
  std::vector<double> dense_;
  std::vector<bool> mark_;
  std::vector<int> touched_;
  double constant_ = 0.0;
};

}  // namespace

MomentSpace::MomentSpace(
    std::shared_ptr<const Reduction> reduction, int order,
    const std::vector<std::vector<std::pair<MultiIndex, double>>>& extra_rows)
    : reduction_(std::move(reduction)), order_(order) {
  const Reduction& red = *reduction_;
  monomials_ = MonomialsUpToDegree(red.num_reduced(), 2 * order,
                                   &red.binary());
  for (int i = 0; i < monomials_.size(); ++i) index_[monomials_[i]] = i;
  const int n = monomials_.size();

  // Equality rows over columns in descending monomial order.
  std::vector<std::vector<std::pair<int, double>>> rows;
  for (const auto& eq : red.equalities()) {
    const int qmax = 2 * order - eq.degree;
    for (int q = 0; q < n && monomials_[q].degree() <= qmax; ++q) {
      std::map<int, double> row;
      for (const auto& [t, c] : eq.poly.terms()) {
        row[index_.at(red.Normal(t * monomials_[q]))] += c;
      }
      std::vector<std::pair<int, double>> r;
      for (const auto& [i, c] : row) {
        if (c != 0.0) r.emplace_back(i, c);
      }
      if (!r.empty()) rows.push_back(std::move(r));
    }
  }
  for (const auto& extra : extra_rows) {
    std::map<int, double> row;
    for (const auto& [m, c] : extra) row[index_.at(red.Normal(m))] += c;
    std::vector<std::pair<int, double>> r;
    for (const auto& [i, c] : row) {
      if (c != 0.0) r.emplace_back(i, c);
    }
    if (!r.empty()) rows.push_back(std::move(r));
  }

  forms_.assign(n, LinearForm());
  std::vector<int> pivot_row(n, -1);
  MatrixXd e;
  // Column n - 1 - i holds monomial i, so the constant sits last.
  if (!rows.empty()) {
    e = MatrixXd::Zero(rows.size(), n);
    for (int r = 0; r < rows.size(); ++r) {
      double scale = 0.0;
      for (const auto& [i, c] : rows[r]) scale = std::max(scale, std::abs(c));
      for (const auto& [i, c] : rows[r]) e(r, n - 1 - i) = c / scale;
    }
    std::vector<int> pivots = RrefCompletePivot(e, 1e-9);
    for (int k = 0; k < pivots.size(); ++k) pivot_row[n - 1 - pivots[k]] = k;
    // A remaining row with only a constant: 0 = c.
    for (int r = pivots.size(); r < e.rows(); ++r) {
      if (std::abs(e(r, n - 1)) > 1e-9) {
        infeasible_ = true;
        return;
      }
    }
  }
  std::vector<int> var_of(n, -1);
  for (int i = 1; i < n; ++i) {
    if (pivot_row[i] < 0) {
      var_of[i] = free_.size();
      free_.push_back(i);
    }
  }
  forms_[0].constant = 1.0;
  for (int i = 1; i < n; ++i) {
    if (var_of[i] >= 0) {
      forms_[i].terms.emplace_back(var_of[i], 1.0);
      continue;
    }
    const int r = pivot_row[i];
    LinearForm& f = forms_[i];
    f.constant = -e(r, n - 1);
    if (std::abs(f.constant) < 1e-13) f.constant = 0.0;
    for (int k = 0; k < free_.size(); ++k) {
      double c = e(r, n - 1 - free_[k]);
      if (std::abs(c) > 1e-13) f.terms.emplace_back(k, -c);
    }
  }
}

int MomentSpace::IndexOf(const MultiIndex& m) const {
  auto it = index_.find(m);
  return it == index_.end() ? -1 : it->second;
}

int MomentSpace::CountUpTo(int s) const {
  int k = 0;
  while (k < monomials_.size() && monomials_[k].degree() <= s) ++k;
  return k;
}

LinearForm MomentSpace::FormOf(const Polynomial& reduced) const {
  FormBuilder b(num_free());
  for (const auto& [m, c] : reduced.terms()) {
    int i = IndexOf(reduction_->Normal(m));
    if (i < 0) throw DegreeTooLowError("polynomial degree exceeds 2d");
    b.Add(forms_[i], c);
  }
  return b.Take(0.0);
}

// ---------------------------------------------------------------------------
// Moment vectors.

MomentVector::MomentVector(std::shared_ptr<const MomentSpace> space,
                           std::vector<double> values)
    : space_(std::move(space)), values_(std::move(values)) {
  if (values_.size() != space_->monomials().size()) {
    throw DimensionMismatchError("moment vector has the wrong length");
  }
}

MomentVector MomentVector::FromFree(std::shared_ptr<const MomentSpace> space,
                                    const VectorXd& x) {
  if (x.size() != space->num_free()) {
    throw DimensionMismatchError("free moment vector has the wrong length");
  }
  std::vector<double> v(space->monomials().size());
  for (int i = 0; i < v.size(); ++i) v[i] = space->form(i).Evaluate(x);
  return MomentVector(std::move(space), std::move(v));
}

MomentVector MomentVector::FromMeasure(
    std::shared_ptr<const MomentSpace> space,
    const std::vector<std::vector<double>>& points,
    const std::vector<double>& weights) {
  if (points.size() != weights.size()) {
    throw DimensionMismatchError("one weight per point");
  }
  std::vector<double> v(space->monomials().size(), 0.0);
  for (int k = 0; k < points.size(); ++k) {
    std::vector<double> r = space->reduction().Project(points[k]);
    for (int i = 0; i < v.size(); ++i) {
      v[i] += weights[k] * space->monomials()[i].Evaluate(r);
    }
  }
  return MomentVector(std::move(space), std::move(v));
}

double MomentVector::operator[](const MultiIndex& reduced) const {
  int i = space_->IndexOf(space_->reduction().Normal(reduced));
  if (i < 0) throw std::out_of_range("moment of degree above 2d");
  return values_[i];
}

double MomentVector::RieszReduced(const Polynomial& reduced) const {
  double s = 0.0;
  for (const auto& [m, c] : reduced.terms()) s += c * (*this)[m];
  return s;
}

double MomentVector::Riesz(const Polynomial& full) const {
  return RieszReduced(space_->reduction().Reduce(full));
}

MatrixXd MomentVector::Matrix(int s) const {
  const int n = space_->CountUpTo(s);
  const auto& mons = space_->monomials();
  MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      m(i, j) = m(j, i) = (*this)[mons[i] * mons[j]];
    }
  }
  return m;
}

MatrixXd MomentVector::LocalizingMatrix(const Polynomial& full_g, int s) const {
  Polynomial g = space_->reduction().Reduce(full_g);
  const int n = space_->CountUpTo(s);
  const auto& mons = space_->monomials();
  MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double v = 0.0;
      for (const auto& [t, c] : g.terms()) {
        v += c * (*this)[t * mons[i] * mons[j]];
      }
      m(i, j) = m(j, i) = v;
    }
  }
  return m;
}

VectorXd MomentVector::Free() const {
  VectorXd x(space_->num_free());
  for (int v = 0; v < x.size(); ++v) {
    x(v) = values_[space_->free_monomials()[v]];
  }
  return x;
}

int NumericalRank(const MatrixXd& m, double tau) {
  if (m.size() == 0) return 0;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(m, Eigen::EigenvaluesOnly);
  VectorXd s = es.eigenvalues().cwiseAbs();
  double smax = s.maxCoeff();
  if (smax < 1e-12) return 0;
  int r = 0;
  for (int i = 0; i < s.size(); ++i) r += s(i) > tau * smax;
  return r;
}

std::optional<int> Flatness(const MomentVector& y, int s_min, double tau) {
  const int d = y.order();
  int s = std::max(1, s_min);
  if (s > d) return std::nullopt;
  int prev = NumericalRank(y.Matrix(s - 1), tau);
  for (; s <= d; ++s) {
    int cur = NumericalRank(y.Matrix(s), tau);
    if (cur == prev) return s;
    prev = cur;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Moment relaxation.

namespace {

using ExtraRows = std::vector<std::vector<std::pair<MultiIndex, double>>>;

struct PendingBlock {
  int generator;
  int order;
  Polynomial poly;  // reduced generator (1 for the moment matrix)
  std::vector<int> rows;
  std::vector<LinearForm> upper;  // row-major upper triangle over `rows`
};

int UpperIndex(int n, int i, int j) { return i * n - i * (i - 1) / 2 + (j - i); }

bool IsZeroForm(const LinearForm& f) {
  return f.terms.empty() && f.constant == 0.0;
}

void FillBlock(const MomentSpace& space, PendingBlock& b) {
  const auto& mons = space.monomials();
  const Reduction& red = space.reduction();
  const int n = b.rows.size();
  b.upper.assign(n * (n + 1) / 2, LinearForm());
  FormBuilder fb(space.num_free());
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      MultiIndex base = mons[b.rows[i]] * mons[b.rows[j]];
      for (const auto& [t, c] : b.poly.terms()) {
        int k = space.IndexOf(red.Normal(t * base));
        fb.Add(space.form(k), c);
      }
      b.upper[UpperIndex(n, i, j)] = fb.Take();
    }
  }
}

// Row (i, j) of the block as a combination of monomials.
std::vector<std::pair<MultiIndex, double>> EntryMonomials(
    const MomentSpace& space, const PendingBlock& b, int i, int j) {
  std::vector<std::pair<MultiIndex, double>> out;
  MultiIndex base =
      space.monomials()[b.rows[i]] * space.monomials()[b.rows[j]];
  for (const auto& [t, c] : b.poly.terms()) out.emplace_back(t * base, c);
  return out;
}

// Rows r with S(x) r = 0 for every x, written as e_p - sum c_q e_q with p
// the highest row. Returns the rows p that can be dropped.
std::vector<int> DependentRows(const PendingBlock& b, int num_free) {
  const int n = b.rows.size();
  if (n <= 1) return {};
  // Per variable (index num_free is the constant) sparse symmetric entries.
  std::vector<std::vector<std::tuple<int, int, double>>> by_var(num_free + 1);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const LinearForm& f = b.upper[UpperIndex(n, i, j)];
      if (f.constant != 0.0) by_var[num_free].emplace_back(i, j, f.constant);
      for (const auto& [v, c] : f.terms) by_var[v].emplace_back(i, j, c);
    }
  }
  MatrixXd g = MatrixXd::Zero(n, n);
  std::vector<std::vector<std::pair<int, double>>> row_entries(n);
  for (const auto& list : by_var) {
    if (list.empty()) continue;
    for (auto& r : row_entries) r.clear();
    for (const auto& [i, j, c] : list) {
      row_entries[i].emplace_back(j, c);
      if (i != j) row_entries[j].emplace_back(i, c);
    }
    for (const auto& r : row_entries) {
      for (const auto& [c1, v1] : r) {
        for (const auto& [c2, v2] : r) g(c1, c2) += v1 * v2;
      }
    }
  }
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(g);
  const VectorXd& ev = es.eigenvalues();
  double emax = std::max(ev.maxCoeff(), 1e-300);
  std::vector<int> null_cols;
  for (int k = 0; k < n; ++k) {
    if (ev(k) <= 1e-12 * emax) null_cols.push_back(k);
  }
  if (null_cols.empty()) return {};
  // Null vectors as rows, columns in descending row order.
  MatrixXd e(null_cols.size(), n);
  for (int k = 0; k < null_cols.size(); ++k) {
    for (int i = 0; i < n; ++i) {
      e(k, n - 1 - i) = es.eigenvectors()(i, null_cols[k]);
    }
  }
  std::vector<int> pivots = Rref(e, 1e-8);
  std::vector<int> drop;
  for (int k = 0; k < pivots.size(); ++k) {
    VectorXd v(n);
    for (int i = 0; i < n; ++i) v(i) = e(k, n - 1 - i);
    // Verify S_t v = 0 for every coefficient matrix.
    bool ok = true;
    for (const auto& list : by_var) {
      if (list.empty()) continue;
      VectorXd sv = VectorXd::Zero(n);
      double scale = 0.0;
      for (const auto& [i, j, c] : list) {
        sv(i) += c * v(j);
        if (i != j) sv(j) += c * v(i);
        scale = std::max(scale, std::abs(c));
      }
      if (sv.cwiseAbs().maxCoeff() > 1e-9 * std::max(scale, 1.0) *
                                         v.cwiseAbs().maxCoeff()) {
        ok = false;
        break;
      }
    }
    if (ok) drop.push_back(n - 1 - pivots[k]);
  }
  return drop;
}

void KeepRows(PendingBlock& b, const std::vector<bool>& keep) {
  const int n = b.rows.size();
  std::vector<int> idx;
  for (int i = 0; i < n; ++i) {
    if (keep[i]) idx.push_back(i);
  }
  const int m = idx.size();
  std::vector<int> rows(m);
  std::vector<LinearForm> upper(m * (m + 1) / 2);
  for (int a = 0; a < m; ++a) {
    rows[a] = b.rows[idx[a]];
    for (int c = a; c < m; ++c) {
      upper[UpperIndex(m, a, c)] = b.upper[UpperIndex(n, idx[a], idx[c])];
    }
  }
  b.rows = std::move(rows);
  b.upper = std::move(upper);
}

}  // namespace

MomentRelaxation BuildMomentRelaxation(const Polynomial& u,
                                       const SemiAlgebraicSet& set, int d,
                                       const MomentOptions& options) {
  if (u.structure() && !(*u.structure() == *set.structure)) {
    throw StructureMismatchError("objective and set have different layouts");
  }
  if (u.num_variables() != set.structure->num_variables()) {
    throw StructureMismatchError("objective has the wrong number of variables");
  }
  MomentRelaxation rel;
  rel.order = d;
  rel.min_order = set.MinimalOrder(u);
  if (d < rel.min_order) {
    throw DegreeTooLowError("relaxation order " + std::to_string(d) +
                            " below minimal order " +
                            std::to_string(rel.min_order));
  }
  auto red = std::make_shared<const Reduction>(set, options.eliminate);
  rel.objective = red->Reduce(u);
  rel.problem.sense = SdpProblem::Sense::kMaximize;

  ExtraRows extra;
  std::vector<PendingBlock> blocks;
  for (int round = 0;; ++round) {
    rel.space = std::make_shared<const MomentSpace>(red, d, extra);
    if (red->infeasible() || rel.space->infeasible()) {
      rel.infeasible = true;
      return rel;
    }
    const MomentSpace& space = *rel.space;
    blocks.clear();
    {
      PendingBlock b{-1, d, Polynomial(red->num_reduced()), {}, {}};
      b.poly.AddTerm(MultiIndex(), 1.0);
      blocks.push_back(std::move(b));
    }
    for (const auto& g : red->inequalities()) {
      int s = d - (g.degree + 1) / 2;
      if (s < 0) continue;
      blocks.push_back({g.source, s, g.poly, {}, {}});
    }
    for (PendingBlock& b : blocks) {
      int n = space.CountUpTo(b.order);
      b.rows.resize(n);
      for (int i = 0; i < n; ++i) b.rows[i] = i;
      FillBlock(space, b);
    }
    if (!options.facial_reduction) break;
    // A zero diagonal entry forces its whole row to vanish.
    bool added = false;
    for (const PendingBlock& b : blocks) {
      const int n = b.rows.size();
      for (int i = 0; i < n; ++i) {
        if (!IsZeroForm(b.upper[UpperIndex(n, i, i)])) continue;
        for (int j = 0; j < n; ++j) {
          const LinearForm& f =
              b.upper[UpperIndex(n, std::min(i, j), std::max(i, j))];
          if (IsZeroForm(f)) continue;
          extra.push_back(EntryMonomials(space, b, std::min(i, j),
                                         std::max(i, j)));
          added = true;
        }
      }
    }
    if (!added || round >= 8) break;
  }

  const MomentSpace& space = *rel.space;
  SdpProblem& p = rel.problem;
  for (int v = 0; v < space.num_free(); ++v) p.AddVariable();
  LinearForm obj = space.FormOf(rel.objective);
  p.objective_offset = obj.constant;
  for (const auto& [v, c] : obj.terms) p.objective[v] += c;

  for (PendingBlock& b : blocks) {
    if (options.facial_reduction) {
      int n = b.rows.size();
      std::vector<bool> keep(n, true);
      for (int i = 0; i < n; ++i) {
        bool zero = true;
        for (int j = 0; j < n && zero; ++j) {
          zero = IsZeroForm(b.upper[UpperIndex(n, std::min(i, j),
                                               std::max(i, j))]);
        }
        if (zero) keep[i] = false;
      }
      KeepRows(b, keep);
      n = b.rows.size();
      std::vector<int> drop = DependentRows(b, space.num_free());
      if (!drop.empty()) {
        keep.assign(n, true);
        for (int i : drop) keep[i] = false;
        KeepRows(b, keep);
      }
    }
    const int n = b.rows.size();
    if (n == 0) continue;
    bool constant = true;
    for (const LinearForm& f : b.upper) constant = constant && f.IsConstant();
    if (constant) {
      MatrixXd m(n, n);
      for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
          m(i, j) = m(j, i) = b.upper[UpperIndex(n, i, j)].constant;
        }
      }
      Eigen::SelfAdjointEigenSolver<MatrixXd> es(m, Eigen::EigenvaluesOnly);
      if (es.eigenvalues().minCoeff() < -1e-9) {
        rel.infeasible = true;
        return rel;
      }
      continue;
    }
    int k = p.AddBlock(n);
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        const LinearForm& f = b.upper[UpperIndex(n, i, j)];
        p.AddEntry(-1, k, i, j, f.constant);
        for (const auto& [v, c] : f.terms) p.AddEntry(v, k, i, j, c);
      }
    }
    rel.blocks.push_back({b.generator, b.order, b.rows});
  }
  return rel;
}

VectorXd MomentRelaxation::DiracPoint(std::span<const double> full) const {
  std::vector<double> point(full.begin(), full.end());
  return MomentVector::FromMeasure(space, {point}, {1.0}).Free();
}

// ---------------------------------------------------------------------------
// SOS relaxation.

SosRelaxation BuildSosRelaxation(const Polynomial& u,
                                 const SemiAlgebraicSet& set, int d,
                                 const MomentOptions& options) {
  if (u.num_variables() != set.structure->num_variables()) {
    throw StructureMismatchError("objective has the wrong number of variables");
  }
  int d0 = set.MinimalOrder(u);
  if (d < d0) {
    throw DegreeTooLowError("relaxation order " + std::to_string(d) +
                            " below minimal order " + std::to_string(d0));
  }
  SosRelaxation sos;
  sos.order = d;
  sos.reduction = std::make_shared<const Reduction>(set, options.eliminate);
  const Reduction& red = *sos.reduction;
  const int nr = red.num_reduced();
  std::vector<MultiIndex> mons = MonomialsUpToDegree(nr, 2 * d, &red.binary());
  std::map<MultiIndex, int> row_of;
  for (int i = 0; i < mons.size(); ++i) row_of[mons[i]] = i;
  std::vector<SdpProblem::Equality> eqs(mons.size());

  SdpProblem& p = sos.problem;
  p.sense = SdpProblem::Sense::kMinimize;
  int t = p.AddVariable();
  p.objective[t] = 1.0;
  eqs[0].terms.emplace_back(t, 1.0);
  Polynomial ur = red.Reduce(u);
  for (const auto& [m, c] : ur.terms()) eqs[row_of.at(m)].rhs += c;

  // t - u = sigma_0 + sum sigma_k g_k + sum p_h h.
  auto add_gram = [&](int generator, const Polynomial& g, int order) {
    std::vector<MultiIndex> basis = MonomialsUpToDegree(nr, order, &red.binary());
    const int n = basis.size();
    int k = p.AddBlock(n);
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        int v = p.AddVariable();
        p.AddEntry(v, k, i, j, 1.0);
        double mult = i == j ? 1.0 : 2.0;
        std::map<int, double> acc;
        for (const auto& [tm, c] : g.terms()) {
          acc[row_of.at(red.Normal(tm * basis[i] * basis[j]))] += c * mult;
        }
        for (const auto& [r, c] : acc) {
          if (c != 0.0) eqs[r].terms.emplace_back(v, -c);
        }
      }
    }
    sos.generators.push_back(generator);
    sos.bases.push_back(std::move(basis));
  };
  Polynomial one(nr);
  one.AddTerm(MultiIndex(), 1.0);
  add_gram(-1, one, d);
  for (const auto& g : red.inequalities()) {
    int s = d - (g.degree + 1) / 2;
    if (s >= 0) add_gram(g.source, g.poly, s);
  }
  for (const auto& h : red.equalities()) {
    int qmax = 2 * d - h.degree;
    for (const MultiIndex& q : mons) {
      if (q.degree() > qmax) break;
      int v = p.AddVariable();
      std::map<int, double> acc;
      for (const auto& [tm, c] : h.poly.terms()) {
        acc[row_of.at(red.Normal(tm * q))] += c;
      }
      for (const auto& [r, c] : acc) {
        if (c != 0.0) eqs[r].terms.emplace_back(v, -c);
      }
    }
  }
  p.equalities = std::move(eqs);
  return sos;
}

// ---------------------------------------------------------------------------
// Hierarchy driver.

namespace {

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since)
      .count();
}

long long Binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::llround(r);
}

// Monomials of degree <= D in f free and b binary variables.
long long CountMonomials(int f, int b, int D) {
  long long total = 0;
  for (int k = 0; k <= std::min(b, D); ++k) {
    total += Binomial(b, k) * Binomial(f + D - k, D - k);
  }
  return total;
}

// Moment block of a relaxation, or -1.
int MomentBlock(const MomentRelaxation& rel) {
  for (int k = 0; k < rel.blocks.size(); ++k) {
    if (rel.blocks[k].generator == -1) return k;
  }
  return -1;
}

// Minimizes <R, M_d(y)> over {y feasible, L(u) >= value - eta}.
SdpProblem RankReductionProblem(const MomentRelaxation& rel, double value,
                                std::uint64_t seed) {
  SdpProblem p = rel.problem;
  p.sense = SdpProblem::Sense::kMinimize;
  std::fill(p.objective.begin(), p.objective.end(), 0.0);
  p.objective_offset = 0.0;
  int mb = MomentBlock(rel);
  if (mb >= 0) {
    const int n = p.block_dims[mb];
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    MatrixXd b(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) b(i, j) = normal(rng);
    }
    MatrixXd r = b * b.transpose() / n;
    for (int v = 0; v < p.num_vars; ++v) {
      for (const auto& e : p.coefficients[v]) {
        if (e.block != mb) continue;
        p.objective[v] += (e.row == e.col ? 1.0 : 2.0) * r(e.row, e.col) * e.value;
      }
    }
    for (const auto& e : p.constant) {
      if (e.block != mb) continue;
      p.objective_offset +=
          (e.row == e.col ? 1.0 : 2.0) * r(e.row, e.col) * e.value;
    }
  }
  double eta = 1e-4 * std::max(1.0, std::abs(value));
  int k = p.AddBlock(1);
  p.AddEntry(-1, k, 0, 0, rel.problem.objective_offset - value + eta);
  for (int v = 0; v < p.num_vars; ++v) {
    p.AddEntry(v, k, 0, 0, rel.problem.objective[v]);
  }
  return p;
}

// True when the set is exactly the product of simplices of its structure.
bool IsStrategySpace(const SemiAlgebraicSet& set) {
  SemiAlgebraicSet ref = SimplexSet(set.structure);
  return set.inequalities == ref.inequalities &&
         set.equalities == ref.equalities;
}

// Euclidean projection onto the probability simplex.
void ProjectSimplex(std::span<double> v) {
  std::vector<double> u(v.begin(), v.end());
  std::sort(u.rbegin(), u.rend());
  double cum = 0.0, theta = 0.0;
  for (int k = 0; k < u.size(); ++k) {
    cum += u[k];
    double t = (cum - 1.0) / (k + 1);
    if (u[k] - t > 0) theta = t;
  }
  for (double& x : v) x = std::max(x - theta, 0.0);
}

// Projected gradient ascent on the product of simplices.
std::vector<double> PolishAtom(const Polynomial& u, const BlockStructure& st,
                               std::vector<double> x) {
  std::vector<Polynomial> grad;
  for (int v = 0; v < st.num_variables(); ++v) grad.push_back(u.Derivative(v));
  auto project = [&st](std::vector<double>& p) {
    for (const auto& b : st.blocks()) {
      ProjectSimplex(std::span<double>(p.data() + b.offset, b.size));
    }
  };
  project(x);
  double fx = u.Evaluate(x);
  double step = 1.0;
  for (int it = 0; it < 5000 && step > 1e-16; ++it) {
    std::vector<double> g(x.size());
    for (int v = 0; v < x.size(); ++v) g[v] = grad[v].Evaluate(x);
    bool moved = false;
    while (step > 1e-16) {
      std::vector<double> y = x;
      for (int v = 0; v < y.size(); ++v) y[v] += step * g[v];
      project(y);
      double fy = u.Evaluate(y);
      if (fy > fx) {
        moved = fy - fx > 1e-15;
        x = std::move(y);
        fx = fy;
        step *= 2.0;
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  return x;
}

}  // namespace

bool SolutionUsable(const SdpSolution& s) {
  if (s.status == SdpStatus::kOptimal) return true;
  if (s.status == SdpStatus::kSlowProgress ||
      s.status == SdpStatus::kIterationLimit) {
    return s.primal_residual <= 1e-5 && s.dual_residual <= 1e-5 &&
           s.gap <= 1e-5;
  }
  return false;
}

bool PrimalUsable(const SdpSolution& s) {
  if (s.status == SdpStatus::kOptimal) return true;
  if (s.status == SdpStatus::kSlowProgress ||
      s.status == SdpStatus::kIterationLimit) {
    return s.primal_residual <= 1e-5 && s.gap <= 1e-5;
  }
  return false;
}

HierarchyResult SolvePop(const Polynomial& objective,
                         const SemiAlgebraicSet& set,
                         const HierarchyOptions& options, Formulation label) {
  auto start = std::chrono::steady_clock::now();
  HierarchyResult result;
  result.formulation = label;
  result.min_order = set.MinimalOrder(objective);
  int d_start = options.d_start > 0 ? options.d_start : result.min_order;
  if (d_start < result.min_order) {
    throw DegreeTooLowError("d_start below the minimal order");
  }
  int d_max = options.d_max;
  if (d_max <= 0) {
    d_max = label == Formulation::kVertexRestricted
                ? std::max(d_start, set.structure->num_blocks() + 1)
                : d_start + 4;
  }
  Reduction probe(set, options.moment.eliminate);
  int nbin = 0;
  for (bool b : probe.binary()) nbin += b;
  const int nfree = probe.num_reduced() - nbin;

  SdpOptions sdp;
  sdp.tol = options.tol;
  sdp.max_iter = options.max_iter;
  sdp.verbose = options.verbose;
  ExtractionOptions ext;
  ext.rank_tol = options.rank_tol;
  ext.clamp_tol = options.atom_tol;
  ext.seed = options.seed;

  const bool polytope = IsStrategySpace(set);
  auto try_extract = [&](const MomentVector& y, int s, double value,
                         bool polish) -> bool {
    try {
      AtomicMeasure m = Extract(y, s, ext);
      std::optional<double> riesz = y.Riesz(objective);
      if (polish && polytope) {
        for (auto& a : m.atoms) a = PolishAtom(objective, *set.structure, a);
        riesz.reset();
        result.diagnostics.push_back("d=" + std::to_string(y.order()) +
                                     ": atoms polished by local ascent");
      }
      AtomReport rep = CertifyAtoms(m, objective, value, set, riesz,
                                    options.atom_tol);
      if (!rep.ok) {
        for (const auto& msg : rep.messages) {
          result.diagnostics.push_back("d=" + std::to_string(y.order()) +
                                       ": " + msg);
        }
        return false;
      }
      result.atoms.clear();
      for (int k = 0; k < m.atoms.size(); ++k) {
        result.atoms.push_back({m.atoms[k], m.weights[k], rep.values[k]});
      }
      return true;
    } catch (const ExtractionError& e) {
      result.diagnostics.push_back("d=" + std::to_string(y.order()) +
                                   ": extraction: " + e.what());
      return false;
    }
  };

  for (int d = d_start; d <= d_max; ++d) {
    long long count = CountMonomials(nfree, nbin, 2 * d);
    if (count > options.max_moments) {
      result.diagnostics.push_back(
          "d=" + std::to_string(d) + ": " + std::to_string(count) +
          " moments exceed max_moments; stopping");
      break;
    }
    auto t0 = std::chrono::steady_clock::now();
    DegreeRecord rec;
    rec.d = d;
    MomentRelaxation rel = BuildMomentRelaxation(objective, set, d,
                                                 options.moment);
    if (rel.infeasible) {
      rec.status = "infeasible";
      rec.seconds = Seconds(t0);
      result.degrees.push_back(rec);
      result.infeasible = true;
      break;
    }
    rec.num_free = rel.space->num_free();
    rec.matrix_size = rel.MomentMatrixSize();
    SdpSolution sol = SolveSdp(rel.problem, sdp);
    rec.status = SdpStatusName(sol.status);
    if (options.verbose) {
      std::fprintf(stderr, "[hierarchy] d=%d free=%d status=%s value=%.9g\n",
                   d, rec.num_free, rec.status.c_str(), sol.objective);
    }
    if (sol.status == SdpStatus::kInfeasible) {
      rec.seconds = Seconds(t0);
      result.degrees.push_back(rec);
      result.infeasible = true;
      break;
    }
    const bool primal_only = !SolutionUsable(sol) &&
                             options.accept_primal_stall &&
                             PrimalUsable(sol);
    if (!SolutionUsable(sol) && !primal_only) {
      rec.seconds = Seconds(t0);
      result.degrees.push_back(rec);
      result.diagnostics.push_back("d=" + std::to_string(d) +
                                   ": SDP status " + rec.status);
      continue;
    }
    rec.moment_value = sol.objective;
    rec.certified = !primal_only;
    if (primal_only) {
      result.diagnostics.push_back(
          "d=" + std::to_string(d) + ": dual residual " +
          std::to_string(sol.dual_residual) +
          "; moments used without a certified bound");
    } else {
      if (result.bound && sol.objective > *result.bound + 1e-6) {
        result.diagnostics.push_back("d=" + std::to_string(d) +
                                     ": bound increased from previous degree");
      }
      if (!result.bound || sol.objective < *result.bound) {
        result.bound = sol.objective;
      }
    }
    if (options.compute_sos) {
      SosRelaxation sos = BuildSosRelaxation(objective, set, d, options.moment);
      SdpSolution ss = SolveSdp(sos.problem, sdp);
      rec.sos_status = SdpStatusName(ss.status);
      if (SolutionUsable(ss)) rec.sos_value = ss.objective;
    }
    MomentVector y = rel.Moments(sol.x);
    rec.rank = NumericalRank(y.Matrix(d), options.rank_tol);
    rec.flat_order = Flatness(y, result.min_order, options.rank_tol);
    bool exact = false;
    if (rec.flat_order) {
      exact = try_extract(y, *rec.flat_order, sol.objective, false);
    }
    if (!exact && options.rank_reduction) {
      SdpProblem rr = RankReductionProblem(rel, sol.objective,
                                           options.seed + d);
      SdpSolution s2 = SolveSdp(rr, sdp);
      if (SolutionUsable(s2) ||
          (options.accept_primal_stall && PrimalUsable(s2))) {
        MomentVector y2 = rel.Moments(s2.x);
        std::optional<int> f2 = Flatness(y2, result.min_order,
                                         options.rank_tol);
        if (f2) {
          exact = try_extract(y2, *f2, sol.objective, true);
          if (exact) {
            rec.rank_reduced = true;
            rec.flat_order = f2;
            rec.rank = NumericalRank(y2.Matrix(d), options.rank_tol);
          }
        }
      } else {
        result.diagnostics.push_back("d=" + std::to_string(d) +
                                     ": rank reduction status " +
                                     SdpStatusName(s2.status));
      }
    }
    rec.seconds = Seconds(t0);
    result.degrees.push_back(rec);
    if (exact && !result.exact) {
      result.exact = true;
      result.exact_degree = d;
      result.flat_order = rec.flat_order;
    }
    if (result.exact && options.stop_at_exact) break;
  }
  result.seconds = Seconds(start);
  return result;
}

HierarchyResult RunHierarchy(const Polynomial& u, Formulation f,
                             const HierarchyOptions& options) {
  if (!u.structure()) {
    throw StructureMismatchError("objective needs a block structure");
  }
  if (u.structure()->num_players() != 1) {
    throw StructureMismatchError("RunHierarchy expects a single player");
  }
  return SolvePop(u, FormulationSet(f, {u}), options, f);
}

Json HierarchyResult::ToJson(const BlockStructure* structure) const {
  Json j;
  j["formulation"] = FormulationName(formulation);
  j["min_order"] = min_order;
  j["exact"] = exact;
  j["infeasible"] = infeasible;
  j["bound"] = bound ? Json(*bound) : Json(nullptr);
  j["flat_order"] = flat_order ? Json(*flat_order) : Json(nullptr);
  j["exact_degree"] = exact_degree ? Json(*exact_degree) : Json(nullptr);
  j["exact_moment_degree"] =
      exact_degree ? Json(2 * *exact_degree) : Json(nullptr);
  Json degs = Json::array();
  for (const DegreeRecord& r : degrees) {
    Json d;
    d["d"] = r.d;
    d["moment_degree"] = 2 * r.d;
    d["status"] = r.status;
    d["moment_value"] = r.moment_value;
    d["certified"] = r.certified;
    d["sos_value"] = r.sos_value ? Json(*r.sos_value) : Json(nullptr);
    if (!r.sos_status.empty()) d["sos_status"] = r.sos_status;
    d["flat_order"] = r.flat_order ? Json(*r.flat_order) : Json(nullptr);
    d["rank"] = r.rank;
    d["rank_reduced"] = r.rank_reduced;
    d["num_free"] = r.num_free;
    d["matrix_size"] = r.matrix_size;
    d["seconds"] = r.seconds;
    degs.push_back(d);
  }
  j["degrees"] = degs;
  Json atoms_json = Json::array();
  for (const Atom& a : atoms) {
    Json aj;
    aj["point"] = a.point;
    if (structure) aj["strategy"] = StrategyToJson(*structure, a.point);
    aj["weight"] = a.weight;
    aj["value"] = a.value;
    atoms_json.push_back(aj);
  }
  j["atoms"] = atoms_json;
  j["diagnostics"] = diagnostics;
  j["seconds"] = seconds;
  return j;
}

}  // namespace irsos
