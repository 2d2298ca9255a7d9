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

#ifndef IRSOS_MOMENT_H_
#define IRSOS_MOMENT_H_

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "irsos/json_io.h"
#include "irsos/polynomial.h"
#include "irsos/sdp.h"

namespace irsos {

enum class Formulation { kVanilla, kVertexRestricted, kKktAugmented };
std::string FormulationName(Formulation f);
// Accepts "vanilla", "vertex_restricted" / "vr", "kkt_augmented" / "kkt".
Formulation ParseFormulation(const std::string& name);

// {mu : g(mu) >= 0, h(mu) = 0} over the strategy variables. The ball
// constraint N - |mu|^2 >= 0 is not stored in `inequalities`; it is added
// once by AllInequalities() and by every relaxation builder.
struct SemiAlgebraicSet {
  StructurePtr structure;
  std::vector<Polynomial> inequalities;
  std::vector<Polynomial> equalities;
  double archimedean_bound = 1.0;

  Polynomial BallPolynomial() const;
  std::vector<Polynomial> AllInequalities() const;
  // max(1, ceil(deg/2)) over the objective and all constraints.
  int MinimalOrder(const Polynomial& objective) const;
  // Largest violation of any constraint at `point` (0 when feasible).
  double MaxViolation(std::span<const double> point) const;
};

SemiAlgebraicSet SimplexSet(StructurePtr structure);
SemiAlgebraicSet VertexRestrictedSet(StructurePtr structure);
// One utility per player. Multipliers are lambda_a = nu - w_a >= 0 with
// w = grad of u_i on the block and nu = mu^T w, plus mu_a * lambda_a = 0.
SemiAlgebraicSet KktAugmentedSet(const std::vector<Polynomial>& utilities,
                                 StructurePtr structure);
SemiAlgebraicSet FormulationSet(Formulation f,
                                const std::vector<Polynomial>& utilities);

class DegreeTooLowError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Coordinates of the quotient used by the relaxations. Linear equalities are
// solved for one variable each, variables with mu^2 - mu in the ideal are
// capped at exponent 1. Everything else stays an explicit equality.
class Reduction {
 public:
  // With eliminate == false the reduction is the identity.
  Reduction(const SemiAlgebraicSet& set, bool eliminate);

  const SemiAlgebraicSet& set() const { return set_; }
  int num_full() const { return num_full_; }
  int num_reduced() const { return kept_.size(); }
  const std::vector<int>& kept() const { return kept_; }
  const std::vector<bool>& binary() const { return binary_; }

  // Substitutes eliminated variables and caps binary exponents.
  Polynomial Reduce(const Polynomial& full) const;
  MultiIndex Normal(const MultiIndex& m) const { return m.Capped(binary_); }
  Polynomial Multiply(const Polynomial& a, const Polynomial& b) const;

  std::vector<double> Project(std::span<const double> full) const;
  std::vector<double> Lift(std::span<const double> reduced) const;

  // Remaining constraints in reduced coordinates with the degree of the
  // original constraint they came from.
  struct Constraint {
    Polynomial poly;
    int degree;
    int source;  // index into set().equalities or set().AllInequalities()
  };
  const std::vector<Constraint>& equalities() const { return equalities_; }
  const std::vector<Constraint>& inequalities() const { return inequalities_; }
  // A constant constraint is violated (the set is empty).
  bool infeasible() const { return infeasible_; }

 private:
  SemiAlgebraicSet set_;
  int num_full_ = 0;
  std::vector<int> kept_;
  std::vector<int> reduced_of_;             // full var -> reduced or -1
  std::vector<Polynomial> substitution_;    // full var -> reduced poly
  std::vector<bool> binary_;
  std::vector<Constraint> equalities_;
  std::vector<Constraint> inequalities_;
  bool infeasible_ = false;
};

struct LinearForm {
  double constant = 0.0;
  std::vector<std::pair<int, double>> terms;

  bool IsConstant() const { return terms.empty(); }
  double Evaluate(const Eigen::VectorXd& x) const;
};

struct MomentOptions {
  // Use the Reduction coordinates; false keeps all n0 variables.
  bool eliminate = true;
  // Drop rows of PSD blocks that vanish identically or depend linearly on
  // other rows for every x.
  bool facial_reduction = true;
};

// Monomials of degree <= 2d in reduced coordinates and the affine map from
// the free moments to every y_alpha implied by the equalities.
class MomentSpace {
 public:
  MomentSpace(std::shared_ptr<const Reduction> reduction, int order,
              const std::vector<std::vector<std::pair<MultiIndex, double>>>&
                  extra_rows = {});

  const Reduction& reduction() const { return *reduction_; }
  const std::shared_ptr<const Reduction>& reduction_ptr() const {
    return reduction_;
  }
  int order() const { return order_; }
  const std::vector<MultiIndex>& monomials() const { return monomials_; }
  int IndexOf(const MultiIndex& m) const;  // -1 if absent
  const LinearForm& form(int i) const { return forms_[i]; }
  int num_free() const { return free_.size(); }
  const std::vector<int>& free_monomials() const { return free_; }
  bool infeasible() const { return infeasible_; }
  // Number of monomials of degree <= s.
  int CountUpTo(int s) const;

  // L(p) for a reduced polynomial as a form over the free moments.
  LinearForm FormOf(const Polynomial& reduced) const;

 private:
  std::shared_ptr<const Reduction> reduction_;
  int order_;
  std::vector<MultiIndex> monomials_;
  std::map<MultiIndex, int> index_;
  std::vector<LinearForm> forms_;
  std::vector<int> free_;
  bool infeasible_ = false;
};

// Truncated moment sequence y_alpha, |alpha| <= 2d, over a MomentSpace.
class MomentVector {
 public:
  MomentVector(std::shared_ptr<const MomentSpace> space,
               std::vector<double> values);
  static MomentVector FromFree(std::shared_ptr<const MomentSpace> space,
                               const Eigen::VectorXd& x);
  // Moments of sum_k w_k delta_{p_k}; points are in full coordinates.
  static MomentVector FromMeasure(std::shared_ptr<const MomentSpace> space,
                                  const std::vector<std::vector<double>>& points,
                                  const std::vector<double>& weights);

  const MomentSpace& space() const { return *space_; }
  const std::shared_ptr<const MomentSpace>& space_ptr() const {
    return space_;
  }
  int order() const { return space_->order(); }
  const std::vector<double>& values() const { return values_; }
  double operator[](const MultiIndex& reduced) const;

  // L_y on a polynomial in full coordinates.
  double Riesz(const Polynomial& full) const;
  double RieszReduced(const Polynomial& reduced) const;
  // Rows/columns are the monomials of degree <= s in space().monomials().
  Eigen::MatrixXd Matrix(int s) const;
  Eigen::MatrixXd LocalizingMatrix(const Polynomial& full_g, int s) const;
  // Free moments (SDP variables) of this sequence.
  Eigen::VectorXd Free() const;

 private:
  std::shared_ptr<const MomentSpace> space_;
  std::vector<double> values_;
};

int NumericalRank(const Eigen::MatrixXd& m, double tau);

// Smallest s in [max(1, s_min), d] with rank M_s = rank M_{s-1}.
std::optional<int> Flatness(const MomentVector& y, int s_min,
                            double tau = 1e-6);

struct MomentRelaxation {
  struct BlockInfo {
    int generator;  // -1: moment matrix; else index into AllInequalities()
    int order;
    std::vector<int> rows;  // indices into space->monomials()
  };

  SdpProblem problem;  // maximize L(u)
  std::shared_ptr<const MomentSpace> space;
  Polynomial objective;  // reduced
  int order = 0;
  int min_order = 0;
  std::vector<BlockInfo> blocks;
  bool infeasible = false;

  MomentVector Moments(const Eigen::VectorXd& x) const {
    return MomentVector::FromFree(space, x);
  }
  // Free moments of the Dirac measure at a full point.
  Eigen::VectorXd DiracPoint(std::span<const double> full) const;
  // Number of monomials of degree <= order: the size of M_d(y).
  int MomentMatrixSize() const { return space->CountUpTo(order); }
};

// Throws DegreeTooLowError when d < set.MinimalOrder(u).
MomentRelaxation BuildMomentRelaxation(const Polynomial& u,
                                       const SemiAlgebraicSet& set, int d,
                                       const MomentOptions& options = {});

struct SosRelaxation {
  SdpProblem problem;  // minimize t; variable 0 is t
  std::shared_ptr<const Reduction> reduction;
  int order = 0;
  // Gram blocks: -1 for sigma_0, else index into AllInequalities().
  std::vector<int> generators;
  std::vector<std::vector<MultiIndex>> bases;
};

SosRelaxation BuildSosRelaxation(const Polynomial& u,
                                 const SemiAlgebraicSet& set, int d,
                                 const MomentOptions& options = {});

struct HierarchyOptions {
  int d_start = 0;  // 0: minimal order
  int d_max = 0;    // 0: l + 1 for vertex-restricted, else d_start + 4
  double tol = 1e-7;
  int max_iter = 300;
  double rank_tol = 1e-6;
  double atom_tol = 1e-5;
  bool compute_sos = false;
  // Second solve minimizing <R, M_d> over the optimal face when not flat.
  bool rank_reduction = true;
  // false: keep solving up to d_max after the first exact degree.
  bool stop_at_exact = true;
  // Use stalled solves whose dual residual is large for extraction only; they
  // never set the bound. For callers that verify the atoms independently.
  bool accept_primal_stall = false;
  std::uint64_t seed = 20260;
  // Stop before building a relaxation with more monomials than this.
  long long max_moments = 12000;
  MomentOptions moment;
  bool verbose = false;
};

struct DegreeRecord {
  int d = 0;
  std::string status;
  double moment_value = 0.0;
  bool certified = false;  // moment_value is a valid upper bound
  std::optional<double> sos_value;
  std::string sos_status;
  std::optional<int> flat_order;
  int rank = 0;
  bool rank_reduced = false;
  int num_free = 0;
  int matrix_size = 0;
  double seconds = 0.0;
};

struct Atom {
  std::vector<double> point;  // full coordinates
  double weight = 0.0;
  double value = 0.0;
};

struct HierarchyResult {
  Formulation formulation = Formulation::kVanilla;
  int min_order = 0;
  std::vector<DegreeRecord> degrees;
  std::optional<double> bound;  // best (smallest) certified moment value
  std::optional<int> flat_order;
  std::optional<int> exact_degree;
  std::vector<Atom> atoms;
  bool exact = false;
  bool infeasible = false;  // relaxation proved the set empty
  std::vector<std::string> diagnostics;
  double seconds = 0.0;

  Json ToJson(const BlockStructure* structure = nullptr) const;
};

// Optimal, or stalled with residuals and gap all <= 1e-5.
bool SolutionUsable(const SdpSolution& s);
// Optimal, or stalled with primal residual and gap <= 1e-5.
bool PrimalUsable(const SdpSolution& s);

// Maximizes `objective` over `set` with the moment hierarchy.
HierarchyResult SolvePop(const Polynomial& objective,
                         const SemiAlgebraicSet& set,
                         const HierarchyOptions& options,
                         Formulation label = Formulation::kVanilla);

// Single-player driver: maximizes u over the formulation's set.
HierarchyResult RunHierarchy(const Polynomial& u, Formulation f,
                             const HierarchyOptions& options = {});

}  // namespace irsos

#endif  // IRSOS_MOMENT_H_
