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

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "irsos/bridge.h"
#include "irsos/catalog.h"
#include "test_util.h"

namespace irsos {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

Polynomial Taxi() { return GameToPolynomial(TaxiDriverGame(), 0); }

double MinEig(const MatrixXd& m) {
  return Eigen::SelfAdjointEigenSolver<MatrixXd>(m).eigenvalues().minCoeff();
}

std::shared_ptr<const MomentSpace> Space(const SemiAlgebraicSet& set, int d) {
  return std::make_shared<const MomentSpace>(
      std::make_shared<const Reduction>(set, true), d);
}

TEST(SetTest, SimplexShape) {
  StructurePtr s = MakeStructure({{2}});
  SemiAlgebraicSet set = SimplexSet(s);
  EXPECT_EQ(set.inequalities.size(), 2);
  EXPECT_EQ(set.equalities.size(), 1);
  EXPECT_EQ(set.archimedean_bound, 1.0);
  EXPECT_EQ(set.AllInequalities().size(), 3);

  SemiAlgebraicSet taxi = SimplexSet(Taxi().structure());
  EXPECT_EQ(taxi.inequalities.size(), 2);
  EXPECT_EQ(taxi.equalities.size(), 1);

  StructurePtr big = MakeStructure({{2, 3}, {4}});
  SemiAlgebraicSet b = SimplexSet(big);
  EXPECT_EQ(b.inequalities.size(), 9);
  EXPECT_EQ(b.equalities.size(), 3);
  EXPECT_EQ(b.archimedean_bound, 3.0);
}

TEST(SetTest, VertexRestrictedPoints) {
  StructurePtr s = MakeStructure({{2, 3}});
  SemiAlgebraicSet set = VertexRestrictedSet(s);
  EXPECT_TRUE(set.inequalities.empty());
  EXPECT_EQ(set.equalities.size(), 2 + 5);
  int feasible = 0;
  for (int mask = 0; mask < 32; ++mask) {
    std::vector<double> p(5);
    for (int v = 0; v < 5; ++v) p[v] = (mask >> v) & 1;
    feasible += set.MaxViolation(p) == 0.0;
  }
  EXPECT_EQ(feasible, 2 * 3);
  EXPECT_GT(set.MaxViolation(std::vector<double>{0.5, 0.5, 1, 0, 0}), 0.1);
}

TEST(SetTest, KktLinearHasOnlyTheVertex) {
  StructurePtr s = MakeStructure({{2}});
  Polynomial u = Polynomial::Variable(s, 0, 4.0) + Polynomial::Variable(s, 1);
  SemiAlgebraicSet set = KktAugmentedSet({u}, s);
  for (int k = 0; k <= 100; ++k) {
    double x = k / 100.0;
    std::vector<double> p{x, 1 - x};
    EXPECT_EQ(set.MaxViolation(p) <= 1e-12, k == 100) << x;
  }
}

TEST(SetTest, KktConstantUtilityAddsNothing) {
  StructurePtr s = MakeStructure({{3}});
  SemiAlgebraicSet set = KktAugmentedSet({Polynomial::Constant(s, 2.0)}, s);
  SemiAlgebraicSet plain = SimplexSet(s);
  EXPECT_EQ(set.inequalities.size(), plain.inequalities.size());
  EXPECT_EQ(set.equalities.size(), plain.equalities.size());
}

TEST(SetTest, KktTaxiInteriorPoint) {
  Polynomial u = Taxi();
  SemiAlgebraicSet set = KktAugmentedSet({u}, u.structure());
  EXPECT_LE(set.MaxViolation(std::vector<double>{2.0 / 3, 1.0 / 3}), 1e-12);
  EXPECT_GT(set.MaxViolation(std::vector<double>{0.5, 0.5}), 1e-3);
  EXPECT_GT(set.MaxViolation(std::vector<double>{1, 0}), 1e-3);
  EXPECT_GT(set.MaxViolation(std::vector<double>{0, 1}), 1e-3);
}

TEST(SetTest, KktRejectsWrongStructure) {
  Polynomial u = Taxi();
  EXPECT_THROW(KktAugmentedSet({u}, MakeStructure({{3}})),
               StructureMismatchError);
  EXPECT_THROW(KktAugmentedSet({u, u}, u.structure()), StructureMismatchError);
}

TEST(ReductionTest, SimplexEliminatesLastAction) {
  StructurePtr s = MakeStructure({{2, 3}});
  Reduction red(SimplexSet(s), true);
  EXPECT_EQ(red.num_reduced(), 3);
  EXPECT_EQ(red.kept(), (std::vector<int>{0, 2, 3}));
  EXPECT_TRUE(red.equalities().empty());
  std::vector<double> full{0.25, 0.75, 0.2, 0.3, 0.5};
  EXPECT_EQ(red.Lift(red.Project(full)), full);
}

TEST(ReductionTest, VertexSetCapsExponents) {
  StructurePtr s = MakeStructure({{3}});
  Reduction red(VertexRestrictedSet(s), true);
  EXPECT_EQ(red.num_reduced(), 2);
  EXPECT_TRUE(red.binary()[0]);
  EXPECT_TRUE(red.binary()[1]);
  // The eliminated action leaves x0 x1 = 0.
  ASSERT_EQ(red.equalities().size(), 1);
  EXPECT_EQ(red.equalities()[0].poly.num_terms(), 1);
}

TEST(ReductionTest, ReducePreservesValuesOnTheSet) {
  std::mt19937_64 rng(3);
  StructurePtr s = MakeStructure({{2, 3}});
  Reduction red(SimplexSet(s), true);
  for (int t = 0; t < 20; ++t) {
    Polynomial p = testing::RandomPolynomial(s, 4, 8, rng);
    std::vector<double> x = testing::RandomStrategy(*s, rng);
    EXPECT_NEAR(red.Reduce(p).Evaluate(red.Project(x)), p.Evaluate(x), 1e-12);
  }
}

TEST(MomentTest, DegreeTooLow) {
  Polynomial u = FourTermPolynomial();
  EXPECT_THROW(BuildMomentRelaxation(u, KktAugmentedSet({u}, u.structure()), 1),
               DegreeTooLowError);
  EXPECT_THROW(BuildSosRelaxation(ConvexQuarticPolynomial(),
                                  SimplexSet(ConvexQuarticPolynomial().structure()),
                                  1),
               DegreeTooLowError);
}

TEST(MomentTest, RawMatrixDimensionIsMonomialCount) {
  MomentOptions raw{false, false};
  Polynomial taxi = Taxi();
  for (int d = 1; d <= 3; ++d) {
    MomentRelaxation rel =
        BuildMomentRelaxation(taxi, SimplexSet(taxi.structure()), d, raw);
    EXPECT_EQ(rel.MomentMatrixSize(), NumMonomials(2, d));
    EXPECT_EQ(rel.problem.block_dims[0], NumMonomials(2, d));
  }
  Polynomial four = FourTermPolynomial();
  MomentRelaxation rel =
      BuildMomentRelaxation(four, SimplexSet(four.structure()), 2, raw);
  EXPECT_EQ(rel.MomentMatrixSize(), 15);  // C(4 + 2, 2)
}

void ExpectDiracFeasible(const Polynomial& u, const SemiAlgebraicSet& set,
                         int d, const std::vector<double>& point,
                         const MomentOptions& options) {
  MomentRelaxation rel = BuildMomentRelaxation(u, set, d, options);
  ASSERT_FALSE(rel.infeasible);
  VectorXd x = rel.DiracPoint(point);
  for (const MatrixXd& m : rel.problem.BlockValues(x)) {
    EXPECT_GE(MinEig(m), -1e-9);
  }
  for (const auto& eq : rel.problem.equalities) {
    double lhs = 0;
    for (const auto& [v, a] : eq.terms) lhs += a * x(v);
    EXPECT_NEAR(lhs, eq.rhs, 1e-9);
  }
  EXPECT_NEAR(rel.problem.ObjectiveValue(x), u.Evaluate(point), 1e-9);
}

TEST(MomentTest, DiracMomentsAreFeasible) {
  std::mt19937_64 rng(11);
  Polynomial four = FourTermPolynomial();
  for (int t = 0; t < 5; ++t) {
    std::vector<double> p = testing::RandomStrategy(*four.structure(), rng);
    for (bool elim : {true, false}) {
      ExpectDiracFeasible(four, SimplexSet(four.structure()), 2, p,
                          MomentOptions{elim, elim});
    }
  }
  Polynomial g1 = VertexOptimumPolynomial();
  ExpectDiracFeasible(g1, VertexRestrictedSet(g1.structure()), 3,
                      {1, 0, 0, 1, 1, 0}, {});
  Polynomial taxi = Taxi();
  ExpectDiracFeasible(taxi, KktAugmentedSet({taxi}, taxi.structure()), 3,
                      {2.0 / 3, 1.0 / 3}, {});
}

TEST(MomentTest, TaxiFirstLevelBound) {
  Polynomial taxi = Taxi();
  for (bool elim : {true, false}) {
    MomentRelaxation rel = BuildMomentRelaxation(
        taxi, SimplexSet(taxi.structure()), 1, MomentOptions{elim, elim});
    SdpSolution s = SolveSdp(rel.problem);
    ASSERT_EQ(s.status, SdpStatus::kOptimal);
    EXPECT_GE(s.objective, 4.0 / 3 - 1e-7);
  }
}

TEST(MomentTest, EliminatedAndRawAgree) {
  Polynomial four = FourTermPolynomial();
  for (int d = 1; d <= 2; ++d) {
    double v[2];
    for (int k = 0; k < 2; ++k) {
      MomentRelaxation rel = BuildMomentRelaxation(
          four, SimplexSet(four.structure()), d, MomentOptions{k == 0, k == 0});
      SdpSolution s = SolveSdp(rel.problem);
      ASSERT_TRUE(s.status == SdpStatus::kOptimal ||
                  s.status == SdpStatus::kSlowProgress);
      v[k] = s.objective;
    }
    EXPECT_NEAR(v[0], v[1], 1e-5) << "d=" << d;
  }
}

TEST(SosTest, ConstantObjective) {
  StructurePtr s = MakeStructure({{2, 2}});
  SosRelaxation sos =
      BuildSosRelaxation(Polynomial::Constant(s, 2.5), SimplexSet(s), 1);
  SdpSolution sol = SolveSdp(sos.problem);
  ASSERT_EQ(sol.status, SdpStatus::kOptimal);
  EXPECT_NEAR(sol.objective, 2.5, 1e-6);
}

TEST(SosTest, SosValueBoundsMomentValue) {
  for (const Polynomial& u : {Taxi(), FourTermPolynomial()}) {
    SemiAlgebraicSet set = SimplexSet(u.structure());
    for (int d = set.MinimalOrder(u); d <= 2; ++d) {
      SdpSolution m = SolveSdp(BuildMomentRelaxation(u, set, d).problem);
      SdpSolution s = SolveSdp(BuildSosRelaxation(u, set, d).problem);
      ASSERT_EQ(m.status, SdpStatus::kOptimal);
      ASSERT_EQ(s.status, SdpStatus::kOptimal);
      EXPECT_GE(s.objective, m.objective - 1e-6);
      EXPECT_NEAR(s.objective, m.objective, 1e-5);
    }
  }
}

TEST(MomentVectorTest, RieszIsLinearAndNormalized) {
  std::mt19937_64 rng(5);
  StructurePtr s = MakeStructure({{2, 3}});
  SemiAlgebraicSet set = SimplexSet(s);
  auto space = Space(set, 2);
  VectorXd x = VectorXd::Random(space->num_free());
  MomentVector y = MomentVector::FromFree(space, x);
  EXPECT_EQ(y[MultiIndex()], 1.0);
  for (int t = 0; t < 10; ++t) {
    Polynomial p = testing::RandomPolynomial(s, 4, 6, rng);
    Polynomial q = testing::RandomPolynomial(s, 4, 6, rng);
    EXPECT_NEAR(y.Riesz(2.0 * p - 3.0 * q),
                2.0 * y.Riesz(p) - 3.0 * y.Riesz(q), 1e-9);
  }
}

TEST(MomentVectorTest, LocalizingMatrixOfDirac) {
  StructurePtr s = MakeStructure({{2, 2}});
  SemiAlgebraicSet set = SimplexSet(s);
  auto space = Space(set, 2);
  std::vector<double> p{0.3, 0.7, 0.6, 0.4};
  MomentVector y = MomentVector::FromMeasure(space, {p}, {1.0});
  Polynomial g = set.BallPolynomial();
  MatrixXd loc = y.LocalizingMatrix(g, 1);
  MatrixXd mom = y.Matrix(1);
  EXPECT_LE((loc - g.Evaluate(p) * mom).cwiseAbs().maxCoeff(), 1e-12);
  // Entry formula L(g x^(a+b)).
  const auto& mons = space->monomials();
  Polynomial mono(space->reduction().num_reduced());
  mono.AddTerm(mons[1] * mons[2], 1.0);
  EXPECT_NEAR(mom(1, 2), y.RieszReduced(mono), 1e-15);
}

TEST(FlatnessTest, DiracIsFlatWithRankOne) {
  StructurePtr s = MakeStructure({{2, 2}});
  auto space = Space(SimplexSet(s), 3);
  MomentVector y =
      MomentVector::FromMeasure(space, {{0.2, 0.8, 0.5, 0.5}}, {1.0});
  for (int t = 0; t <= 3; ++t) EXPECT_EQ(NumericalRank(y.Matrix(t), 1e-6), 1);
  EXPECT_EQ(Flatness(y, 1), 1);
}

TEST(FlatnessTest, TwoAtomsStabilizeAtRankTwo) {
  StructurePtr s = MakeStructure({{2}});
  auto space = Space(SimplexSet(s), 3);
  MomentVector y =
      MomentVector::FromMeasure(space, {{1, 0}, {0, 1}}, {0.5, 0.5});
  EXPECT_EQ(NumericalRank(y.Matrix(0), 1e-6), 1);
  EXPECT_EQ(NumericalRank(y.Matrix(1), 1e-6), 2);
  EXPECT_EQ(NumericalRank(y.Matrix(2), 1e-6), 2);
  EXPECT_EQ(Flatness(y, 1), 2);
}

TEST(FlatnessTest, VertexMomentsStabilizeAfterInfosetCount) {
  std::mt19937_64 rng(9);
  StructurePtr s = MakeStructure({{3, 2, 2}});
  SemiAlgebraicSet set = VertexRestrictedSet(s);
  const int l = 3;
  auto space = Space(set, l + 2);
  std::vector<std::vector<double>> pts;
  std::vector<double> w;
  std::uniform_int_distribution<int> pick(0, 5);
  for (int k = 0; k < 5; ++k) {
    std::vector<double> p(7, 0.0);
    p[pick(rng) % 3] = 1;
    p[3 + pick(rng) % 2] = 1;
    p[5 + pick(rng) % 2] = 1;
    pts.push_back(p);
    w.push_back(0.1 + k);
  }
  double total = 0;
  for (double x : w) total += x;
  for (double& x : w) x /= total;
  MomentVector y = MomentVector::FromMeasure(space, pts, w);
  int rl = NumericalRank(y.Matrix(l), 1e-6);
  for (int t = l + 1; t <= l + 2; ++t) {
    EXPECT_EQ(NumericalRank(y.Matrix(t), 1e-6), rl);
  }
}

TEST(FlatnessTest, VertexRestrictedOptimumFlatAtInfosetCountPlusOne) {
  Polynomial u = VertexOptimumPolynomial();
  const int l = 3;
  MomentRelaxation rel =
      BuildMomentRelaxation(u, VertexRestrictedSet(u.structure()), l + 1);
  SdpSolution s = SolveSdp(rel.problem);
  ASSERT_EQ(s.status, SdpStatus::kOptimal);
  MomentVector y = rel.Moments(s.x);
  EXPECT_EQ(NumericalRank(y.Matrix(l + 1), 1e-6),
            NumericalRank(y.Matrix(l), 1e-6));
  EXPECT_TRUE(Flatness(y, 1).has_value());
}

TEST(HierarchyTest, FourTermPolynomial) {
  HierarchyResult r = RunHierarchy(FourTermPolynomial(), Formulation::kVanilla);
  ASSERT_TRUE(r.exact);
  EXPECT_LE(*r.exact_degree, 4);
  EXPECT_NEAR(*r.bound, 9.0, 1e-4);
  ASSERT_EQ(r.atoms.size(), 1);
  std::vector<double> want{1, 0, 1, 0};
  for (int v = 0; v < 4; ++v) EXPECT_NEAR(r.atoms[0].point[v], want[v], 1e-4);
}

TEST(HierarchyTest, VertexRestrictedThreeInfosets) {
  HierarchyOptions o;
  o.d_start = 4;
  HierarchyResult r =
      RunHierarchy(VertexOptimumPolynomial(), Formulation::kVertexRestricted, o);
  ASSERT_TRUE(r.exact);
  EXPECT_EQ(*r.exact_degree, 4);
  EXPECT_NEAR(*r.bound, 1.0, 1e-4);
  ASSERT_EQ(r.atoms.size(), 1);
  std::vector<double> want{0, 1, 0, 1, 0, 1};
  for (int v = 0; v < 6; ++v) EXPECT_NEAR(r.atoms[0].point[v], want[v], 1e-4);
}

TEST(HierarchyTest, VertexRestrictedDefaultStopsAtInfosetCountPlusOne) {
  HierarchyResult r = RunHierarchy(VertexOptimumPolynomial(),
                                   Formulation::kVertexRestricted);
  ASSERT_TRUE(r.exact);
  EXPECT_LE(r.degrees.back().d, 4);
}

TEST(HierarchyTest, MixedOptimumNeedsRankReduction) {
  HierarchyOptions o;
  o.d_max = 6;
  HierarchyResult r =
      RunHierarchy(MixedOptimumPolynomial(), Formulation::kVanilla, o);
  ASSERT_TRUE(r.exact);
  EXPECT_LE(*r.exact_degree, 6);
  EXPECT_NEAR(*r.bound, 1.0, 1e-3);
  ASSERT_FALSE(r.atoms.empty());
  EXPECT_NEAR(r.atoms[0].point[0], 0.5, 1e-2);
  EXPECT_NEAR(r.atoms[0].point[1], 0.0, 1e-2);
  EXPECT_NEAR(r.atoms[0].point[2], 0.5, 1e-2);
}

TEST(HierarchyTest, TaxiAllFormulations) {
  for (Formulation f : {Formulation::kVanilla, Formulation::kKktAugmented}) {
    HierarchyResult r = RunHierarchy(Taxi(), f);
    ASSERT_TRUE(r.exact) << FormulationName(f);
    EXPECT_NEAR(*r.bound, 4.0 / 3, 1e-6);
    ASSERT_EQ(r.atoms.size(), 1);
    EXPECT_NEAR(r.atoms[0].point[0], 2.0 / 3, 1e-4);
  }
}

TEST(HierarchyTest, KktLinearObjective) {
  StructurePtr s = MakeStructure({{2}});
  Polynomial u = Polynomial::Variable(s, 0, 4.0) + Polynomial::Variable(s, 1);
  HierarchyResult r = RunHierarchy(u, Formulation::kKktAugmented);
  ASSERT_TRUE(r.exact);
  EXPECT_NEAR(*r.bound, 4.0, 1e-6);
  EXPECT_NEAR(r.atoms[0].point[0], 1.0, 1e-5);
}

TEST(HierarchyTest, SandwichAndMonotoneBounds) {
  Polynomial u = FourTermPolynomial();
  HierarchyOptions o;
  o.d_start = 1;
  o.d_max = 3;
  o.compute_sos = true;
  o.rank_reduction = false;
  o.stop_at_exact = false;
  HierarchyResult r = RunHierarchy(u, Formulation::kVanilla, o);
  ASSERT_EQ(r.degrees.size(), 3);
  double prev = 1e300;
  for (const DegreeRecord& d : r.degrees) {
    EXPECT_GE(d.moment_value, 9.0 - 1e-6);
    ASSERT_TRUE(d.sos_value.has_value());
    EXPECT_LE(d.moment_value, *d.sos_value + 1e-6);
    EXPECT_LE(d.moment_value, prev + 1e-6);
    prev = d.moment_value;
  }
}

TEST(HierarchyTest, SizeGuardStops) {
  HierarchyOptions o;
  o.max_moments = 10;
  o.d_start = 2;
  HierarchyResult r = RunHierarchy(FourTermPolynomial(), Formulation::kVanilla, o);
  EXPECT_TRUE(r.degrees.empty());
  EXPECT_FALSE(r.exact);
  EXPECT_FALSE(r.diagnostics.empty());
}

TEST(HierarchyTest, JsonHasBoundsAndAtoms) {
  Polynomial u = Taxi();
  HierarchyResult r = RunHierarchy(u, Formulation::kVanilla);
  Json j = r.ToJson(u.structure().get());
  EXPECT_EQ(j["formulation"], "vanilla");
  EXPECT_TRUE(j["exact"].get<bool>());
  EXPECT_EQ(j["degrees"].size(), r.degrees.size());
  EXPECT_EQ(j["atoms"].size(), 1);
  EXPECT_TRUE(j["atoms"][0].contains("strategy"));
}

TEST(HierarchyTest, RejectsMultiplayerAndBadStart) {
  StructurePtr s = MakeStructure({{2}, {2}});
  EXPECT_THROW(RunHierarchy(Polynomial::Constant(s, 1), Formulation::kVanilla),
               StructureMismatchError);
  HierarchyOptions o;
  o.d_start = 1;
  EXPECT_THROW(RunHierarchy(ConvexQuarticPolynomial(), Formulation::kVanilla, o),
               DegreeTooLowError);
  EXPECT_THROW(ParseFormulation("sideways"), std::invalid_argument);
  EXPECT_EQ(ParseFormulation("vr"), Formulation::kVertexRestricted);
}

}  // namespace
}  // namespace irsos
