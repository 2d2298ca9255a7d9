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
#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "irsos/bridge.h"
#include "irsos/catalog.h"
#include "irsos/experiments.h"
#include "test_util.h"

namespace irsos {
namespace {

using Kind = NashOutcome::Kind;

Polynomial Var(StructurePtr s, int v) { return Polynomial::Variable(s, v); }

// Max of u_i over the player's pure deviations, opponents at `profile`.
double VertexBest(const Polynomial& u, int player,
                  const std::vector<double>& profile) {
  const BlockStructure& s = *u.structure();
  auto [first, count] = s.PlayerRange(player);
  double best = -INFINITY;
  for (const auto& v : PlayerVertices(s, player)) {
    std::vector<double> p = profile;
    std::copy(v.begin(), v.end(), p.begin() + first);
    best = std::max(best, u.Evaluate(p));
  }
  return best;
}

double MaxGain(const std::vector<Polynomial>& us,
               const std::vector<double>& profile) {
  double g = -INFINITY;
  for (int i = 0; i < us.size(); ++i) {
    g = std::max(g, VertexBest(us[i], i, profile) - us[i].Evaluate(profile));
  }
  return g;
}

std::vector<Polynomial> RandomNamGame(std::uint64_t seed) {
  StructurePtr s = MakeStructure({{2, 2}, {2, 2}});
  return {RandomMultiAffinePolynomial(s, seed),
          RandomMultiAffinePolynomial(s, seed + 7919)};
}

TEST(ThetaTest, SymmetricPositiveDefinite) {
  Eigen::MatrixXd t = RandomTheta(4, 3);
  ASSERT_EQ(t.rows(), 5);
  EXPECT_LE((t - t.transpose()).norm(), 1e-14);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
  EXPECT_GE(es.eigenvalues()(0), 1e-3 - 1e-12);
  EXPECT_EQ(t, RandomTheta(4, 3));
  EXPECT_NE(t, RandomTheta(4, 4));
}

TEST(HelpersTest, RestrictAndDeviate) {
  StructurePtr s = MakeStructure({{2}, {2}});
  Polynomial u = Var(s, 0) * Var(s, 2) + 3.0 * Var(s, 1);
  std::vector<double> prof{0.25, 0.75, 0.4, 0.6};
  Polynomial r = Restrict(u, 0, prof);
  EXPECT_EQ(r.structure()->num_variables(), 2);
  EXPECT_NEAR(r.Evaluate(std::vector<double>{0.25, 0.75}), u.Evaluate(prof),
              1e-14);
  std::vector<double> dev{1.0, 0.0};
  Polynomial d = Deviate(u, 0, dev);
  EXPECT_NEAR(d.Evaluate(prof), 0.4, 1e-14);
  EXPECT_TRUE(IsMultiAffine(u));
  EXPECT_FALSE(IsMultiAffine(Var(s, 0) * Var(s, 1)));
  EXPECT_EQ(PlayerVertices(*s, 1).size(), 2);
}

TEST(HelpersTest, VertexCap) {
  StructurePtr s = MakeStructure({{3, 3, 3}, {2}});
  EXPECT_EQ(PlayerVertices(*s, 0).size(), 27);
  EXPECT_THROW(PlayerVertices(*s, 0, 10), VertexCapExceededError);
}

TEST(SelectorTest, RejectsBadThetaAndCuts) {
  StructurePtr s = MakeStructure({{2}, {2}});
  std::vector<Polynomial> us{Var(s, 0), Var(s, 2)};
  EXPECT_THROW(SelectorProgram(us, Eigen::MatrixXd::Identity(4, 4)),
               std::invalid_argument);
  Eigen::MatrixXd asym = Eigen::MatrixXd::Identity(5, 5);
  asym(0, 1) = 0.5;
  EXPECT_THROW(SelectorProgram(us, asym), std::invalid_argument);
  Eigen::MatrixXd indef = Eigen::MatrixXd::Identity(5, 5);
  indef(2, 2) = -1.0;
  EXPECT_THROW(SelectorProgram(us, indef), std::invalid_argument);
  SelectorProgram prog(us, Eigen::MatrixXd::Identity(5, 5));
  EXPECT_THROW(prog.AddCut(0, {0.7, 0.7}), std::invalid_argument);
  EXPECT_THROW(prog.AddCut(0, {1.0}), std::invalid_argument);
  prog.AddCut(0, {1.0, 0.0});
  EXPECT_EQ(prog.num_cuts(), 1);
}

TEST(SelectorTest, PhiIsTheQuadraticForm) {
  StructurePtr s = MakeStructure({{2}, {2}});
  std::vector<Polynomial> us{Var(s, 0), Var(s, 2)};
  Eigen::MatrixXd theta = RandomTheta(4, 9);
  SelectorProgram prog(us, theta);
  std::vector<double> p{0.3, 0.7, 0.9, 0.1};
  Eigen::VectorXd z(5);
  z << 1.0, 0.3, 0.7, 0.9, 0.1;
  EXPECT_NEAR(prog.Phi().Evaluate(p), z.dot(theta * z), 1e-12);
  EXPECT_NEAR(prog.Objective().Evaluate(p), -z.dot(theta * z), 1e-12);
  SelectorProgram w(us, theta, true);
  EXPECT_NEAR(w.Objective().Evaluate(p), 0.3 + 0.9, 1e-12);
}

TEST(SelectorTest, CutsAreSoundAndSeparate) {
  std::vector<Polynomial> us = GameToPolynomials(MatchingPenniesGame());
  SelectorProgram prog(us, RandomTheta(4, 1));
  std::vector<double> ne{0.5, 0.5, 0.5, 0.5};
  std::vector<double> bad{1.0, 0.0, 0.5, 0.5};
  for (int i = 0; i < 2; ++i) {
    for (const auto& v : PlayerVertices(*us[0].structure(), i)) {
      // Valid at the equilibrium.
      EXPECT_GE(prog.CutPolynomial(i, v).Evaluate(ne), -1e-12);
    }
  }
  Verification ver = VerifyCandidate(us, bad, 1);
  ASSERT_GT(ver.gain, 1e-3);
  // Violated by the candidate that produced it.
  EXPECT_NEAR(prog.CutPolynomial(1, ver.best_response).Evaluate(bad),
              -ver.gain, 1e-6);
}

TEST(VerifyTest, PenniesDeviationIsPure) {
  std::vector<Polynomial> us = GameToPolynomials(MatchingPenniesGame());
  std::vector<double> cand{1.0, 0.0, 0.5, 0.5};
  Verification v0 = VerifyCandidate(us, cand, 0);
  Verification v1 = VerifyCandidate(us, cand, 1);
  EXPECT_NEAR(v0.gain, VertexBest(us[0], 0, cand) - us[0].Evaluate(cand),
              1e-6);
  EXPECT_NEAR(v1.gain, VertexBest(us[1], 1, cand) - us[1].Evaluate(cand),
              1e-6);
  EXPECT_GT(v1.gain, 1e-3);
  ASSERT_EQ(v1.best_response.size(), 2);
  EXPECT_NEAR(std::max(v1.best_response[0], v1.best_response[1]), 1.0, 1e-6);
}

TEST(VerifyTest, MultiAffineGainMatchesVertexEnumeration) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 6; ++t) {
    std::vector<Polynomial> us = RandomNamGame(100 + t);
    std::vector<double> cand =
        testing::RandomStrategy(*us[0].structure(), rng);
    for (int i = 0; i < 2; ++i) {
      Verification v = VerifyCandidate(us, cand, i);
      double expect = VertexBest(us[i], i, cand) - us[i].Evaluate(cand);
      EXPECT_NEAR(v.gain, expect, 1e-6) << t << " " << i << " " << v.method;
    }
  }
}

TEST(VerifyTest, AbsentmindedDeviationUsesPolynomialMaximum) {
  StructurePtr s = MakeStructure({{2}, {2}});
  Polynomial u0 = Var(s, 0) * Var(s, 1);
  Polynomial u1 = Var(s, 2);
  std::vector<double> cand{1.0, 0.0, 1.0, 0.0};
  Verification v = VerifyCandidate({u0, u1}, cand, 0);
  // max x(1 - x) = 1/4 at x = 1/2, not at a vertex.
  EXPECT_NEAR(v.best, 0.25, 1e-5);
  EXPECT_NEAR(v.gain, 0.25, 1e-5);
}

TEST(SvcTest, MatchingPennies) {
  std::vector<Polynomial> us = GameToPolynomials(MatchingPenniesGame());
  for (auto solve : {&SvcSolve, &NamOneShot}) {
    NashOutcome r = solve(us, {});
    ASSERT_EQ(r.kind, Kind::kEquilibrium) << r.evidence;
    for (double x : r.equilibrium) EXPECT_NEAR(x, 0.5, 1e-4);
    for (double g : r.gains) EXPECT_LE(g, 1e-5);
    EXPECT_LE(MaxGain(us, r.equilibrium), 1e-5);
  }
}

TEST(SvcTest, NoEquilibriumGame) {
  std::vector<Polynomial> us = GameToPolynomials(NoEquilibriumGame());
  NashOutcome svc = SvcSolve(us);
  EXPECT_EQ(svc.kind, Kind::kNonexistence) << svc.evidence;
  EXPECT_GE(svc.cuts, 1);
  EXPECT_LE(svc.rounds.back().degree.value_or(99), 4);
  EXPECT_EQ(NamOneShot(us).kind, Kind::kNonexistence);
}

TEST(SvcTest, DominantVertexNeedsNoCuts) {
  StructurePtr s = MakeStructure({{2}, {2}});
  std::vector<Polynomial> us{Var(s, 0) + 0.5 * Var(s, 0) * Var(s, 2),
                             Var(s, 3) + 0.5 * Var(s, 1) * Var(s, 3)};
  NashOutcome r = SvcSolve(us);
  ASSERT_EQ(r.kind, Kind::kEquilibrium);
  EXPECT_EQ(r.cuts, 0);
  EXPECT_EQ(r.rounds.size(), 1);
  std::vector<double> expect{1, 0, 0, 1};
  for (int v = 0; v < 4; ++v) EXPECT_NEAR(r.equilibrium[v], expect[v], 1e-4);
}

TEST(SvcTest, ConcaveGameNeedsNoCuts) {
  StructurePtr s = MakeStructure({{2}, {2}});
  Polynomial x = Var(s, 0), y = Var(s, 2);
  Polynomial c = Polynomial::Constant(s, 0.3);
  std::vector<Polynomial> us{-1.0 * (x - c) * (x - c) + 0.2 * x * y,
                             -1.0 * (y - x) * (y - x)};
  NashOutcome r = SvcSolve(us);
  ASSERT_EQ(r.kind, Kind::kEquilibrium) << r.evidence;
  EXPECT_EQ(r.cuts, 0);
  EXPECT_EQ(r.rounds.size(), 1);
  // Stationarity: x = 0.3 + 0.1 y, y = x.
  EXPECT_NEAR(r.equilibrium[0], 0.3 / 0.9, 1e-4);
  EXPECT_NEAR(r.equilibrium[2], 0.3 / 0.9, 1e-4);
}

TEST(SvcTest, VerdictDoesNotDependOnTheta) {
  std::vector<Polynomial> none = GameToPolynomials(NoEquilibriumGame());
  std::vector<Polynomial> pen = GameToPolynomials(MatchingPenniesGame());
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    NashOptions o;
    o.seed = seed;
    EXPECT_EQ(SvcSolve(none, o).kind, Kind::kNonexistence) << seed;
    EXPECT_EQ(SvcSolve(pen, o).kind, Kind::kEquilibrium) << seed;
  }
}

TEST(SvcTest, AgreesWithOneShotOnRandomGames) {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    std::vector<Polynomial> us = RandomNamGame(seed);
    NashOutcome a = SvcSolve(us);
    NashOutcome b = NamOneShot(us);
    EXPECT_EQ(a.kind, b.kind) << seed;
    for (const NashOutcome* r : {&a, &b}) {
      if (r->kind != Kind::kEquilibrium) continue;
      EXPECT_LE(MaxGain(us, r->equilibrium), 1e-5) << seed << r->method;
    }
  }
}

TEST(SvcTest, RoundLimit) {
  std::vector<Polynomial> us = GameToPolynomials(NoEquilibriumGame());
  NashOptions o;
  o.max_rounds = 1;
  NashOutcome r = SvcSolve(us, o);
  EXPECT_EQ(r.kind, Kind::kInconclusive);
  EXPECT_EQ(r.rounds.size(), 1);
}

TEST(SvcTest, RejectsSinglePlayerAndNonMultiAffine) {
  StructurePtr s = MakeStructure({{2}});
  EXPECT_THROW(SvcSolve({Var(s, 0)}), std::invalid_argument);
  StructurePtr t = MakeStructure({{2}, {2}});
  EXPECT_THROW(NamOneShot({Var(t, 0) * Var(t, 1), Var(t, 2)}),
               std::invalid_argument);
}

TEST(SvcTest, Json) {
  std::vector<Polynomial> us = GameToPolynomials(MatchingPenniesGame());
  NashOutcome r = SvcSolve(us);
  Json j = r.ToJson(us[0].structure().get());
  EXPECT_EQ(j["verdict"], "equilibrium");
  EXPECT_EQ(j["method"], "svc");
  EXPECT_EQ(j["seed"], 1);
  EXPECT_EQ(j["omega"].size(), 2);
  EXPECT_TRUE(j["rounds"].is_array());
  EXPECT_EQ(NashKindName(Kind::kNonexistence), "nonexistence");
}

}  // namespace
}  // namespace irsos
