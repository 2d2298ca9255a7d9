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

#include <random>
#include <sstream>

#include "gtest/gtest.h"

namespace irsos {
namespace {

// min x s.t. [[x, 1], [1, x]] PSD.
SdpProblem TwoByTwo() {
  SdpProblem p;
  int x = p.AddVariable();
  int b = p.AddBlock(2);
  p.AddEntry(x, b, 0, 0, 1);
  p.AddEntry(x, b, 1, 1, 1);
  p.AddEntry(-1, b, 0, 1, 1);
  p.objective[x] = 1;
  return p;
}

TEST(SdpTest, TwoByTwo) {
  SdpProblem p = TwoByTwo();
  SdpSolution s = SolveSdp(p);
  ASSERT_EQ(s.status, SdpStatus::kOptimal);
  EXPECT_NEAR(s.objective, 1.0, 1e-6);
  CertificateReport r = CheckCertificate(p, s);
  EXPECT_TRUE(r.ok) << (r.violations.empty() ? "" : r.violations[0]);
}

TEST(SdpTest, EqualityFixedScalar) {
  SdpProblem p;
  int x = p.AddVariable();
  int b = p.AddBlock(1);
  p.AddEntry(x, b, 0, 0, 1);
  p.equalities.push_back({{{x, 1.0}}, 3.0});
  p.objective[x] = 1;
  p.sense = SdpProblem::Sense::kMaximize;
  SdpSolution s = SolveSdp(p);
  ASSERT_EQ(s.status, SdpStatus::kOptimal);
  EXPECT_NEAR(s.objective, 3.0, 1e-6);
  EXPECT_TRUE(CheckCertificate(p, s).ok);
}

// Moment relaxation of max 4x - 3x^2 on [0, 1]:
// [[1, y1], [y1, y2]] PSD, y1 - y2 >= 0 (x(1 - x) >= 0), objective 4y1 - 3y2.
TEST(SdpTest, QuadraticMomentRelaxation) {
  SdpProblem p;
  int y1 = p.AddVariable(), y2 = p.AddVariable();
  int m = p.AddBlock(2), g = p.AddBlock(1);
  p.AddEntry(-1, m, 0, 0, 1);
  p.AddEntry(y1, m, 0, 1, 1);
  p.AddEntry(y2, m, 1, 1, 1);
  p.AddEntry(y1, g, 0, 0, 1);
  p.AddEntry(y2, g, 0, 0, -1);
  p.objective = {4, -3};
  p.sense = SdpProblem::Sense::kMaximize;
  SdpSolution s = SolveSdp(p);
  ASSERT_EQ(s.status, SdpStatus::kOptimal);
  EXPECT_NEAR(s.objective, 4.0 / 3.0, 1e-6);
  EXPECT_TRUE(CheckCertificate(p, s).ok);
}

TEST(SdpTest, InfeasibleScalars) {
  // max x s.t. -x >= 0 and x - 1 >= 0.
  SdpProblem p;
  int x = p.AddVariable();
  int a = p.AddBlock(1), b = p.AddBlock(1);
  p.AddEntry(x, a, 0, 0, -1);
  p.AddEntry(x, b, 0, 0, 1);
  p.AddEntry(-1, b, 0, 0, -1);
  p.objective[x] = 1;
  p.sense = SdpProblem::Sense::kMaximize;
  SdpSolution s = SolveSdp(p);
  ASSERT_EQ(s.status, SdpStatus::kInfeasible);
  CertificateReport r = CheckCertificate(p, s);
  EXPECT_TRUE(r.ok) << (r.violations.empty() ? "" : r.violations[0]);
}

TEST(SdpTest, Unbounded) {
  // max x s.t. x >= 0.
  SdpProblem p;
  int x = p.AddVariable();
  int a = p.AddBlock(1);
  p.AddEntry(x, a, 0, 0, 1);
  p.objective[x] = 1;
  p.sense = SdpProblem::Sense::kMaximize;
  SdpSolution s = SolveSdp(p);
  EXPECT_EQ(s.status, SdpStatus::kUnbounded);
}

TEST(SdpTest, CorruptedPrimalIsFlagged) {
  SdpProblem p = TwoByTwo();
  SdpSolution s = SolveSdp(p);
  ASSERT_EQ(s.status, SdpStatus::kOptimal);
  s.primal[0](0, 0) -= 0.5;
  EXPECT_FALSE(CheckCertificate(p, s).ok);
}

TEST(SdpTest, DimensionMismatch) {
  SdpProblem p = TwoByTwo();
  p.coefficients[0].push_back({0, 2, 2, 1.0});
  EXPECT_THROW(SolveSdp(p), DimensionMismatchError);
  SdpProblem q = TwoByTwo();
  q.equalities.push_back({{{3, 1.0}}, 0});
  EXPECT_THROW(SolveSdp(q), DimensionMismatchError);
}

// Random dense problems: min <C, X> s.t. trace(X) = 1 with X a PSD matrix
// variable; the optimum is the smallest eigenvalue of C.
TEST(SdpTest, SmallestEigenvalueOracle) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 6;
    Eigen::MatrixXd c(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j <= i; ++j) c(i, j) = c(j, i) = g(rng);
    SdpProblem p;
    int b = p.AddBlock(n);
    SdpProblem::Equality trace;
    trace.rhs = 1;
    for (int i = 0; i < n; ++i) {
      for (int j = i; j < n; ++j) {
        int v = p.AddVariable();
        p.AddEntry(v, b, i, j, 1.0);
        p.objective[v] = i == j ? c(i, i) : 2 * c(i, j);
        if (i == j) trace.terms.push_back({v, 1.0});
      }
    }
    p.equalities.push_back(trace);
    SdpSolution s = SolveSdp(p);
    ASSERT_EQ(s.status, SdpStatus::kOptimal);
    double lmin = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(c)
                      .eigenvalues()
                      .minCoeff();
    EXPECT_NEAR(s.objective, lmin, 1e-6);
    EXPECT_LE(s.objective, s.dual_objective + 1e-6 * (1 + std::abs(lmin)));
    EXPECT_TRUE(CheckCertificate(p, s).ok);
  }
}

TEST(SdpTest, DeterministicAndDump) {
  SdpProblem p = TwoByTwo();
  SdpSolution a = SolveSdp(p), b = SolveSdp(p);
  EXPECT_EQ(a.x, b.x);
  EXPECT_EQ(a.iterations, b.iterations);
  std::ostringstream os;
  p.DumpText(os);
  EXPECT_NE(os.str().find("-1 0 0 1 1"), std::string::npos);
}

}  // namespace
}  // namespace irsos
