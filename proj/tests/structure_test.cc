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

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "irsos/catalog.h"
#include "test_util.h"

namespace irsos {
namespace {

Polynomial Var(StructurePtr s, int v) { return Polynomial::Variable(s, v); }

Polynomial NegSquaredNorm(StructurePtr s) {
  Polynomial p(s);
  for (int v = 0; v < s->num_variables(); ++v) p -= Var(s, v) * Var(s, v);
  return p;
}

// -sum_k (a_k . mu + b_k)^2 - (c . mu)^4 + w . mu with random data.
Polynomial RandomSosConcave(StructurePtr s, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  const int n = s->num_variables();
  Polynomial u(s);
  for (int k = 0; k < 2; ++k) {
    Polynomial l = Polynomial::Constant(s, g(rng));
    for (int v = 0; v < n; ++v) l += Polynomial::Variable(s, v, g(rng));
    u -= l * l;
  }
  Polynomial c(s);
  for (int v = 0; v < n; ++v) c += Polynomial::Variable(s, v, g(rng));
  u -= (c * c) * (c * c);
  for (int v = 0; v < n; ++v) u += Polynomial::Variable(s, v, g(rng));
  return u;
}

// z^T M(mu) z at random (mu, z) and the Gram form b^T Q b.
void ExpectGramSound(const PolyMatrix& m, const SosMatrixCertificate& cert) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const int nv = m.entries[0].num_variables();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cert.gram);
  EXPECT_GE(es.eigenvalues()(0), -1e-6 * std::max(1.0, cert.gram.norm()));
  for (int t = 0; t < 100; ++t) {
    std::vector<double> mu(nv);
    for (double& x : mu) x = u(rng);
    Eigen::VectorXd z(m.rows);
    for (int a = 0; a < m.rows; ++a) z(a) = u(rng);
    std::vector<double> v = m.Evaluate(mu);
    Eigen::MatrixXd mat =
        Eigen::Map<const Eigen::MatrixXd>(v.data(), m.rows, m.rows);
    double direct = z.dot(mat * z);
    EXPECT_GE(direct, -1e-7);
    Eigen::VectorXd b(cert.basis.size());
    for (int i = 0; i < b.size(); ++i) {
      b(i) = z(cert.basis[i].first) * cert.basis[i].second.Evaluate(mu);
    }
    EXPECT_NEAR(b.dot(cert.gram * b), direct, 1e-5 * (1 + std::abs(direct)));
  }
}

TEST(CertifyTest, NegativeSquaredNormIsSosConcave) {
  StructurePtr s = MakeStructure({{2, 3}});
  Polynomial u = NegSquaredNorm(s);
  auto certs = CertifySosConcave({u});
  ASSERT_EQ(certs.size(), 1);
  EXPECT_TRUE(certs[0].certified);
  EXPECT_FALSE(certs[0].falsified);
  PolyMatrix neg = TangentHessian(u, 0);
  for (Polynomial& p : neg.entries) p *= -1.0;
  ExpectGramSound(neg, certs[0]);
}

TEST(CertifyTest, QuarticOfLinearFormIsSosConcave) {
  StructurePtr s = MakeStructure({{2, 2}});
  Polynomial l = Var(s, 0) + 2.0 * Var(s, 2) - Var(s, 3);
  Polynomial u = -1.0 * ((l * l) * (l * l)) - (Var(s, 1) - Var(s, 3)) *
                                                    (Var(s, 1) - Var(s, 3));
  auto certs = CertifySosConcave({u});
  EXPECT_TRUE(certs[0].certified) << certs[0].sdp_status << " "
                                  << certs[0].margin;
  PolyMatrix neg = TangentHessian(u, 0);
  for (Polynomial& p : neg.entries) p *= -1.0;
  ExpectGramSound(neg, certs[0]);
}

TEST(CertifyTest, CrossTermIsNotSosConcave) {
  StructurePtr s = MakeStructure({{2, 2}});
  Polynomial u = Var(s, 0) * Var(s, 2);
  auto certs = CertifySosConcave({u});
  EXPECT_FALSE(certs[0].certified);
  EXPECT_TRUE(certs[0].falsified);
  EXPECT_LT(certs[0].witness_value, 0.0);
}

TEST(CertifyTest, CrossTermRejectedBySdpWithoutSampling) {
  StructurePtr s = MakeStructure({{2, 2}});
  CertifyOptions o;
  o.samples = 0;
  auto certs = CertifySosConcave({Var(s, 0) * Var(s, 2)}, o);
  EXPECT_FALSE(certs[0].certified);
  EXPECT_FALSE(certs[0].falsified);
  EXPECT_LT(certs[0].margin, -1e-3);
}

TEST(CertifyTest, PrintedQuarticIsSosConvexButNotSosConcave) {
  Polynomial u = ConvexQuarticPolynomial();
  EXPECT_FALSE(CertifySosConcave({u})[0].certified);
  CertifyOptions o;
  o.samples = 0;
  EXPECT_FALSE(CertifySosConcave({u}, o)[0].certified);
  SosMatrixCertificate convex = CertifySosConvex(u);
  EXPECT_TRUE(convex.certified) << convex.margin;
  ExpectGramSound(TangentHessian(u, 0), convex);
  // Over all four variables (not only the tangent directions) the Hessian
  // has a negative eigenvalue near (0.9606, -0.2778, 0, 0).
  std::vector<double> p{0.960646814, -0.277772745, 0.0, 0.0};
  PolyMatrix h = HessianBlock(u, 0);
  std::vector<double> v = h.Evaluate(p);
  Eigen::MatrixXd m = Eigen::Map<const Eigen::MatrixXd>(v.data(), 4, 4);
  double lo = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m).eigenvalues()(0);
  EXPECT_NEAR(lo, -1.68198e-3, 1e-7);
}

TEST(CertifyTest, TangentProjectionOfTaxi) {
  // x^2 + 4 x y on the segment x + y = 1 is 4x - 3x^2.
  StructurePtr s = MakeStructure({{2}});
  Polynomial u = Var(s, 0) * Var(s, 0) + 4.0 * Var(s, 0) * Var(s, 1);
  PolyMatrix t = TangentHessian(u, 0);
  ASSERT_EQ(t.rows, 1);
  EXPECT_NEAR(t.Evaluate(std::vector<double>{0.3, 0.7})[0], -6.0, 1e-12);
  EXPECT_TRUE(CertifySosConcave({u})[0].certified);
  StructurePtr one = MakeStructure({{1, 3}});
  EXPECT_EQ(TangentHessian(Polynomial::Variable(one, 1), 0).rows, 2);
}

TEST(CertifyTest, LinearUtilityIsBoth) {
  StructurePtr s = MakeStructure({{3}});
  Polynomial u = Var(s, 0) - 2.0 * Var(s, 1);
  EXPECT_TRUE(CertifySosConcave({u})[0].certified);
  EXPECT_TRUE(CertifySosMonotone({u}).certified);
}

TEST(CertifyTest, ZeroSumBilinearIsSosMonotone) {
  StructurePtr s = MakeStructure({{2}, {2}});
  Polynomial u1 = Var(s, 0) * Var(s, 2);
  SosMatrixCertificate c = CertifySosMonotone({u1, -1.0 * u1});
  EXPECT_TRUE(c.certified);
}

TEST(CertifyTest, CommonInterestBilinearIsNotMonotone) {
  StructurePtr s = MakeStructure({{2}, {2}});
  Polynomial u = Var(s, 0) * Var(s, 2);
  SosMatrixCertificate c = CertifySosMonotone({u, u});
  EXPECT_FALSE(c.certified);
  EXPECT_TRUE(c.falsified);
  // Each player's own Hessian is zero, so both are SOS-concave.
  for (const auto& pc : CertifySosConcave({u, u})) EXPECT_TRUE(pc.certified);
}

TEST(CertifyTest, SinglePlayerVerdictsAgree) {
  std::mt19937_64 rng(23);
  StructurePtr s = MakeStructure({{2, 2}});
  std::vector<Polynomial> cases = {NegSquaredNorm(s), ConvexQuarticPolynomial(),
                                   Var(s, 0) * Var(s, 2)};
  for (int k = 0; k < 4; ++k) cases.push_back(RandomSosConcave(s, rng));
  for (int k = 0; k < 4; ++k) {
    cases.push_back(testing::RandomPolynomial(s, 3, 6, rng));
  }
  for (const Polynomial& u : cases) {
    EXPECT_EQ(CertifySosConcave({u})[0].certified,
              CertifySosMonotone({u}).certified)
        << u.ToString();
  }
}

TEST(CertifyTest, JsonCarriesGramAndWitness) {
  StructurePtr s = MakeStructure({{2}});
  Json ok = CertifySosConcave({NegSquaredNorm(s)})[0].ToJson();
  EXPECT_TRUE(ok["certified"].get<bool>());
  EXPECT_EQ(ok["gram"].size(), ok["basis"].size());
  StructurePtr t = MakeStructure({{2, 2}});
  Json bad = CertifySosConcave({Var(t, 0) * Var(t, 2)})[0].ToJson();
  EXPECT_FALSE(bad["certified"].get<bool>());
  EXPECT_TRUE(bad.contains("witness"));
}

TEST(FirstLevelTest, ProjectionOfInteriorPoint) {
  StructurePtr s = MakeStructure({{3}});
  std::vector<double> c{0.2, 0.3, 0.5};
  Polynomial u(s);
  for (int v = 0; v < 3; ++v) {
    Polynomial d = Var(s, v) - Polynomial::Constant(s, c[v]);
    u -= d * d;
  }
  HierarchyResult r = SolveSosConcave(u);
  ASSERT_TRUE(r.exact);
  EXPECT_EQ(r.degrees.size(), 1);
  EXPECT_NEAR(*r.bound, 0.0, 1e-6);
  for (int v = 0; v < 3; ++v) EXPECT_NEAR(r.atoms[0].point[v], c[v], 1e-4);
}

TEST(FirstLevelTest, ConcaveQuadratic) {
  // Stationary point of -(x - 0.4)^2 - (y - 0.6)^2 - 0.2 x y, interior.
  const double x = 34.0 / 99, y = 56.0 / 99;
  const double value =
      -(x - 0.4) * (x - 0.4) - (y - 0.6) * (y - 0.6) - 0.2 * x * y;
  HierarchyResult r = SolveSosConcave(ConcaveQuadraticPolynomial());
  ASSERT_TRUE(r.exact);
  EXPECT_NEAR(*r.bound, value, 1e-6);
  EXPECT_NEAR(r.atoms[0].point[0], x, 1e-4);
  EXPECT_NEAR(r.atoms[0].point[2], y, 1e-4);
}

TEST(FirstLevelTest, RejectsUncertified) {
  EXPECT_THROW(SolveSosConcave(ConvexQuarticPolynomial()), NotCertifiedError);
}

TEST(FirstLevelTest, RandomInstancesMatchHigherOrder) {
  std::mt19937_64 rng(41);
  StructurePtr s = MakeStructure({{2, 3}});
  for (int k = 0; k < 5; ++k) {
    Polynomial u = RandomSosConcave(s, rng);
    HierarchyOptions o;
    o.compute_sos = true;
    HierarchyResult first = SolveSosConcave(u, o);
    ASSERT_TRUE(first.exact) << k;
    const DegreeRecord& rec = first.degrees[0];
    ASSERT_TRUE(rec.sos_value.has_value());
    EXPECT_LE(*rec.sos_value - rec.moment_value, 1e-6);
    EXPECT_GE(*rec.sos_value - rec.moment_value, -1e-6);
    EXPECT_LE(SimplexSet(s).MaxViolation(first.atoms[0].point), 1e-6);

    HierarchyOptions h;
    h.d_start = first.min_order + 1;
    h.d_max = first.min_order + 1;
    h.rank_reduction = false;
    HierarchyResult higher = SolvePop(u, SimplexSet(s), h);
    ASSERT_EQ(higher.degrees.size(), 1);
    EXPECT_NEAR(higher.degrees[0].moment_value, *first.bound, 1e-6) << k;
  }
}

}  // namespace
}  // namespace irsos
