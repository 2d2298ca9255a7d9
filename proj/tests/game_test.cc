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

#include "irsos/game.h"

#include <cmath>

#include "gtest/gtest.h"
#include "irsos/bridge.h"
#include "irsos/catalog.h"
#include "irsos/json_io.h"
#include "test_util.h"

namespace irsos {
namespace {

using Kind = GameValidationError::Kind;

Kind ValidationKind(const GameTree& tree) {
  try {
    Validate(tree);
  } catch (const GameValidationError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "tree unexpectedly valid";
  return Kind::kNotATree;
}

GameTree TwoLeafChance(double p, double q) {
  GameTree t;
  t.num_players = 1;
  Node c;
  c.id = "c";
  c.kind = NodeKind::kChance;
  c.actions = {{"a", 1, p}, {"b", 2, q}};
  Node l1{"l1", NodeKind::kTerminal, -1, "", {}, {1.0}};
  Node l2{"l2", NodeKind::kTerminal, -1, "", {}, {2.0}};
  t.nodes = {c, l1, l2};
  return t;
}

TEST(ValidateTest, ReferenceGamesAreValid) {
  EXPECT_NO_THROW(Validate(TaxiDriverGame()));
  EXPECT_NO_THROW(Validate(NoEquilibriumGame()));
  EXPECT_NO_THROW(Validate(MatchingPenniesGame()));
}

TEST(ValidateTest, Violations) {
  EXPECT_EQ(ValidationKind(TwoLeafChance(0.6, 0.6)),
            Kind::kBadChanceDistribution);
  EXPECT_NO_THROW(Validate(TwoLeafChance(0.25, 0.75)));

  GameTree inconsistent = TaxiDriverGame();
  int second = inconsistent.FindNode("second");
  inconsistent.nodes.push_back({"extra", NodeKind::kTerminal, -1, "", {}, {0}});
  inconsistent.nodes[second].actions.push_back(
      {"X", static_cast<int>(inconsistent.nodes.size()) - 1, 0});
  EXPECT_EQ(ValidationKind(inconsistent), Kind::kInconsistentInfoset);

  GameTree missing = TaxiDriverGame();
  missing.nodes[missing.FindNode("exit4")].payoffs.clear();
  EXPECT_EQ(ValidationKind(missing), Kind::kMissingPayoff);

  GameTree two_parents = TaxiDriverGame();
  two_parents.nodes[two_parents.FindNode("second")].actions[0].child =
      two_parents.FindNode("exit0");
  EXPECT_EQ(ValidationKind(two_parents), Kind::kNotATree);
}

TEST(ClassifyRecallTest, Examples) {
  RecallClass taxi = ClassifyRecall(TaxiDriverGame());
  EXPECT_EQ(taxi.type, RecallType::kAbsentminded);
  ASSERT_TRUE(taxi.witness.has_value());
  EXPECT_EQ(taxi.witness->first, "root");
  EXPECT_EQ(taxi.witness->second, "second");

  RecallClass fig = ClassifyRecall(NoEquilibriumGame());
  EXPECT_EQ(fig.type, RecallType::kNonAbsentminded);
  EXPECT_TRUE(fig.witness.has_value());

  GameTree single = TwoLeafChance(0.5, 0.5);
  single.nodes[0].kind = NodeKind::kDecision;
  single.nodes[0].player = 0;
  single.nodes[0].infoset = "I";
  RecallClass pr = ClassifyRecall(single);
  EXPECT_EQ(pr.type, RecallType::kPerfectRecall);
  EXPECT_FALSE(pr.witness.has_value());
  EXPECT_EQ(ClassifyRecall(MatchingPenniesGame()).type,
            RecallType::kPerfectRecall);
}

TEST(ClassifyRecallTest, SingletonRefinementHasPerfectRecall) {
  for (GameTree tree : {TaxiDriverGame(), NoEquilibriumGame()}) {
    for (Node& n : tree.nodes) {
      if (n.kind == NodeKind::kDecision) n.infoset = "own_" + n.id;
    }
    EXPECT_EQ(ClassifyRecall(tree).type, RecallType::kPerfectRecall);
  }
}

TEST(HistoryTest, PathsAndDepth) {
  GameTree taxi = TaxiDriverGame();
  EXPECT_TRUE(History(taxi, taxi.root).empty());
  std::vector<HistoryStep> h = History(taxi, taxi.FindNode("exit4"));
  ASSERT_EQ(h.size(), 2);
  EXPECT_EQ(taxi.nodes[h[0].node].id, "root");
  EXPECT_EQ(taxi.nodes[h[0].node].actions[h[0].edge].label, "L");
  EXPECT_EQ(taxi.nodes[h[1].node].actions[h[1].edge].label, "R");
  EXPECT_THROW(History(taxi, 99), std::out_of_range);
}

TEST(ExpectedUtilityTest, TaxiDriver) {
  GameTree taxi = TaxiDriverGame();
  StructurePtr s = CanonicalStructure(taxi);
  for (double x : {0.0, 0.3, 2.0 / 3.0, 1.0}) {
    BehavioralStrategy mu(s, {x, 1 - x});
    EXPECT_NEAR(ExpectedUtility(taxi, mu, 0), x * x + 4 * x * (1 - x), 1e-15);
  }
}

TEST(ExpectedUtilityTest, DeterministicStrategyReachesLeaf) {
  GameTree game = NoEquilibriumGame();
  StructurePtr s = CanonicalStructure(game);
  // Blocks: A, B (player 1); X, Y, Z (player 2). R, L, then r at X.
  std::vector<double> v = {0, 1, 1, 0, 0, 1, 1, 0, 1, 0};
  EXPECT_DOUBLE_EQ(ExpectedUtility(game, BehavioralStrategy(s, v), 0), -5.0);
  std::vector<double> w = {1, 0, 1, 0, 0, 1, 1, 0, 1, 0};
  EXPECT_DOUBLE_EQ(ExpectedUtility(game, BehavioralStrategy(s, w), 0), -1.0);
}

TEST(ExpectedUtilityTest, ReachIsDistributionAndMatchesPolynomial) {
  std::mt19937_64 rng(17);
  for (const GameTree& game :
       {TaxiDriverGame(), NoEquilibriumGame(), MatchingPenniesGame()}) {
    StructurePtr s = CanonicalStructure(game);
    std::vector<Polynomial> u = GameToPolynomials(game);
    for (int k = 0; k < 50; ++k) {
      std::vector<double> x = testing::RandomStrategy(*s, rng);
      BehavioralStrategy mu(s, x);
      double total = 0;
      for (double r : ReachProbabilities(game, mu)) total += r;
      EXPECT_NEAR(total, 1.0, 1e-9);
      for (int i = 0; i < game.num_players; ++i) {
        EXPECT_NEAR(ExpectedUtility(game, mu, i), u[i].Evaluate(x), 1e-10);
      }
    }
  }
}

TEST(ExpectedUtilityTest, MultiAffineWithoutAbsentmindedness) {
  std::mt19937_64 rng(19);
  GameTree game = NoEquilibriumGame();
  StructurePtr s = CanonicalStructure(game);
  std::uniform_real_distribution<double> unif(0, 1);
  for (int k = 0; k < 20; ++k) {
    std::vector<double> x = testing::RandomStrategy(*s, rng);
    std::vector<double> b1 = testing::RandomStrategy(*s, rng);
    std::vector<double> b2 = testing::RandomStrategy(*s, rng);
    double lambda = unif(rng);
    for (const auto& b : s->blocks()) {
      std::vector<double> mix = x, p1 = x, p2 = x;
      for (int a = 0; a < b.size; ++a) {
        int v = b.offset + a;
        p1[v] = b1[v];
        p2[v] = b2[v];
        mix[v] = lambda * b1[v] + (1 - lambda) * b2[v];
      }
      double lhs = ExpectedUtility(game, BehavioralStrategy(s, mix), 0);
      double rhs = lambda * ExpectedUtility(game, BehavioralStrategy(s, p1), 0) +
                   (1 - lambda) *
                       ExpectedUtility(game, BehavioralStrategy(s, p2), 0);
      EXPECT_NEAR(lhs, rhs, 1e-9);
    }
  }
}

TEST(BehavioralStrategyTest, ClampsTinyViolations) {
  StructurePtr s = MakeStructure({{2}});
  BehavioralStrategy ok(s, {1 + 5e-10, -5e-10});
  EXPECT_EQ(ok.Clamped()[1], 0.0);
  EXPECT_THROW(BehavioralStrategy(s, {1.1, -0.1}), std::invalid_argument);
  EXPECT_THROW(BehavioralStrategy(s, {1.0}), StructureMismatchError);
  GameTree taxi = TaxiDriverGame();
  EXPECT_THROW(ExpectedUtility(taxi, BehavioralStrategy::Uniform(
                                         MakeStructure({{3}})), 0),
               StructureMismatchError);
}

TEST(GameJsonTest, RoundTrip) {
  GameTree game = NoEquilibriumGame();
  Json j = GameToJson(game);
  GameTree back = GameFromJson(j);
  EXPECT_EQ(GameToJson(back), j);
  EXPECT_EQ(*CanonicalStructure(back), *CanonicalStructure(game));
  EXPECT_THROW(GameFromJson(Json::parse(R"({"players": 1})")), ParseError);
}

}  // namespace
}  // namespace irsos
