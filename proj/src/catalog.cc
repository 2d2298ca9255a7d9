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

#include "irsos/catalog.h"

#include <map>
#include <string>

namespace irsos {

namespace {

// Small helper for writing trees by node id.
class TreeBuilder {
 public:
  explicit TreeBuilder(int players) { tree_.num_players = players; }

  void Decision(const std::string& id, int player, const std::string& infoset,
                std::vector<std::pair<std::string, std::string>> edges) {
    Node n;
    n.id = id;
    n.kind = NodeKind::kDecision;
    n.player = player;
    n.infoset = infoset;
    Add(n, edges, {});
  }
  void Chance(const std::string& id,
              std::vector<std::pair<std::string, std::string>> edges,
              std::vector<double> probs) {
    Node n;
    n.id = id;
    n.kind = NodeKind::kChance;
    Add(n, edges, probs);
  }
  void Terminal(const std::string& id, std::vector<double> payoffs) {
    Node n;
    n.id = id;
    n.kind = NodeKind::kTerminal;
    n.payoffs = std::move(payoffs);
    Add(n, {}, {});
  }
  GameTree Build(const std::string& root) {
    for (auto& [node, edge, child] : pending_) {
      tree_.nodes[node].actions[edge].child = index_.at(child);
    }
    tree_.root = index_.at(root);
    Validate(tree_);
    return tree_;
  }

 private:
  void Add(Node n, const std::vector<std::pair<std::string, std::string>>& e,
           const std::vector<double>& probs) {
    int k = tree_.nodes.size();
    index_[n.id] = k;
    for (int a = 0; a < e.size(); ++a) {
      n.actions.push_back({e[a].first, -1, probs.empty() ? 0.0 : probs[a]});
      pending_.push_back({k, a, e[a].second});
    }
    tree_.nodes.push_back(std::move(n));
  }

  struct Pending {
    int node;
    int edge;
    std::string child;
  };
  GameTree tree_;
  std::map<std::string, int> index_;
  std::vector<Pending> pending_;
};

Polynomial FromTerms(StructurePtr s,
                     std::vector<std::pair<double, std::vector<int>>> terms) {
  Polynomial p(s);
  for (auto& [c, vars] : terms) {
    std::vector<std::pair<int, int>> m;
    for (int v : vars) m.push_back({v, 1});
    p.AddTerm(MultiIndex(m), c);
  }
  return p;
}

}  // namespace

GameTree TaxiDriverGame() {
  TreeBuilder b(1);
  b.Decision("root", 0, "I", {{"L", "second"}, {"R", "exit0"}});
  b.Decision("second", 0, "I", {{"L", "exit1"}, {"R", "exit4"}});
  b.Terminal("exit0", {0});
  b.Terminal("exit1", {1});
  b.Terminal("exit4", {4});
  return b.Build("root");
}

GameTree NoEquilibriumGame() {
  TreeBuilder b(2);
  b.Decision("root", 0, "A", {{"L", "pL"}, {"R", "pR"}});
  b.Decision("pL", 0, "B", {{"L", "LL"}, {"R", "LR"}});
  b.Decision("pR", 0, "B", {{"L", "RL"}, {"R", "RR"}});
  b.Decision("LL", 1, "X", {{"l", "LLl"}, {"r", "LLr"}});
  b.Decision("LR", 1, "Y", {{"l", "LRl"}, {"r", "LRr"}});
  b.Decision("RL", 1, "Z", {{"l", "RLl"}, {"r", "RLr"}});
  b.Decision("RR", 1, "X", {{"l", "RRl"}, {"r", "RRr"}});
  b.Terminal("LLl", {1, -1});
  b.Terminal("LLr", {-1, 1});
  b.Terminal("LRl", {-5, 5});
  b.Terminal("LRr", {-5, 5});
  b.Terminal("RLl", {-5, 5});
  b.Terminal("RLr", {-5, 5});
  b.Terminal("RRl", {-1, 1});
  b.Terminal("RRr", {1, -1});
  return b.Build("root");
}

GameTree MatchingPenniesGame() {
  TreeBuilder b(2);
  b.Decision("root", 0, "P1", {{"H", "h"}, {"T", "t"}});
  b.Decision("h", 1, "P2", {{"H", "hh"}, {"T", "ht"}});
  b.Decision("t", 1, "P2", {{"H", "th"}, {"T", "tt"}});
  b.Terminal("hh", {1, -1});
  b.Terminal("ht", {-1, 1});
  b.Terminal("th", {-1, 1});
  b.Terminal("tt", {1, -1});
  return b.Build("root");
}

Polynomial FourTermPolynomial() {
  StructurePtr s = MakeStructure({{2, 2}});
  Polynomial p = FromTerms(s, {{2, {}}, {3, {0, 2}}, {-5, {1, 3}}});
  p.AddTerm(MultiIndex::Var(2, 2), 4);
  return p;
}

Polynomial VertexOptimumPolynomial() {
  // x = (0, 1), y = (2, 3), z = (4, 5).
  StructurePtr s = MakeStructure({{2, 2, 2}});
  return FromTerms(s, {{-4, {4}},
                       {1, {1, 3}},
                       {1, {1, 3, 4}},
                       {-3, {1, 2, 5}},
                       {-3, {1, 2, 4}}});
}

Polynomial MixedOptimumPolynomial() {
  // x = (0, 1, 2), y = (3, 4, 5).
  StructurePtr s = MakeStructure({{3, 3}});
  return FromTerms(s, {{4, {0, 2}},
                       {2, {1, 2, 5}},
                       {-5, {0, 1, 5}},
                       {1, {0, 1, 3}},
                       {-4, {1, 2, 4, 5}}});
}

Polynomial ConvexQuarticPolynomial() {
  // x = (0, 1), y = (2, 3).
  StructurePtr s = MakeStructure({{2, 2}});
  Polynomial p(s);
  auto add = [&p](double c, std::vector<std::pair<int, int>> m) {
    p.AddTerm(MultiIndex(m), c);
  };
  add(9.37, {{3, 4}});
  add(9.37, {{2, 2}, {3, 2}});
  add(9.37, {{2, 4}});
  add(1.17, {{1, 2}, {3, 2}});
  add(-0.09, {{1, 2}, {2, 1}, {3, 1}});
  add(0.94, {{1, 2}, {2, 2}});
  add(9.37, {{1, 4}});
  add(-0.78, {{0, 1}, {1, 1}, {3, 2}});
  add(-0.52, {{0, 1}, {1, 1}, {2, 1}, {3, 1}});
  add(0.55, {{0, 1}, {1, 1}, {2, 2}});
  add(0.13, {{0, 2}, {3, 2}});
  add(0.16, {{0, 2}, {2, 1}, {3, 1}});
  add(0.13, {{0, 2}, {2, 2}});
  add(9.37, {{0, 2}, {1, 2}});
  add(9.37, {{0, 4}});
  return p;
}

Polynomial ConcaveQuadraticPolynomial() {
  StructurePtr s = MakeStructure({{2, 2}});
  Polynomial x = Polynomial::Variable(s, 0);
  Polynomial y = Polynomial::Variable(s, 2);
  Polynomial dx = x - Polynomial::Constant(s, 0.4);
  Polynomial dy = y - Polynomial::Constant(s, 0.6);
  return -1.0 * (dx * dx) - dy * dy - 0.2 * (x * y);
}

}  // namespace irsos
