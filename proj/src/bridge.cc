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

#include "irsos/bridge.h"

#include <string>

namespace irsos {

Polynomial GameToPolynomial(const GameTree& tree, int player) {
  GameIndex index(tree);
  if (player < 0 || player >= tree.num_players) {
    throw std::out_of_range("invalid player");
  }
  Polynomial p(index.structure());
  for (int k = 0; k < tree.nodes.size(); ++k) {
    const Node& leaf = tree.nodes[k];
    if (leaf.kind != NodeKind::kTerminal || leaf.payoffs[player] == 0.0) {
      continue;
    }
    double coeff = leaf.payoffs[player];
    std::vector<std::pair<int, int>> vars;
    for (int c = k; c != tree.root; c = index.parent(c)) {
      int h = index.parent(c);
      int e = index.parent_edge(c);
      if (tree.nodes[h].kind == NodeKind::kChance) {
        coeff *= tree.nodes[h].actions[e].prob;
      } else {
        vars.push_back({index.variable_of(h, e), 1});
      }
    }
    p.AddTerm(MultiIndex(std::move(vars)), coeff);
  }
  return p;
}

std::vector<Polynomial> GameToPolynomials(const GameTree& tree) {
  std::vector<Polynomial> out;
  for (int i = 0; i < tree.num_players; ++i) {
    out.push_back(GameToPolynomial(tree, i));
  }
  return out;
}

namespace {

std::string ActionLabel(int a) { return "a" + std::to_string(a + 1); }
std::string InfosetId(int j) { return "I" + std::to_string(j + 1); }

}  // namespace

GameTree PolynomialToGame(const Polynomial& p) {
  if (!p.structure() || p.structure()->num_players() != 1) {
    throw StructureMismatchError(
        "polynomial to game needs a single-player block structure");
  }
  const BlockStructure& s = *p.structure();
  GameTree tree;
  tree.num_players = 1;
  for (int j = 0; j < s.num_infosets(0); ++j) {
    InfosetDecl decl{InfosetId(j), 0, {}};
    for (int a = 0; a < s.num_actions(0, j); ++a) {
      decl.labels.push_back(ActionLabel(a));
    }
    tree.infosets.push_back(decl);
  }
  auto add_node = [&tree](Node node) {
    node.id = "n" + std::to_string(tree.nodes.size());
    tree.nodes.push_back(std::move(node));
    return static_cast<int>(tree.nodes.size()) - 1;
  };
  auto terminal = [](double v) {
    Node n;
    n.kind = NodeKind::kTerminal;
    n.payoffs = {v};
    return n;
  };

  Polynomial q = p.Cleaned(0.0);
  const int support = q.num_terms();
  if (support == 0) {
    tree.root = add_node(terminal(0.0));
    return tree;
  }
  int root = -1;
  if (support > 1) {
    Node chance;
    chance.kind = NodeKind::kChance;
    root = add_node(chance);
  }
  int term_index = 0;
  for (const auto& [mono, coeff] : q.terms()) {
    const double payoff = coeff * support;
    std::vector<int> seq = mono.Expanded();
    // Builds the chain top-down; `attach` wires the next node to its parent.
    int parent = root;
    int parent_slot = -1;
    auto attach = [&](int child) {
      if (parent < 0) {
        tree.root = child;
      } else if (tree.nodes[parent].kind == NodeKind::kChance) {
        tree.nodes[parent].actions.push_back(
            {"m" + std::to_string(term_index + 1), child, 1.0 / support});
      } else {
        tree.nodes[parent].actions[parent_slot].child = child;
      }
    };
    if (seq.empty()) {
      attach(add_node(terminal(payoff)));
    }
    for (int k = 0; k < seq.size(); ++k) {
      const BlockStructure::Variable& v = s.variable(seq[k]);
      Node dec;
      dec.kind = NodeKind::kDecision;
      dec.player = 0;
      dec.infoset = InfosetId(v.infoset);
      int h = add_node(dec);
      attach(h);
      int m = s.num_actions(0, v.infoset);
      for (int a = 0; a < m; ++a) {
        int child = -1;
        if (a != v.action) {
          child = add_node(terminal(0.0));
        } else if (k + 1 == seq.size()) {
          child = add_node(terminal(payoff));
        }
        tree.nodes[h].actions.push_back({ActionLabel(a), child, 0.0});
      }
      parent = h;
      parent_slot = v.action;
    }
    ++term_index;
  }
  // Uniform probabilities must sum to one exactly for validation.
  if (support > 1) {
    double sum = 0;
    auto& edges = tree.nodes[root].actions;
    for (int e = 0; e + 1 < edges.size(); ++e) sum += edges[e].prob;
    edges.back().prob = 1.0 - sum;
  }
  return tree;
}

}  // namespace irsos
