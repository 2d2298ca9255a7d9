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

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace irsos {

int GameTree::FindNode(const std::string& id) const {
  for (int k = 0; k < nodes.size(); ++k) {
    if (nodes[k].id == id) return k;
  }
  return -1;
}

GameValidationError::GameValidationError(Kind kind, const std::string& node,
                                         const std::string& what)
    : std::runtime_error(KindName(kind) + " at node '" + node + "': " + what),
      kind_(kind),
      node_(node) {}

std::string KindName(GameValidationError::Kind kind) {
  switch (kind) {
    case GameValidationError::Kind::kNotATree:
      return "NotATree";
    case GameValidationError::Kind::kBadChanceDistribution:
      return "BadChanceDistribution";
    case GameValidationError::Kind::kInconsistentInfoset:
      return "InconsistentInfoset";
    case GameValidationError::Kind::kMissingPayoff:
      return "MissingPayoff";
  }
  return "Unknown";
}

namespace {

using Kind = GameValidationError::Kind;

std::string NodeName(const GameTree& tree, int k) {
  if (k < 0 || k >= tree.nodes.size()) return std::to_string(k);
  return tree.nodes[k].id.empty() ? std::to_string(k) : tree.nodes[k].id;
}

std::set<std::string> LabelSet(const Node& node) {
  std::set<std::string> s;
  for (const Edge& e : node.actions) s.insert(e.label);
  return s;
}

}  // namespace

void Validate(const GameTree& tree) {
  const int n = tree.nodes.size();
  if (tree.num_players < 1) {
    throw GameValidationError(Kind::kNotATree, "", "need at least one player");
  }
  if (tree.root < 0 || tree.root >= n) {
    throw GameValidationError(Kind::kNotATree, "", "root out of range");
  }
  std::vector<int> parent_count(n, 0);
  for (int k = 0; k < n; ++k) {
    for (const Edge& e : tree.nodes[k].actions) {
      if (e.child < 0 || e.child >= n) {
        throw GameValidationError(Kind::kNotATree, NodeName(tree, k),
                                  "edge to unknown child");
      }
      ++parent_count[e.child];
    }
  }
  for (int k = 0; k < n; ++k) {
    int expected = k == tree.root ? 0 : 1;
    if (parent_count[k] != expected) {
      throw GameValidationError(
          Kind::kNotATree, NodeName(tree, k),
          k == tree.root ? "root has a parent"
                         : "node has " + std::to_string(parent_count[k]) +
                               " parents");
    }
  }
  // With one parent per non-root node, reachability rules out cycles.
  std::vector<bool> seen(n, false);
  std::vector<int> stack = {tree.root};
  int reached = 0;
  while (!stack.empty()) {
    int k = stack.back();
    stack.pop_back();
    if (seen[k]) {
      throw GameValidationError(Kind::kNotATree, NodeName(tree, k), "cycle");
    }
    seen[k] = true;
    ++reached;
    for (const Edge& e : tree.nodes[k].actions) stack.push_back(e.child);
  }
  if (reached != n) {
    for (int k = 0; k < n; ++k) {
      if (!seen[k]) {
        throw GameValidationError(Kind::kNotATree, NodeName(tree, k),
                                  "node unreachable from the root");
      }
    }
  }

  std::map<std::string, int> infoset_first;
  for (int k = 0; k < n; ++k) {
    const Node& node = tree.nodes[k];
    const std::string name = NodeName(tree, k);
    switch (node.kind) {
      case NodeKind::kTerminal:
        if (!node.actions.empty()) {
          throw GameValidationError(Kind::kNotATree, name,
                                    "terminal node with children");
        }
        if (node.payoffs.size() != tree.num_players) {
          throw GameValidationError(Kind::kMissingPayoff, name,
                                    "payoff vector must have one entry per "
                                    "player");
        }
        break;
      case NodeKind::kChance: {
        if (!node.payoffs.empty()) {
          throw GameValidationError(Kind::kMissingPayoff, name,
                                    "payoffs on a non-terminal node");
        }
        if (node.actions.empty()) {
          throw GameValidationError(Kind::kBadChanceDistribution, name,
                                    "chance node without outcomes");
        }
        double sum = 0;
        for (const Edge& e : node.actions) {
          if (!(e.prob >= 0.0)) {
            throw GameValidationError(Kind::kBadChanceDistribution, name,
                                      "negative probability");
          }
          sum += e.prob;
        }
        if (std::abs(sum - 1.0) > 1e-12) {
          throw GameValidationError(Kind::kBadChanceDistribution, name,
                                    "probabilities sum to " +
                                        std::to_string(sum));
        }
        break;
      }
      case NodeKind::kDecision: {
        if (!node.payoffs.empty()) {
          throw GameValidationError(Kind::kMissingPayoff, name,
                                    "payoffs on a non-terminal node");
        }
        if (node.player < 0 || node.player >= tree.num_players) {
          throw GameValidationError(Kind::kInconsistentInfoset, name,
                                    "player label out of range");
        }
        if (node.infoset.empty()) {
          throw GameValidationError(Kind::kInconsistentInfoset, name,
                                    "decision node without infoset");
        }
        if (node.actions.empty()) {
          throw GameValidationError(Kind::kNotATree, name,
                                    "decision node without actions");
        }
        if (LabelSet(node).size() != node.actions.size()) {
          throw GameValidationError(Kind::kInconsistentInfoset, name,
                                    "duplicate action labels");
        }
        auto [it, inserted] = infoset_first.try_emplace(node.infoset, k);
        if (!inserted) {
          const Node& first = tree.nodes[it->second];
          if (first.player != node.player) {
            throw GameValidationError(Kind::kInconsistentInfoset, name,
                                      "infoset '" + node.infoset +
                                          "' spans several players");
          }
          if (LabelSet(first) != LabelSet(node)) {
            throw GameValidationError(Kind::kInconsistentInfoset, name,
                                      "infoset '" + node.infoset +
                                          "' has differing action sets");
          }
        }
        break;
      }
    }
  }
  std::set<std::string> declared;
  for (const InfosetDecl& d : tree.infosets) {
    if (!declared.insert(d.id).second) {
      throw GameValidationError(Kind::kInconsistentInfoset, "",
                                "infoset '" + d.id + "' declared twice");
    }
    if (d.player < 0 || d.player >= tree.num_players || d.labels.empty()) {
      throw GameValidationError(Kind::kInconsistentInfoset, "",
                                "bad declaration of infoset '" + d.id + "'");
    }
    std::set<std::string> labels(d.labels.begin(), d.labels.end());
    if (labels.size() != d.labels.size()) {
      throw GameValidationError(Kind::kInconsistentInfoset, "",
                                "duplicate labels in infoset '" + d.id + "'");
    }
    auto it = infoset_first.find(d.id);
    if (it != infoset_first.end()) {
      const Node& node = tree.nodes[it->second];
      if (node.player != d.player || LabelSet(node) != labels) {
        throw GameValidationError(Kind::kInconsistentInfoset,
                                  NodeName(tree, it->second),
                                  "node disagrees with the declaration of '" +
                                      d.id + "'");
      }
    }
  }
}

GameIndex::GameIndex(const GameTree& tree) : tree_(&tree) {
  Validate(tree);
  const int n = tree.nodes.size();
  parent_.assign(n, -1);
  parent_edge_.assign(n, -1);
  block_.assign(n, -1);
  edge_var_.assign(n, {});
  std::vector<int> stack = {tree.root};
  while (!stack.empty()) {
    int k = stack.back();
    stack.pop_back();
    preorder_.push_back(k);
    const auto& acts = tree.nodes[k].actions;
    for (int e = acts.size() - 1; e >= 0; --e) {
      parent_[acts[e].child] = k;
      parent_edge_[acts[e].child] = e;
      stack.push_back(acts[e].child);
    }
  }

  // Infosets per player: declared first, then first preorder appearance.
  struct Info {
    std::string id;
    std::vector<std::string> labels;
  };
  std::vector<std::vector<Info>> per_player(tree.num_players);
  std::map<std::string, std::pair<int, int>> where;  // id -> (player, index)
  for (const InfosetDecl& d : tree.infosets) {
    where[d.id] = {d.player, static_cast<int>(per_player[d.player].size())};
    per_player[d.player].push_back({d.id, d.labels});
  }
  for (int k : preorder_) {
    const Node& node = tree.nodes[k];
    if (node.kind != NodeKind::kDecision || where.count(node.infoset)) continue;
    std::vector<std::string> labels;
    for (const Edge& e : node.actions) labels.push_back(e.label);
    where[node.infoset] = {node.player,
                           static_cast<int>(per_player[node.player].size())};
    per_player[node.player].push_back({node.infoset, labels});
  }
  std::vector<std::vector<int>> actions(tree.num_players);
  for (int i = 0; i < tree.num_players; ++i) {
    for (const Info& info : per_player[i]) {
      actions[i].push_back(info.labels.size());
    }
  }
  structure_ = MakeStructure(actions);
  for (int k = 0; k < n; ++k) {
    const Node& node = tree.nodes[k];
    if (node.kind != NodeKind::kDecision) continue;
    auto [player, j] = where[node.infoset];
    block_[k] = structure_->BlockIndex(player, j);
    const auto& labels = per_player[player][j].labels;
    for (const Edge& e : node.actions) {
      int a = std::find(labels.begin(), labels.end(), e.label) - labels.begin();
      edge_var_[k].push_back(structure_->VariableIndex(player, j, a));
    }
  }
}

int GameIndex::depth(int node) const {
  int d = 0;
  for (int k = parent_.at(node); k >= 0; k = parent_[k]) ++d;
  return d;
}

bool GameIndex::IsAncestor(int a, int b) const {
  for (int k = parent_.at(b); k >= 0; k = parent_[k]) {
    if (k == a) return true;
  }
  return false;
}

StructurePtr CanonicalStructure(const GameTree& tree) {
  return GameIndex(tree).structure();
}

std::string RecallTypeName(RecallType t) {
  switch (t) {
    case RecallType::kPerfectRecall:
      return "PerfectRecall";
    case RecallType::kNonAbsentminded:
      return "NonAbsentminded";
    case RecallType::kAbsentminded:
      return "Absentminded";
  }
  return "Unknown";
}

namespace {

RecallClass Classify(const GameTree& tree, int only_player) {
  GameIndex index(tree);
  auto relevant = [&](int k) {
    const Node& node = tree.nodes[k];
    return node.kind == NodeKind::kDecision &&
           (only_player < 0 || node.player == only_player);
  };
  // Absentmindedness: an ancestor in the same infoset.
  for (int k : index.preorder()) {
    if (!relevant(k)) continue;
    std::vector<int> chain;
    for (int a = index.parent(k); a >= 0; a = index.parent(a)) chain.push_back(a);
    for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
      const Node& anc = tree.nodes[*it];
      if (anc.kind == NodeKind::kDecision &&
          anc.infoset == tree.nodes[k].infoset) {
        return {RecallType::kAbsentminded,
                std::make_pair(NodeName(tree, *it), NodeName(tree, k))};
      }
    }
  }
  // Own (infoset, action) history must agree within an infoset.
  std::map<std::string, std::pair<int, std::vector<std::string>>> seen;
  for (int k : index.preorder()) {
    if (!relevant(k)) continue;
    const Node& node = tree.nodes[k];
    std::vector<std::string> own;
    for (const HistoryStep& step : History(tree, k)) {
      const Node& h = tree.nodes[step.node];
      if (h.kind == NodeKind::kDecision && h.player == node.player) {
        own.push_back(h.infoset + "/" + h.actions[step.edge].label);
      }
    }
    auto [it, inserted] = seen.try_emplace(node.infoset, k, own);
    if (!inserted && it->second.second != own) {
      return {RecallType::kNonAbsentminded,
              std::make_pair(NodeName(tree, it->second.first),
                             NodeName(tree, k))};
    }
  }
  return {RecallType::kPerfectRecall, std::nullopt};
}

}  // namespace

RecallClass ClassifyRecall(const GameTree& tree) { return Classify(tree, -1); }

RecallClass ClassifyRecall(const GameTree& tree, int player) {
  if (player < 0 || player >= tree.num_players) {
    throw std::out_of_range("invalid player");
  }
  return Classify(tree, player);
}

std::vector<HistoryStep> History(const GameTree& tree, int node) {
  if (node < 0 || node >= tree.nodes.size()) {
    throw std::out_of_range("unknown node");
  }
  // Parent lookup without full validation so History works on any tree.
  std::vector<int> parent(tree.nodes.size(), -1), edge(tree.nodes.size(), -1);
  for (int k = 0; k < tree.nodes.size(); ++k) {
    for (int e = 0; e < tree.nodes[k].actions.size(); ++e) {
      int c = tree.nodes[k].actions[e].child;
      if (c >= 0 && c < tree.nodes.size()) {
        parent[c] = k;
        edge[c] = e;
      }
    }
  }
  std::vector<HistoryStep> path;
  for (int k = node; k != tree.root; k = parent[k]) {
    if (parent[k] < 0 || path.size() > tree.nodes.size()) {
      throw std::out_of_range("node is not connected to the root");
    }
    path.push_back({parent[k], edge[k]});
  }
  std::reverse(path.begin(), path.end());
  return path;
}

bool IsStrategy(const BlockStructure& s, std::span<const double> values,
                double tol) {
  if (values.size() != s.num_variables()) return false;
  for (const BlockStructure::Block& b : s.blocks()) {
    double sum = 0;
    for (int a = 0; a < b.size; ++a) {
      double v = values[b.offset + a];
      if (!(v >= -tol)) return false;
      sum += v;
    }
    if (std::abs(sum - 1.0) > tol) return false;
  }
  return true;
}

BehavioralStrategy::BehavioralStrategy(StructurePtr structure,
                                       std::vector<double> values)
    : structure_(std::move(structure)), values_(std::move(values)) {
  if (!structure_ || values_.size() != structure_->num_variables()) {
    throw StructureMismatchError("strategy length does not match structure");
  }
  if (!IsStrategy(*structure_, values_, 1e-9)) {
    throw std::invalid_argument("strategy blocks are not distributions");
  }
}

BehavioralStrategy BehavioralStrategy::Uniform(StructurePtr structure) {
  std::vector<double> v(structure->num_variables());
  for (const auto& b : structure->blocks()) {
    for (int a = 0; a < b.size; ++a) v[b.offset + a] = 1.0 / b.size;
  }
  return BehavioralStrategy(std::move(structure), std::move(v));
}

std::vector<double> BehavioralStrategy::Clamped() const {
  std::vector<double> v = values_;
  for (double& x : v) x = std::max(x, 0.0);
  return v;
}

std::vector<double> ReachProbabilities(const GameTree& tree,
                                       const BehavioralStrategy& mu) {
  GameIndex index(tree);
  if (!(*index.structure() == *mu.structure())) {
    throw StructureMismatchError("strategy does not match the game");
  }
  std::vector<double> v = mu.Clamped();
  std::vector<double> reach(tree.nodes.size(), 0.0);
  std::vector<double> out(tree.nodes.size(), 0.0);
  reach[tree.root] = 1.0;
  for (int k : index.preorder()) {
    const Node& node = tree.nodes[k];
    for (int e = 0; e < node.actions.size(); ++e) {
      double p = node.kind == NodeKind::kChance ? node.actions[e].prob
                                                : v[index.variable_of(k, e)];
      reach[node.actions[e].child] = reach[k] * p;
    }
    if (node.kind == NodeKind::kTerminal) out[k] = reach[k];
  }
  return out;
}

std::vector<double> ExpectedUtilities(const GameTree& tree,
                                      const BehavioralStrategy& mu) {
  std::vector<double> reach = ReachProbabilities(tree, mu);
  std::vector<double> u(tree.num_players, 0.0);
  for (int k = 0; k < tree.nodes.size(); ++k) {
    if (tree.nodes[k].kind != NodeKind::kTerminal) continue;
    for (int i = 0; i < tree.num_players; ++i) {
      u[i] += reach[k] * tree.nodes[k].payoffs[i];
    }
  }
  return u;
}

double ExpectedUtility(const GameTree& tree, const BehavioralStrategy& mu,
                       int player) {
  if (player < 0 || player >= tree.num_players) {
    throw std::out_of_range("invalid player");
  }
  return ExpectedUtilities(tree, mu)[player];
}

}  // namespace irsos
