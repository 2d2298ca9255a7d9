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

#ifndef IRSOS_GAME_H_
#define IRSOS_GAME_H_

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "irsos/polynomial.h"

namespace irsos {

enum class NodeKind { kDecision, kChance, kTerminal };

struct Edge {
  std::string label;
  int child = -1;
  double prob = 0.0;  // chance edges only
};

struct Node {
  std::string id;
  NodeKind kind = NodeKind::kTerminal;
  int player = -1;        // 0-based; decision nodes only
  std::string infoset;    // decision nodes only
  std::vector<Edge> actions;
  std::vector<double> payoffs;  // terminal nodes only
};

// Optional explicit declaration of an infoset. Declared infosets are numbered
// first (in declaration order, per player) and may have no nodes at all.
struct InfosetDecl {
  std::string id;
  int player = 0;
  std::vector<std::string> labels;
};

// Extensive-form game with imperfect recall. Plain data; see Validate().
struct GameTree {
  int num_players = 1;
  std::vector<Node> nodes;
  int root = 0;
  std::vector<InfosetDecl> infosets;

  int FindNode(const std::string& id) const;  // -1 if absent
};

class GameValidationError : public std::runtime_error {
 public:
  enum class Kind {
    kNotATree,
    kBadChanceDistribution,
    kInconsistentInfoset,
    kMissingPayoff
  };
  GameValidationError(Kind kind, const std::string& node,
                      const std::string& what);
  Kind kind() const { return kind_; }
  const std::string& node() const { return node_; }

 private:
  Kind kind_;
  std::string node_;
};

std::string KindName(GameValidationError::Kind kind);

// Throws GameValidationError describing the first violated invariant.
void Validate(const GameTree& tree);

// Derived indexes of a validated tree: parents, preorder, the canonical
// block structure and the (block, action) of every decision edge.
class GameIndex {
 public:
  explicit GameIndex(const GameTree& tree);  // validates

  const GameTree& tree() const { return *tree_; }
  const StructurePtr& structure() const { return structure_; }
  int parent(int node) const { return parent_[node]; }
  int parent_edge(int node) const { return parent_edge_[node]; }
  const std::vector<int>& preorder() const { return preorder_; }
  // Global block index of a decision node; -1 otherwise.
  int block_of(int node) const { return block_[node]; }
  // Variable index of edge `e` at decision node `node`.
  int variable_of(int node, int e) const { return edge_var_[node][e]; }
  int depth(int node) const;
  bool IsAncestor(int a, int b) const;  // a strict ancestor of b

 private:
  const GameTree* tree_;
  StructurePtr structure_;
  std::vector<int> parent_;
  std::vector<int> parent_edge_;
  std::vector<int> preorder_;
  std::vector<int> block_;
  std::vector<std::vector<int>> edge_var_;
};

StructurePtr CanonicalStructure(const GameTree& tree);

enum class RecallType { kPerfectRecall, kNonAbsentminded, kAbsentminded };

struct RecallClass {
  RecallType type = RecallType::kPerfectRecall;
  // Node ids; present iff type != kPerfectRecall.
  std::optional<std::pair<std::string, std::string>> witness;
};

std::string RecallTypeName(RecallType t);

// Whole-game classification (worst over players).
RecallClass ClassifyRecall(const GameTree& tree);
// Classification restricted to one player's infosets.
RecallClass ClassifyRecall(const GameTree& tree, int player);

struct HistoryStep {
  int node;
  int edge;
};

// Root-to-node path; empty for the root. Throws std::out_of_range.
std::vector<HistoryStep> History(const GameTree& tree, int node);

class BehavioralStrategy {
 public:
  BehavioralStrategy(StructurePtr structure, std::vector<double> values);
  // Uniform distribution on every block.
  static BehavioralStrategy Uniform(StructurePtr structure);

  const StructurePtr& structure() const { return structure_; }
  const std::vector<double>& values() const { return values_; }
  // Values with entries in [-1e-9, 0) clamped to zero.
  std::vector<double> Clamped() const;

 private:
  StructurePtr structure_;
  std::vector<double> values_;
};

// Checks that each block is a probability vector within `tol`.
bool IsStrategy(const BlockStructure& s, std::span<const double> values,
                double tol = 1e-9);

double ExpectedUtility(const GameTree& tree, const BehavioralStrategy& mu,
                       int player);
std::vector<double> ExpectedUtilities(const GameTree& tree,
                                      const BehavioralStrategy& mu);
// Reach probability of every terminal node (0 for non-terminals).
std::vector<double> ReachProbabilities(const GameTree& tree,
                                       const BehavioralStrategy& mu);

}  // namespace irsos

#endif  // IRSOS_GAME_H_
