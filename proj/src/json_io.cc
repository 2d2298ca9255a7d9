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

#include "irsos/json_io.h"

#include <fstream>
#include <map>

namespace irsos {

namespace {

std::string IdString(const Json& j, const char* what) {
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_integer()) return std::to_string(j.get<long long>());
  throw ParseError(std::string(what) + " must be a string or an integer");
}

const Json& Field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(std::string("missing field '") + key + "'");
  }
  return j.at(key);
}

double Number(const Json& j, const char* what) {
  if (!j.is_number()) throw ParseError(std::string(what) + " must be a number");
  return j.get<double>();
}

}  // namespace

Polynomial PolynomialFromJson(const Json& j) {
  const Json& blocks = Field(j, "blocks");
  if (!blocks.is_array() || blocks.empty()) {
    throw ParseError("'blocks' must be a non-empty array");
  }
  std::vector<std::vector<int>> actions;
  for (const Json& player : blocks) {
    if (!player.is_array()) throw ParseError("'blocks' entries must be arrays");
    std::vector<int> m;
    for (const Json& c : player) {
      if (!c.is_number_integer() || c.get<int>() < 1) {
        throw ParseError("action counts must be positive integers");
      }
      m.push_back(c.get<int>());
    }
    actions.push_back(m);
  }
  StructurePtr s = MakeStructure(actions);
  Polynomial p(s);
  const Json& terms = Field(j, "terms");
  if (!terms.is_array()) throw ParseError("'terms' must be an array");
  for (const Json& t : terms) {
    double c = Number(Field(t, "coeff"), "coeff");
    std::vector<std::pair<int, int>> exps;
    const Json& e = t.contains("exps") ? t.at("exps") : Json::object();
    if (!e.is_object()) throw ParseError("'exps' must be an object");
    for (const auto& [key, val] : e.items()) {
      if (!val.is_number_integer() || val.get<int>() < 0) {
        throw ParseError("exponents must be nonnegative integers");
      }
      int v;
      try {
        v = s->ParseVariableKey(key);
      } catch (const std::invalid_argument& ex) {
        throw ParseError(ex.what());
      }
      exps.push_back({v, val.get<int>()});
    }
    p.AddTerm(MultiIndex(exps), c);
  }
  return p;
}

Json StructureToJson(const BlockStructure& s) { return Json(s.actions()); }

Json PolynomialToJson(const Polynomial& p) {
  if (!p.structure()) throw std::invalid_argument("polynomial has no layout");
  Json terms = Json::array();
  for (const auto& [m, c] : p.terms()) {
    Json exps = Json::object();
    for (const auto& [v, e] : m.terms()) {
      exps[p.structure()->VariableKey(v)] = e;
    }
    terms.push_back({{"coeff", c}, {"exps", exps}});
  }
  return {{"blocks", StructureToJson(*p.structure())}, {"terms", terms}};
}

GameTree GameFromJson(const Json& j) {
  GameTree tree;
  const Json& players = Field(j, "players");
  if (!players.is_number_integer() || players.get<int>() < 1) {
    throw ParseError("'players' must be a positive integer");
  }
  tree.num_players = players.get<int>();
  const Json& nodes = Field(j, "nodes");
  if (!nodes.is_array()) throw ParseError("'nodes' must be an array");
  std::map<std::string, int> ids;
  for (const Json& n : nodes) {
    std::string id = IdString(Field(n, "id"), "node id");
    if (!ids.emplace(id, ids.size()).second) {
      throw ParseError("duplicate node id '" + id + "'");
    }
  }
  for (const Json& n : nodes) {
    Node node;
    node.id = IdString(n.at("id"), "node id");
    std::string kind = Field(n, "kind").get<std::string>();
    if (kind == "decision") {
      node.kind = NodeKind::kDecision;
      const Json& pl = Field(n, "player");
      if (!pl.is_number_integer()) throw ParseError("player must be an integer");
      node.player = pl.get<int>() - 1;
      node.infoset = IdString(Field(n, "infoset"), "infoset");
    } else if (kind == "chance") {
      node.kind = NodeKind::kChance;
    } else if (kind == "terminal") {
      node.kind = NodeKind::kTerminal;
    } else {
      throw ParseError("unknown node kind '" + kind + "'");
    }
    if (n.contains("actions")) {
      for (const Json& a : n.at("actions")) {
        Edge e;
        e.label = a.contains("label") ? IdString(a.at("label"), "label")
                                      : std::to_string(node.actions.size());
        std::string child = IdString(Field(a, "child"), "child");
        auto it = ids.find(child);
        if (it == ids.end()) throw ParseError("unknown child '" + child + "'");
        e.child = it->second;
        if (node.kind == NodeKind::kChance) {
          e.prob = Number(Field(a, "prob"), "prob");
        } else if (a.contains("prob")) {
          throw ParseError("'prob' is only allowed on chance edges");
        }
        node.actions.push_back(e);
      }
    }
    if (n.contains("payoffs")) {
      for (const Json& v : n.at("payoffs")) {
        node.payoffs.push_back(Number(v, "payoff"));
      }
    }
    tree.nodes.push_back(std::move(node));
  }
  std::string root = IdString(Field(j, "root"), "root");
  auto it = ids.find(root);
  if (it == ids.end()) throw ParseError("unknown root '" + root + "'");
  tree.root = it->second;
  if (j.contains("infosets")) {
    for (const Json& d : j.at("infosets")) {
      InfosetDecl decl;
      decl.id = IdString(Field(d, "id"), "infoset id");
      decl.player = Field(d, "player").get<int>() - 1;
      for (const Json& l : Field(d, "actions")) {
        decl.labels.push_back(IdString(l, "label"));
      }
      tree.infosets.push_back(decl);
    }
  }
  return tree;
}

Json GameToJson(const GameTree& tree) {
  Json nodes = Json::array();
  for (const Node& node : tree.nodes) {
    Json n = {{"id", node.id}};
    switch (node.kind) {
      case NodeKind::kDecision:
        n["kind"] = "decision";
        n["player"] = node.player + 1;
        n["infoset"] = node.infoset;
        break;
      case NodeKind::kChance:
        n["kind"] = "chance";
        break;
      case NodeKind::kTerminal:
        n["kind"] = "terminal";
        n["payoffs"] = node.payoffs;
        break;
    }
    if (node.kind != NodeKind::kTerminal) {
      Json acts = Json::array();
      for (const Edge& e : node.actions) {
        Json a = {{"label", e.label}, {"child", tree.nodes.at(e.child).id}};
        if (node.kind == NodeKind::kChance) a["prob"] = e.prob;
        acts.push_back(a);
      }
      n["actions"] = acts;
    }
    nodes.push_back(n);
  }
  Json out = {{"players", tree.num_players},
              {"nodes", nodes},
              {"root", tree.nodes.at(tree.root).id}};
  if (!tree.infosets.empty()) {
    Json decls = Json::array();
    for (const InfosetDecl& d : tree.infosets) {
      decls.push_back(
          {{"id", d.id}, {"player", d.player + 1}, {"actions", d.labels}});
    }
    out["infosets"] = decls;
  }
  return out;
}

Json StrategyToJson(const BlockStructure& s, const std::vector<double>& v) {
  Json out = Json::array();
  for (int i = 0; i < s.num_players(); ++i) {
    Json player = Json::array();
    for (int j = 0; j < s.num_infosets(i); ++j) {
      const auto& b = s.block(s.BlockIndex(i, j));
      player.push_back(std::vector<double>(v.begin() + b.offset,
                                           v.begin() + b.offset + b.size));
    }
    out.push_back(player);
  }
  return out;
}

Json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ParseError(path + ": " + e.what());
  }
}

bool LooksLikeGame(const Json& j) {
  return j.is_object() && j.contains("nodes") && j.contains("root");
}

}  // namespace irsos
