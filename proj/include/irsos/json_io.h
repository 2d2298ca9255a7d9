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

#ifndef IRSOS_JSON_IO_H_
#define IRSOS_JSON_IO_H_

#include <stdexcept>
#include <string>

#include "json.hpp"
#include "irsos/game.h"
#include "irsos/polynomial.h"

namespace irsos {

using Json = nlohmann::json;

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// {"blocks": [[m11, m12, ...], ...], "terms": [{"coeff": c, "exps":
// {"i.j.a": e, ...}}, ...]} with 1-based keys.
Polynomial PolynomialFromJson(const Json& j);
Json PolynomialToJson(const Polynomial& p);

// {"players": n, "nodes": [...], "root": id, "infosets"?: [...]}. Player
// labels are 1-based. Node and infoset ids may be strings or integers.
GameTree GameFromJson(const Json& j);
Json GameToJson(const GameTree& tree);

Json StructureToJson(const BlockStructure& s);
// Strategy values grouped per player and infoset.
Json StrategyToJson(const BlockStructure& s, const std::vector<double>& v);

Json ReadJsonFile(const std::string& path);
bool LooksLikeGame(const Json& j);

}  // namespace irsos

#endif  // IRSOS_JSON_IO_H_
