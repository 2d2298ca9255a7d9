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

#ifndef IRSOS_BRIDGE_H_
#define IRSOS_BRIDGE_H_

#include <vector>

#include "irsos/game.h"
#include "irsos/polynomial.h"

namespace irsos {

// Expected utility of `player` as a polynomial in the behavioral strategy
// variables of the tree's canonical structure. One monomial per terminal,
// with chance probabilities folded into the coefficient.
Polynomial GameToPolynomial(const GameTree& tree, int player);
std::vector<Polynomial> GameToPolynomials(const GameTree& tree);

// Single-player game whose expected utility is exactly p. A chance root picks
// each monomial of the support uniformly; below it the monomial's variables
// are played in MultiIndex order, every other action ending in a zero-payoff
// leaf, and the last designated edge pays coefficient * |supp(p)|. The chance
// root is omitted when the support has a single monomial. Infosets are
// declared explicitly so the block structure survives a round trip even when
// some infoset does not occur in p.
GameTree PolynomialToGame(const Polynomial& p);

}  // namespace irsos

#endif  // IRSOS_BRIDGE_H_
