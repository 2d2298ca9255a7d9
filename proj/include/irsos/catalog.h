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

// Small reference games and utility polynomials used by tests, the CLI data
// files and the benchmarks.

#ifndef IRSOS_CATALOG_H_
#define IRSOS_CATALOG_H_

#include "irsos/game.h"
#include "irsos/polynomial.h"

namespace irsos {

// One player, one infoset {L, R} met twice along a path. R at the root
// pays 0; L then L pays 1; L then R pays 4.
GameTree TaxiDriverGame();

// Two-player zero-sum game without a Nash equilibrium. Player 1 moves twice
// but forgets the first move; player 2 sees only whether the two moves were
// equal.
GameTree NoEquilibriumGame();

// Matching pennies as a two-player tree with an unobserved first move.
GameTree MatchingPenniesGame();

// Blocks (x1, x2), (y1, y2): 2 + 3 x1 y1 - 5 x2 y2 + 4 y1^2.
Polynomial FourTermPolynomial();

// Blocks x, y, z of two actions; maximum 1 at the vertex (x2, y2, z2).
Polynomial VertexOptimumPolynomial();

// Blocks x, y of three actions; maximum 1 at x = (1/2, 0, 1/2), any y.
Polynomial MixedOptimumPolynomial();

// Quartic in two 2-action blocks whose Hessian is a sum of squares.
Polynomial ConvexQuarticPolynomial();

// Two blocks of two actions, u = -(x1 - 0.4)^2 - (y1 - 0.6)^2 - 0.2 x1 y1.
Polynomial ConcaveQuadraticPolynomial();

}  // namespace irsos

#endif  // IRSOS_CATALOG_H_
