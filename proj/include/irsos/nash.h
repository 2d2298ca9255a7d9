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

#ifndef IRSOS_NASH_H_
#define IRSOS_NASH_H_

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "irsos/json_io.h"
#include "irsos/moment.h"
#include "irsos/polynomial.h"

namespace irsos {

class VertexCapExceededError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A^T A + 1e-3 I with A standard normal, dimension n0 + 1.
Eigen::MatrixXd RandomTheta(int num_vars, std::uint64_t seed);

// u_i with player i's variables replaced by `deviation` (player-local
// coordinates). Same layout as u_i.
Polynomial Deviate(const Polynomial& u, int player,
                   std::span<const double> deviation);
// u_i as a single-player polynomial in player i's variables, opponents fixed
// at `profile` (full coordinates).
Polynomial Restrict(const Polynomial& u, int player,
                    std::span<const double> profile);
// One-hot strategies of one player, player-local coordinates.
std::vector<std::vector<double>> PlayerVertices(const BlockStructure& s,
                                                int player,
                                                long long cap = 1000000);
// Every monomial has degree <= 1 in each block.
bool IsMultiAffine(const Polynomial& u);

class SelectorProgram {
 public:
  SelectorProgram(std::vector<Polynomial> utilities, Eigen::MatrixXd theta,
                  bool welfare = false);

  const std::vector<Polynomial>& utilities() const { return utilities_; }
  const StructurePtr& structure() const { return structure_; }
  const Eigen::MatrixXd& theta() const { return theta_; }
  bool welfare() const { return welfare_; }
  const std::vector<std::vector<std::vector<double>>>& cuts() const {
    return cuts_;
  }
  int num_cuts() const;

  // Throws std::invalid_argument unless v lies in the player's strategy set
  // within 1e-8.
  void AddCut(int player, std::vector<double> deviation);
  // u_i(mu) - u_i(v, mu_{-i}).
  Polynomial CutPolynomial(int player, std::span<const double> deviation) const;
  // [mu]_1^T Theta [mu]_1.
  Polynomial Phi() const;
  // -Phi, or the welfare sum, to be maximized.
  Polynomial Objective() const;
  // KKT set plus every stored cut.
  SemiAlgebraicSet Set() const;

 private:
  std::vector<Polynomial> utilities_;
  StructurePtr structure_;
  Eigen::MatrixXd theta_;
  bool welfare_;
  SemiAlgebraicSet kkt_;
  std::vector<std::vector<std::vector<double>>> cuts_;
};

struct NashOptions {
  double eps = 1e-5;
  int max_rounds = 25;
  std::uint64_t seed = 1;
  bool welfare = false;
  long long vertex_cap = 10000;
  HierarchyOptions selector = DefaultSelectorOptions();
  HierarchyOptions verify;
  bool verbose = false;

  static HierarchyOptions DefaultSelectorOptions() {
    HierarchyOptions h;
    h.d_max = 4;
    h.accept_primal_stall = true;
    return h;
  }
};

struct Verification {
  double gain = 0.0;  // omega_i
  double current = 0.0;
  double best = 0.0;
  std::vector<double> best_response;  // player-local coordinates
  bool exact = false;
  std::string method;
  std::vector<std::string> diagnostics;
};

// Maximizes u_i(., mu_{-i}) over the player's strategy set.
Verification VerifyCandidate(const std::vector<Polynomial>& utilities,
                             std::span<const double> candidate, int player,
                             const NashOptions& options = {});

struct RoundLog {
  int round = 0;
  std::string selector;  // "exact", "infeasible", "inconclusive"
  std::optional<double> selector_value;
  std::optional<int> degree;
  std::vector<double> candidate;
  std::vector<double> gains;
  int cuts_added = 0;
  double seconds = 0.0;
};

struct NashOutcome {
  enum class Kind { kEquilibrium, kNonexistence, kInconclusive };
  Kind kind = Kind::kInconclusive;
  std::vector<double> equilibrium;
  std::vector<double> gains;
  std::vector<RoundLog> rounds;
  int cuts = 0;
  std::string method;
  std::string evidence;
  std::vector<std::string> diagnostics;
  std::uint64_t seed = 0;
  double seconds = 0.0;

  Json ToJson(const BlockStructure* structure = nullptr) const;
};

std::string NashKindName(NashOutcome::Kind kind);

// Select-verify-cut over the joint KKT system.
NashOutcome SvcSolve(const std::vector<Polynomial>& utilities,
                     const NashOptions& options = {});

// Single selection over the KKT system with every vertex deviation
// inequality. Requires multi-affine utilities.
NashOutcome NamOneShot(const std::vector<Polynomial>& utilities,
                       const NashOptions& options = {});

}  // namespace irsos

#endif  // IRSOS_NASH_H_
