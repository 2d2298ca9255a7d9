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

#ifndef IRSOS_POLYNOMIAL_H_
#define IRSOS_POLYNOMIAL_H_

#include <compare>
#include <map>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace irsos {

class StructureMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Layout of the strategy variables: player -> infoset -> action. Variables
// are numbered player-major, then infoset, then action, so the variables of
// one player (and of one infoset) are contiguous. All indices are 0-based;
// the textual keys "i.j.a" are 1-based.
class BlockStructure {
 public:
  struct Block {
    int player;
    int infoset;
    int offset;
    int size;
  };
  struct Variable {
    int player;
    int infoset;
    int action;
    int block;
  };

  BlockStructure() = default;
  // actions[i][j] = number of actions at infoset j of player i.
  explicit BlockStructure(std::vector<std::vector<int>> actions);

  int num_players() const { return actions_.size(); }
  int num_infosets(int player) const;
  int num_actions(int player, int infoset) const;
  int num_variables() const { return variables_.size(); }
  int num_blocks() const { return blocks_.size(); }
  int max_actions() const;

  const std::vector<std::vector<int>>& actions() const { return actions_; }
  const std::vector<Block>& blocks() const { return blocks_; }
  const Block& block(int b) const { return blocks_.at(b); }
  int BlockIndex(int player, int infoset) const;
  int VariableIndex(int player, int infoset, int action) const;
  const Variable& variable(int v) const { return variables_.at(v); }

  // Contiguous range [first, first + count) of the player's variables.
  std::pair<int, int> PlayerRange(int player) const;

  std::string VariableKey(int v) const;
  // Throws std::invalid_argument on malformed or out of range keys.
  int ParseVariableKey(const std::string& key) const;

  // Structure containing only `player`, renumbered as player 0.
  BlockStructure PlayerStructure(int player) const;

  bool operator==(const BlockStructure& other) const {
    return actions_ == other.actions_;
  }

 private:
  std::vector<std::vector<int>> actions_;
  std::vector<Block> blocks_;
  std::vector<Variable> variables_;
  std::vector<int> player_offset_;
};

using StructurePtr = std::shared_ptr<const BlockStructure>;
StructurePtr MakeStructure(std::vector<std::vector<int>> actions);

// Sparse exponent vector: sorted (variable, exponent) pairs, exponents > 0.
// Ordered by total degree, then lexicographically on the sorted sequence of
// variables with multiplicity (x0 < x1 < x0^2 < x0x1 < x1^2 < ...).
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<std::pair<int, int>> terms);
  static MultiIndex Var(int var, int exp = 1);
  static MultiIndex FromDense(std::span<const int> exps);

  int degree() const { return degree_; }
  bool is_constant() const { return terms_.empty(); }
  int exponent(int var) const;
  int max_variable() const { return terms_.empty() ? -1 : terms_.back().first; }
  const std::vector<std::pair<int, int>>& terms() const { return terms_; }
  // Variables with multiplicity, ascending.
  std::vector<int> Expanded() const;

  MultiIndex operator*(const MultiIndex& other) const;
  // Exponents of variables flagged in `binary` are clipped at 1.
  MultiIndex Capped(const std::vector<bool>& binary) const;
  // Removes one power of `var`; requires exponent(var) > 0.
  MultiIndex DividedBy(int var) const;
  double Evaluate(std::span<const double> point) const;

  std::string ToString() const;

  friend bool operator==(const MultiIndex& a, const MultiIndex& b) {
    return a.terms_ == b.terms_;
  }
  friend std::strong_ordering operator<=>(const MultiIndex& a,
                                          const MultiIndex& b);

 private:
  std::vector<std::pair<int, int>> terms_;
  int degree_ = 0;
};

// All monomials in `num_vars` variables of total degree <= max_degree, in
// MultiIndex order. With `binary`, exponents of flagged variables stay <= 1.
std::vector<MultiIndex> MonomialsUpToDegree(
    int num_vars, int max_degree, const std::vector<bool>* binary = nullptr);
long long NumMonomials(int num_vars, int max_degree);

// Sparse real polynomial. A polynomial either carries a BlockStructure (the
// strategy-variable layout) or is unstructured over `num_variables()`
// variables. Arithmetic requires both operands to have the same layout.
class Polynomial {
 public:
  using TermMap = std::map<MultiIndex, double>;

  Polynomial() = default;
  explicit Polynomial(StructurePtr structure);
  explicit Polynomial(int num_vars);

  static Polynomial Constant(StructurePtr structure, double c);
  static Polynomial Variable(StructurePtr structure, int var, double c = 1.0);
  Polynomial ZeroLike() const;
  Polynomial ConstantLike(double c) const;
  Polynomial VariableLike(int var, double c = 1.0) const;

  int num_variables() const { return num_vars_; }
  const StructurePtr& structure() const { return structure_; }
  const TermMap& terms() const { return terms_; }
  int num_terms() const { return terms_.size(); }
  bool IsZero() const { return terms_.empty(); }
  // Total degree; 0 for the zero polynomial.
  int degree() const;
  double coefficient(const MultiIndex& m) const;
  double constant_term() const { return coefficient(MultiIndex()); }
  double MaxAbsCoefficient() const;

  void AddTerm(const MultiIndex& m, double c);

  Polynomial& operator+=(const Polynomial& other);
  Polynomial& operator-=(const Polynomial& other);
  Polynomial& operator*=(double s);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) {
    return a += b;
  }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) {
    return a -= b;
  }
  friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
  friend Polynomial operator*(double s, Polynomial a) { return a *= s; }
  friend Polynomial operator-(Polynomial a) { return a *= -1.0; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);

  double Evaluate(std::span<const double> point) const;
  Polynomial Derivative(int var) const;
  // Replaces variables with values where fixed[v] is true.
  Polynomial PartialEvaluate(const std::vector<bool>& fixed,
                             std::span<const double> values) const;
  // Drops coefficients with |c| <= tol.
  Polynomial Cleaned(double tol) const;
  // Same terms with a different (compatible) layout.
  Polynomial WithStructure(StructurePtr structure) const;
  Polynomial Unstructured() const;

  bool SameLayout(const Polynomial& other) const;
  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.SameLayout(b) && a.terms_ == b.terms_;
  }

  std::string ToString() const;

 private:
  void CheckLayout(const Polynomial& other) const;

  StructurePtr structure_;
  int num_vars_ = 0;
  TermMap terms_;
};

// Dense matrix of polynomials.
struct PolyMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<Polynomial> entries;  // row-major

  const Polynomial& operator()(int r, int c) const {
    return entries[r * cols + c];
  }
  Polynomial& operator()(int r, int c) { return entries[r * cols + c]; }
  bool IsSymmetric() const;
  int MaxDegree() const;
  std::vector<double> Evaluate(std::span<const double> point) const;
};

// Partial derivatives of p with respect to the actions of one infoset.
std::vector<Polynomial> GradientBlock(const Polynomial& p, int player,
                                      int infoset);
// Gradient with respect to all variables of `player`.
std::vector<Polynomial> PlayerGradient(const Polynomial& p, int player);
// Hessian of p with respect to the variables of `player`.
PolyMatrix HessianBlock(const Polynomial& p, int player);
// (J + J^T) / 2 where J is the Jacobian of the stacked player gradients
// (grad_{mu_1} u_1, ..., grad_{mu_n} u_n) over all variables.
PolyMatrix SymmetrizedJacobian(const std::vector<Polynomial>& utilities);

}  // namespace irsos

#endif  // IRSOS_POLYNOMIAL_H_
