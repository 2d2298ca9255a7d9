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

#include "irsos/polynomial.h"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace irsos {

BlockStructure::BlockStructure(std::vector<std::vector<int>> actions)
    : actions_(std::move(actions)) {
  int offset = 0;
  for (int i = 0; i < actions_.size(); ++i) {
    player_offset_.push_back(offset);
    for (int j = 0; j < actions_[i].size(); ++j) {
      int m = actions_[i][j];
      if (m < 1) {
        throw std::invalid_argument("infoset with no actions");
      }
      int b = blocks_.size();
      blocks_.push_back({i, j, offset, m});
      for (int a = 0; a < m; ++a) variables_.push_back({i, j, a, b});
      offset += m;
    }
  }
  player_offset_.push_back(offset);
}

StructurePtr MakeStructure(std::vector<std::vector<int>> actions) {
  return std::make_shared<const BlockStructure>(std::move(actions));
}

int BlockStructure::num_infosets(int player) const {
  return actions_.at(player).size();
}

int BlockStructure::num_actions(int player, int infoset) const {
  return actions_.at(player).at(infoset);
}

int BlockStructure::max_actions() const {
  int m = 0;
  for (const Block& b : blocks_) m = std::max(m, b.size);
  return m;
}

int BlockStructure::BlockIndex(int player, int infoset) const {
  if (player < 0 || player >= num_players() || infoset < 0 ||
      infoset >= num_infosets(player)) {
    throw std::out_of_range("invalid (player, infoset)");
  }
  int b = 0;
  for (int i = 0; i < player; ++i) b += actions_[i].size();
  return b + infoset;
}

int BlockStructure::VariableIndex(int player, int infoset, int action) const {
  const Block& b = blocks_[BlockIndex(player, infoset)];
  if (action < 0 || action >= b.size) {
    throw std::out_of_range("invalid action index");
  }
  return b.offset + action;
}

std::pair<int, int> BlockStructure::PlayerRange(int player) const {
  if (player < 0 || player >= num_players()) {
    throw std::out_of_range("invalid player");
  }
  return {player_offset_[player],
          player_offset_[player + 1] - player_offset_[player]};
}

std::string BlockStructure::VariableKey(int v) const {
  const Variable& x = variables_.at(v);
  return std::to_string(x.player + 1) + "." + std::to_string(x.infoset + 1) +
         "." + std::to_string(x.action + 1);
}

int BlockStructure::ParseVariableKey(const std::string& key) const {
  int parts[3];
  std::size_t pos = 0;
  for (int k = 0; k < 3; ++k) {
    std::size_t end = key.find('.', pos);
    if ((k < 2) != (end != std::string::npos)) {
      throw std::invalid_argument("bad variable key: " + key);
    }
    std::string field = key.substr(pos, end == std::string::npos
                                            ? std::string::npos
                                            : end - pos);
    if (field.empty() ||
        !std::all_of(field.begin(), field.end(), ::isdigit)) {
      throw std::invalid_argument("bad variable key: " + key);
    }
    parts[k] = std::stoi(field) - 1;
    pos = end + 1;
  }
  try {
    return VariableIndex(parts[0], parts[1], parts[2]);
  } catch (const std::out_of_range&) {
    throw std::invalid_argument("variable key out of range: " + key);
  }
}

BlockStructure BlockStructure::PlayerStructure(int player) const {
  return BlockStructure({actions_.at(player)});
}

// MultiIndex ----------------------------------------------------------------

MultiIndex::MultiIndex(std::vector<std::pair<int, int>> terms) {
  std::sort(terms.begin(), terms.end());
  for (const auto& [v, e] : terms) {
    if (v < 0 || e < 0) throw std::invalid_argument("negative exponent");
    if (e == 0) continue;
    if (!terms_.empty() && terms_.back().first == v) {
      terms_.back().second += e;
    } else {
      terms_.push_back({v, e});
    }
    degree_ += e;
  }
}

MultiIndex MultiIndex::Var(int var, int exp) { return MultiIndex({{var, exp}}); }

MultiIndex MultiIndex::FromDense(std::span<const int> exps) {
  std::vector<std::pair<int, int>> t;
  for (int v = 0; v < exps.size(); ++v) {
    if (exps[v] != 0) t.push_back({v, exps[v]});
  }
  return MultiIndex(std::move(t));
}

int MultiIndex::exponent(int var) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(),
                             std::make_pair(var, 0));
  return (it != terms_.end() && it->first == var) ? it->second : 0;
}

std::vector<int> MultiIndex::Expanded() const {
  std::vector<int> out;
  out.reserve(degree_);
  for (const auto& [v, e] : terms_) out.insert(out.end(), e, v);
  return out;
}

MultiIndex MultiIndex::operator*(const MultiIndex& other) const {
  MultiIndex r;
  r.terms_.reserve(terms_.size() + other.terms_.size());
  auto a = terms_.begin();
  auto b = other.terms_.begin();
  while (a != terms_.end() || b != other.terms_.end()) {
    if (b == other.terms_.end() || (a != terms_.end() && a->first < b->first)) {
      r.terms_.push_back(*a++);
    } else if (a == terms_.end() || b->first < a->first) {
      r.terms_.push_back(*b++);
    } else {
      r.terms_.push_back({a->first, a->second + b->second});
      ++a;
      ++b;
    }
  }
  r.degree_ = degree_ + other.degree_;
  return r;
}

MultiIndex MultiIndex::Capped(const std::vector<bool>& binary) const {
  MultiIndex r = *this;
  r.degree_ = 0;
  for (auto& [v, e] : r.terms_) {
    if (v < binary.size() && binary[v]) e = 1;
    r.degree_ += e;
  }
  return r;
}

MultiIndex MultiIndex::DividedBy(int var) const {
  MultiIndex r = *this;
  for (auto it = r.terms_.begin(); it != r.terms_.end(); ++it) {
    if (it->first == var) {
      if (--it->second == 0) r.terms_.erase(it);
      --r.degree_;
      return r;
    }
  }
  throw std::invalid_argument("DividedBy: variable not present");
}

double MultiIndex::Evaluate(std::span<const double> point) const {
  double r = 1.0;
  for (const auto& [v, e] : terms_) {
    double x = point[v];
    for (int k = 0; k < e; ++k) r *= x;
  }
  return r;
}

std::string MultiIndex::ToString() const {
  if (terms_.empty()) return "1";
  std::ostringstream os;
  bool first = true;
  for (const auto& [v, e] : terms_) {
    if (!first) os << "*";
    first = false;
    os << "x" << v;
    if (e > 1) os << "^" << e;
  }
  return os.str();
}

std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) {
  if (a.degree_ != b.degree_) return a.degree_ <=> b.degree_;
  auto ia = a.terms_.begin();
  auto ib = b.terms_.begin();
  int ca = ia == a.terms_.end() ? 0 : ia->second;
  int cb = ib == b.terms_.end() ? 0 : ib->second;
  while (ia != a.terms_.end() && ib != b.terms_.end()) {
    if (ia->first != ib->first) return ia->first <=> ib->first;
    int k = std::min(ca, cb);
    ca -= k;
    cb -= k;
    if (ca == 0 && ++ia != a.terms_.end()) ca = ia->second;
    if (cb == 0 && ++ib != b.terms_.end()) cb = ib->second;
  }
  return std::strong_ordering::equal;
}

namespace {

void EnumerateDegree(int num_vars, int remaining, int start,
                     const std::vector<bool>* binary,
                     std::vector<std::pair<int, int>>& current,
                     std::vector<MultiIndex>& out) {
  if (remaining == 0) {
    out.push_back(MultiIndex(current));
    return;
  }
  for (int v = start; v < num_vars; ++v) {
    bool same = !current.empty() && current.back().first == v;
    if (same && binary != nullptr && (*binary)[v]) continue;
    if (same) {
      ++current.back().second;
    } else {
      current.push_back({v, 1});
    }
    EnumerateDegree(num_vars, remaining - 1, v, binary, current, out);
    if (same) {
      --current.back().second;
    } else {
      current.pop_back();
    }
  }
}

}  // namespace

std::vector<MultiIndex> MonomialsUpToDegree(int num_vars, int max_degree,
                                            const std::vector<bool>* binary) {
  std::vector<MultiIndex> out;
  std::vector<std::pair<int, int>> current;
  for (int k = 0; k <= max_degree; ++k) {
    EnumerateDegree(num_vars, k, 0, binary, current, out);
  }
  return out;
}

long long NumMonomials(int num_vars, int max_degree) {
  // C(n + d, d) computed incrementally; exact for the sizes used here.
  long double r = 1;
  for (int k = 1; k <= max_degree; ++k) r = r * (num_vars + k) / k;
  return std::llround(r);
}

// Polynomial ----------------------------------------------------------------

Polynomial::Polynomial(StructurePtr structure)
    : structure_(std::move(structure)),
      num_vars_(structure_ ? structure_->num_variables() : 0) {}

Polynomial::Polynomial(int num_vars) : num_vars_(num_vars) {}

Polynomial Polynomial::Constant(StructurePtr structure, double c) {
  Polynomial p(std::move(structure));
  p.AddTerm(MultiIndex(), c);
  return p;
}

Polynomial Polynomial::Variable(StructurePtr structure, int var, double c) {
  Polynomial p(std::move(structure));
  if (var < 0 || var >= p.num_vars_) throw std::out_of_range("variable");
  p.AddTerm(MultiIndex::Var(var), c);
  return p;
}

Polynomial Polynomial::ZeroLike() const {
  Polynomial p = *this;
  p.terms_.clear();
  return p;
}

Polynomial Polynomial::ConstantLike(double c) const {
  Polynomial p = ZeroLike();
  p.AddTerm(MultiIndex(), c);
  return p;
}

Polynomial Polynomial::VariableLike(int var, double c) const {
  if (var < 0 || var >= num_vars_) throw std::out_of_range("variable");
  Polynomial p = ZeroLike();
  p.AddTerm(MultiIndex::Var(var), c);
  return p;
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
  return d;
}

double Polynomial::coefficient(const MultiIndex& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? 0.0 : it->second;
}

double Polynomial::MaxAbsCoefficient() const {
  double r = 0;
  for (const auto& [m, c] : terms_) r = std::max(r, std::abs(c));
  return r;
}

void Polynomial::AddTerm(const MultiIndex& m, double c) {
  if (c == 0.0) return;
  if (m.max_variable() >= num_vars_) {
    throw std::out_of_range("monomial uses variable " +
                            std::to_string(m.max_variable()) +
                            " outside the layout");
  }
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

bool Polynomial::SameLayout(const Polynomial& other) const {
  if (num_vars_ != other.num_vars_) return false;
  if (!structure_ || !other.structure_) return !structure_ && !other.structure_;
  return structure_ == other.structure_ || *structure_ == *other.structure_;
}

void Polynomial::CheckLayout(const Polynomial& other) const {
  if (!SameLayout(other)) {
    throw StructureMismatchError("polynomials have different block structures");
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& other) {
  CheckLayout(other);
  for (const auto& [m, c] : other.terms_) AddTerm(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& other) {
  CheckLayout(other);
  for (const auto& [m, c] : other.terms_) AddTerm(m, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(double s) {
  if (s == 0.0) {
    terms_.clear();
    return *this;
  }
  for (auto& [m, c] : terms_) c *= s;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  a.CheckLayout(b);
  Polynomial r = a.ZeroLike();
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) r.AddTerm(ma * mb, ca * cb);
  }
  return r;
}

double Polynomial::Evaluate(std::span<const double> point) const {
  if (point.size() != num_vars_) {
    throw std::invalid_argument("evaluation point has wrong dimension");
  }
  double r = 0;
  for (const auto& [m, c] : terms_) r += c * m.Evaluate(point);
  return r;
}

Polynomial Polynomial::Derivative(int var) const {
  if (var < 0 || var >= num_vars_) throw std::out_of_range("variable");
  Polynomial r = ZeroLike();
  for (const auto& [m, c] : terms_) {
    int e = m.exponent(var);
    if (e > 0) r.AddTerm(m.DividedBy(var), c * e);
  }
  return r;
}

Polynomial Polynomial::PartialEvaluate(const std::vector<bool>& fixed,
                                       std::span<const double> values) const {
  Polynomial r = ZeroLike();
  for (const auto& [m, c] : terms_) {
    double coeff = c;
    std::vector<std::pair<int, int>> rest;
    for (const auto& [v, e] : m.terms()) {
      if (fixed[v]) {
        coeff *= std::pow(values[v], e);
      } else {
        rest.push_back({v, e});
      }
    }
    r.AddTerm(MultiIndex(std::move(rest)), coeff);
  }
  return r;
}

Polynomial Polynomial::Cleaned(double tol) const {
  Polynomial r = ZeroLike();
  for (const auto& [m, c] : terms_) {
    if (std::abs(c) > tol) r.terms_.emplace(m, c);
  }
  return r;
}

Polynomial Polynomial::WithStructure(StructurePtr structure) const {
  Polynomial r(std::move(structure));
  for (const auto& [m, c] : terms_) r.AddTerm(m, c);
  return r;
}

Polynomial Polynomial::Unstructured() const {
  Polynomial r(num_vars_);
  r.terms_ = terms_;
  return r;
}

std::string Polynomial::ToString() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  os.precision(10);
  bool first = true;
  for (const auto& [m, c] : terms_) {
    if (!first) os << (c < 0 ? " - " : " + ");
    else if (c < 0) os << "-";
    first = false;
    os << std::abs(c);
    if (!m.is_constant()) os << "*" << m.ToString();
  }
  return os.str();
}

// Matrices and derivatives --------------------------------------------------

bool PolyMatrix::IsSymmetric() const {
  if (rows != cols) return false;
  for (int r = 0; r < rows; ++r) {
    for (int c = r + 1; c < cols; ++c) {
      if (!((*this)(r, c).terms() == (*this)(c, r).terms())) return false;
    }
  }
  return true;
}

int PolyMatrix::MaxDegree() const {
  int d = 0;
  for (const Polynomial& p : entries) {
    if (!p.IsZero()) d = std::max(d, p.degree());
  }
  return d;
}

std::vector<double> PolyMatrix::Evaluate(std::span<const double> point) const {
  std::vector<double> out;
  out.reserve(entries.size());
  for (const Polynomial& p : entries) out.push_back(p.Evaluate(point));
  return out;
}

namespace {

const BlockStructure& RequireStructure(const Polynomial& p) {
  if (!p.structure()) {
    throw StructureMismatchError("polynomial has no block structure");
  }
  return *p.structure();
}

}  // namespace

std::vector<Polynomial> GradientBlock(const Polynomial& p, int player,
                                      int infoset) {
  const BlockStructure& s = RequireStructure(p);
  const BlockStructure::Block& b = s.block(s.BlockIndex(player, infoset));
  std::vector<Polynomial> g;
  for (int a = 0; a < b.size; ++a) g.push_back(p.Derivative(b.offset + a));
  return g;
}

std::vector<Polynomial> PlayerGradient(const Polynomial& p, int player) {
  const BlockStructure& s = RequireStructure(p);
  auto [first, count] = s.PlayerRange(player);
  std::vector<Polynomial> g;
  for (int k = 0; k < count; ++k) g.push_back(p.Derivative(first + k));
  return g;
}

PolyMatrix HessianBlock(const Polynomial& p, int player) {
  const BlockStructure& s = RequireStructure(p);
  auto [first, count] = s.PlayerRange(player);
  PolyMatrix h{count, count, {}};
  h.entries.assign(count * count, p.ZeroLike());
  for (int a = 0; a < count; ++a) {
    Polynomial da = p.Derivative(first + a);
    for (int b = a; b < count; ++b) {
      h(a, b) = da.Derivative(first + b);
      h(b, a) = h(a, b);
    }
  }
  return h;
}

PolyMatrix SymmetrizedJacobian(const std::vector<Polynomial>& utilities) {
  if (utilities.empty()) return {};
  const BlockStructure& s = RequireStructure(utilities[0]);
  if (utilities.size() != s.num_players()) {
    throw StructureMismatchError("need one utility per player");
  }
  for (const Polynomial& u : utilities) {
    if (!utilities[0].SameLayout(u)) {
      throw StructureMismatchError("utilities have different layouts");
    }
  }
  int n = s.num_variables();
  std::vector<Polynomial> field;
  for (int i = 0; i < s.num_players(); ++i) {
    std::vector<Polynomial> g = PlayerGradient(utilities[i], i);
    field.insert(field.end(), g.begin(), g.end());
  }
  PolyMatrix j{n, n, {}};
  j.entries.assign(n * n, utilities[0].ZeroLike());
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) j(a, b) = field[a].Derivative(b);
  }
  PolyMatrix sj = j;
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) sj(a, b) = 0.5 * (j(a, b) + j(b, a));
  }
  return sj;
}

}  // namespace irsos
