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

#ifndef IRSOS_EXPERIMENTS_H_
#define IRSOS_EXPERIMENTS_H_

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "irsos/json_io.h"
#include "irsos/moment.h"
#include "irsos/polynomial.h"

namespace irsos {

class OracleTooLargeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Expected number of monomials kept by the random generators.
inline constexpr double kExpectedSupport = 30.0;

// One player, l infosets of m actions. Each monomial of degree <= d_u is kept
// with probability min(1, 30 / #monomials), coefficients uniform in [-1, 1];
// a degree-d_u term is forced when none was drawn.
Polynomial RandomNamPolynomial(int l, int m, int d_u, std::uint64_t seed);

// Monomials with at most one action per block, same support rule.
Polynomial RandomMultiAffinePolynomial(StructurePtr structure,
                                       std::uint64_t seed);

// Euclidean projection onto the probability simplex.
std::vector<double> SimplexProject(std::span<const double> v);
// SimplexProject applied to every block.
std::vector<double> ProjectStrategy(const BlockStructure& s,
                                    std::span<const double> x);

struct PgdOptions {
  int restarts = 100;
  double step = 0.02;
  double tol = 1e-8;
  int max_iter = 5000;
  std::uint64_t seed = 1;
  double success_tol = 1e-4;
};

struct PgdResult {
  double best_value = 0.0;
  std::vector<double> best_point;
  std::vector<double> values;  // final value per restart
  std::vector<int> iterations;
  // Fraction of restarts within success_tol of the reference, if given.
  std::optional<double> success_fraction;
  double seconds = 0.0;
};

// Projected gradient ascent from uniform random starts.
PgdResult PgdBaseline(const Polynomial& u, const PgdOptions& options = {},
                      std::optional<double> reference = std::nullopt);

struct OracleResult {
  double value = 0.0;
  std::vector<double> point;
  long long evaluated = 0;
};

// Max over one-hot profiles. Throws OracleTooLargeError above `cap`.
OracleResult VertexOracle(const Polynomial& u, long long cap = 1000000);
// Max over the grid {k / resolution} of every block simplex.
OracleResult GridOracle(const Polynomial& u, int resolution,
                        long long cap = 10000000);

struct BenchRowConfig {
  int l = 2;
  int m = 3;
  int d_u = 4;
  int instances = 50;
  std::uint64_t seed = 1;
};

struct BenchConfig {
  std::vector<BenchRowConfig> rows;
  HierarchyOptions hierarchy;
  PgdOptions pgd;
  int jobs = 1;
  // Orders tried above the minimal one when hierarchy.d_max is 0.
  int extra_orders = 1;
};

BenchConfig BenchConfigFromJson(const Json& j);

struct BenchInstance {
  std::uint64_t seed = 0;
  bool exact = false;
  std::optional<int> exact_order;
  double value = 0.0;
  double sos_seconds = 0.0;
  double pgd_best = 0.0;
  double pgd_success = 0.0;
  double pgd_seconds = 0.0;
  std::string error;
};

struct BenchRow {
  BenchRowConfig config;
  std::vector<BenchInstance> instances;
  int successes = 0;        // exact instances
  int exact_at_du = 0;      // exact with moment degree 2 * order <= d_u
  double d_sos = 0.0;       // mean moment degree 2 * order over successes
  double sos_seconds = 0.0;  // median
  double pgd_seconds = 0.0;  // median
  double opt_percent = 0.0;  // mean over successes
};

struct BenchTable {
  std::vector<BenchRow> rows;

  Json ToJson(bool with_timing = true) const;
  std::string ToText() const;
};

BenchTable RunBench(const BenchConfig& config);

}  // namespace irsos

#endif  // IRSOS_EXPERIMENTS_H_
