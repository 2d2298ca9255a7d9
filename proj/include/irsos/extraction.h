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

#ifndef IRSOS_EXTRACTION_H_
#define IRSOS_EXTRACTION_H_

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "irsos/moment.h"

namespace irsos {

class ExtractionError : public std::runtime_error {
 public:
  enum class Kind { kNotFlat, kAtomInfeasible, kDegenerateEchelon };
  ExtractionError(Kind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

std::string ExtractionErrorName(ExtractionError::Kind kind);

struct AtomicMeasure {
  std::vector<std::vector<double>> atoms;  // full coordinates
  std::vector<double> weights;
  int rank = 0;
};

struct ExtractionOptions {
  double rank_tol = 1e-6;
  double pivot_tol = 1e-9;
  double clamp_tol = 1e-5;
  double gap_tol = 1e-8;
  int max_resamples = 5;
  std::uint64_t seed = 7;
};

// Intermediate objects, exposed for inspection.
struct ExtractionTrace {
  int order = 0;
  int rank = 0;
  Eigen::MatrixXd factor;     // V with M_s = V V^T
  Eigen::MatrixXd rewriting;  // v_s = R w, identity on the basis rows
  std::vector<int> basis;     // monomial indices of w
  std::vector<Eigen::MatrixXd> multiplication;  // one per reduced variable
  std::vector<double> combination;
  int resamples = 0;
};

// Atoms of y from the flat moment matrix M_s. Throws ExtractionError.
AtomicMeasure Extract(const MomentVector& y, int s,
                      const ExtractionOptions& options = {},
                      ExtractionTrace* trace = nullptr);

struct AtomReport {
  bool ok = true;
  std::vector<double> values;      // u(atom)
  std::vector<double> violations;  // constraint violation per atom
  double mixture_value = 0.0;      // sum_k w_k u(atom_k)
  std::vector<std::string> messages;
};

// Each atom feasible within `tol`, |u(atom) - bound| <= tol, and (when
// given) the mixture value within 1e-6 of `riesz_value`. Value checks are
// relative to max(1, |bound|).
AtomReport CertifyAtoms(const AtomicMeasure& m, const Polynomial& u,
                        double bound, const SemiAlgebraicSet& set,
                        std::optional<double> riesz_value = std::nullopt,
                        double tol = 1e-5);

// Nonnegative least squares min |A w - b|, w >= 0 (Lawson-Hanson).
Eigen::VectorXd Nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b);

}  // namespace irsos

#endif  // IRSOS_EXTRACTION_H_
