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

#ifndef IRSOS_SDP_H_
#define IRSOS_SDP_H_

#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace irsos {

class DimensionMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Block semidefinite program over free scalars x in R^m:
//
//   optimize  c^T x + offset
//   s.t.      S_k(x) = F_k0 + sum_i x_i F_ki  is PSD for every block k,
//             a_j^T x = b_j.
//
// A PSD matrix variable X is the special case F_0 = 0 with one free scalar
// per upper-triangular entry. Symmetric coefficient matrices are stored by
// their upper triangle (row <= col).
struct SdpProblem {
  enum class Sense { kMinimize, kMaximize };
  struct Entry {
    int block;
    int row;
    int col;
    double value;
  };
  struct Equality {
    std::vector<std::pair<int, double>> terms;
    double rhs = 0.0;
  };

  int num_vars = 0;
  std::vector<int> block_dims;
  std::vector<Entry> constant;                // F_0 entries
  std::vector<std::vector<Entry>> coefficients;  // F_i entries per variable
  std::vector<double> objective;
  double objective_offset = 0.0;
  Sense sense = Sense::kMinimize;
  std::vector<Equality> equalities;

  int AddVariable();
  int AddBlock(int dim);
  // var == -1 addresses F_0. Entries at (r, c) and (c, r) are the same entry.
  void AddEntry(int var, int block, int row, int col, double value);
  // Throws DimensionMismatchError when pieces disagree.
  void Check() const;
  // S_k(x) as dense matrices.
  std::vector<Eigen::MatrixXd> BlockValues(const Eigen::VectorXd& x) const;
  double ObjectiveValue(const Eigen::VectorXd& x) const;

  // One line per nonzero: "<var> <block> <row> <col> <value>", 0-based,
  // var -1 for the constant term; objective lines use block -1.
  void DumpText(std::ostream& os) const;
};

enum class SdpStatus {
  kOptimal,
  kInfeasible,
  kUnbounded,
  kSlowProgress,
  kIterationLimit
};
std::string SdpStatusName(SdpStatus s);

struct SdpOptions {
  double tol = 1e-7;
  int max_iter = 200;
  double step_fraction = 0.98;
  bool verbose = false;
};

struct SdpSolution {
  SdpStatus status = SdpStatus::kIterationLimit;
  Eigen::VectorXd x;
  std::vector<Eigen::MatrixXd> primal;  // S_k(x)
  std::vector<Eigen::MatrixXd> dual;    // Z_k, PSD
  Eigen::VectorXd y;                    // equality multipliers
  double objective = 0.0;               // user sense, with offset
  double dual_objective = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
  int iterations = 0;
};

// Homogeneous self-dual interior-point method with Nesterov-Todd scaling and
// Mehrotra predictor-corrector steps. For kInfeasible, `dual`/`y` hold the
// certificate (Z PSD, y) with sum_k <F_ik, Z_k> = (A^T y)_i and
// sum_k <F_k0, Z_k> + b^T y = -1. For kUnbounded, `x` holds a ray.
SdpSolution SolveSdp(const SdpProblem& problem,
                     const SdpOptions& options = SdpOptions());

struct CertificateReport {
  bool ok = true;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
  double min_primal_eigenvalue = 0.0;
  double min_dual_eigenvalue = 0.0;
  std::vector<std::string> violations;
};

// Recomputes residuals and eigenvalues from the problem data and flags
// anything beyond 10 * tol.
CertificateReport CheckCertificate(const SdpProblem& problem,
                                   const SdpSolution& solution,
                                   double tol = 1e-7);

}  // namespace irsos

#endif  // IRSOS_SDP_H_
