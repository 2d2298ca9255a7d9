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

#ifndef IRSOS_STRUCTURE_H_
#define IRSOS_STRUCTURE_H_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "irsos/json_io.h"
#include "irsos/moment.h"
#include "irsos/polynomial.h"

namespace irsos {

class NotCertifiedError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CertifyOptions {
  int samples = 100;
  std::uint64_t seed = 1;
  // Sampled eigenvalues below -falsify_tol * scale disprove the certificate.
  double falsify_tol = 1e-9;
  // Certified when the largest Gram margin is >= -margin_tol (scaled).
  double margin_tol = 1e-7;
  double sdp_tol = 1e-9;
};

// Test of M(mu) being an SOS matrix: z^T M(mu) z = b^T Q b with Q PSD and
// b = (z_a mu^beta), |beta| <= ceil(deg M / 2).
struct SosMatrixCertificate {
  std::string kind;  // "sos_concave", "sos_monotone", "sos_convex"
  int player = -1;
  bool certified = false;
  bool falsified = false;  // disproved by a sampled point
  std::vector<double> witness_point;
  std::vector<double> witness_direction;
  double witness_value = 0.0;  // z^T M z at the witness
  std::string sdp_status;
  double margin = 0.0;  // max t with Q - t I PSD, in units of M
  std::vector<std::pair<int, MultiIndex>> basis;  // (z index, mu monomial)
  Eigen::MatrixXd gram;

  Json ToJson() const;
};

SosMatrixCertificate CertifySosMatrix(const PolyMatrix& m,
                                      const CertifyOptions& options = {});

// A^T M A where M is indexed by the variables first, first + 1, ... of `s`
// (whole blocks) and A has one column e_a - e_last for each non-last action
// of each block: M restricted to the tangent space of the strategy set.
PolyMatrix TangentProjection(const PolyMatrix& m, const BlockStructure& s,
                             int first);
// u with the last action of every block replaced by 1 - (sum of the others),
// so that it agrees with u on the affine hull of the strategy set.
Polynomial EliminateLastActions(const Polynomial& u);
// Tangent projection of the Hessian of EliminateLastActions(u) over the
// player's own variables.
PolyMatrix TangentHessian(const Polynomial& u, int player);
// Tangent projection of SJ of the eliminated utilities over all variables.
PolyMatrix TangentSymmetrizedJacobian(const std::vector<Polynomial>& utilities);

// One certificate per player for -TangentHessian(u_i, i), other players'
// variables as parameters.
std::vector<SosMatrixCertificate> CertifySosConcave(
    const std::vector<Polynomial>& utilities, const CertifyOptions& options = {});
// -TangentSymmetrizedJacobian. For one player this is the same matrix as
// CertifySosConcave.
SosMatrixCertificate CertifySosMonotone(const std::vector<Polynomial>& utilities,
                                        const CertifyOptions& options = {});
// +H of a single polynomial, tangent-projected when it has a structure.
SosMatrixCertificate CertifySosConvex(const Polynomial& u,
                                      const CertifyOptions& options = {});

// One moment SDP at the minimal order over the strategy polytope; the point
// is read off the first moments. `exact` when that point is feasible and
// attains the bound within `tol`.
HierarchyResult SolveFirstLevel(const Polynomial& u,
                                const HierarchyOptions& options = {},
                                double tol = 1e-6);

// SolveFirstLevel after CertifySosConcave. Throws NotCertifiedError.
HierarchyResult SolveSosConcave(const Polynomial& u,
                                const HierarchyOptions& options = {},
                                const CertifyOptions& certify = {});

}  // namespace irsos

#endif  // IRSOS_STRUCTURE_H_
