// Copyright 2026 The mdisc Authors
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

#include "mdisc/validator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include "mdisc/errors.hpp"

namespace mdisc {
namespace {

// Fills the derived fields of a report from its joint table.
void finish(DiscriminationReport& r) {
  const auto& j = r.joint;
  r.p_success = j[0][0] + j[1][1];
  r.p_mean_error = j[1][0] + j[0][1];
  r.p_inconclusive = j[0][2] + j[1][2];
  const double p1 = j[0][0] + j[1][0];
  const double p2 = j[0][1] + j[1][1];
  r.p_error_given_1 = p1 < kNegligibleOutcome ? 0.0 : j[1][0] / p1;
  r.p_error_given_2 = p2 < kNegligibleOutcome ? 0.0 : j[0][1] / p2;
}

}  // namespace

double DiscriminationReport::outcome_probability(int mu) const {
  if (mu < 1 || mu > 3) throw ValidationError("outcome index must be 1, 2 or 3");
  const auto k = static_cast<std::size_t>(mu - 1);
  return joint[0][k] + joint[1][k];
}

double joint_probability(const Observable2& e, int state_index, const StatePair& pair) {
  if (!e.is_psd()) {
    std::ostringstream os;
    os << "operator is not positive semidefinite (min eigenvalue " << e.min_eigenvalue() << ")";
    throw ValidationError(os.str());
  }
  return 0.5 * expectation(e, pair.n(state_index));
}

DiscriminationReport evaluate(const Povm3& povm, const StatePair& pair) {
  povm.validate();
  DiscriminationReport r;
  r.psd_ok = true;
  r.complete_ok = true;
  for (int a = 0; a < 2; ++a) {
    for (int mu = 0; mu < 3; ++mu) {
      r.joint[static_cast<std::size_t>(a)][static_cast<std::size_t>(mu)] =
          joint_probability(povm[mu + 1], a + 1, pair);
    }
  }
  for (int mu = 0; mu < 3; ++mu) r.ranks[static_cast<std::size_t>(mu)] = povm[mu + 1].rank();
  finish(r);
  return r;
}

DiscriminationReport evaluate_full(const std::array<Eigen::MatrixXcd, 3>& effects,
                                   const Eigen::VectorXcd& phi1, const Eigen::VectorXcd& phi2) {
  const Eigen::Index dim = phi1.size();
  if (phi2.size() != dim) throw ValidationError("state vectors have different dimensions");
  if (std::abs(phi1.norm() - 1.0) > kExactTol || std::abs(phi2.norm() - 1.0) > kExactTol) {
    throw ValidationError("state vectors must be normalized");
  }
  DiscriminationReport r;
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t mu = 0; mu < 3; ++mu) {
    const Eigen::MatrixXcd& e = effects[mu];
    if (e.rows() != dim || e.cols() != dim) {
      throw ValidationError("POVM element E" + std::to_string(mu + 1) + " has the wrong shape");
    }
    if ((e - e.adjoint()).cwiseAbs().maxCoeff() > kPovmTol) {
      throw ValidationError("POVM element E" + std::to_string(mu + 1) + " is not Hermitian");
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(0.5 * (e + e.adjoint()),
                                                              Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& ev = eig.eigenvalues();
    if (ev.minCoeff() < -kPovmTol) {
      std::ostringstream os;
      os << "POVM element E" << mu + 1 << " is not positive semidefinite (min eigenvalue "
         << ev.minCoeff() << ")";
      throw ValidationError(os.str());
    }
    r.ranks[mu] = static_cast<int>((ev.array() > kPovmTol).count());
    r.joint[0][mu] = 0.5 * phi1.dot(e * phi1).real();
    r.joint[1][mu] = 0.5 * phi2.dot(e * phi2).real();
    sum += e;
  }
  if ((sum - Eigen::MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff() > kPovmTol) {
    throw ValidationError("POVM is not complete: E1 + E2 + E3 differs from the identity");
  }
  r.psd_ok = true;
  r.complete_ok = true;
  finish(r);
  return r;
}

double check_margin(const DiscriminationReport& report, const MarginCondition& cond) {
  if (cond.kind == MarginKind::Strong) {
    return cond.m - std::max(report.p_error_given_1, report.p_error_given_2);
  }
  return cond.m - report.p_mean_error;
}

}  // namespace mdisc
