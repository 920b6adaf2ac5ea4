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

// Probability functionals of a three-outcome measurement on two equiprobable
// hypotheses, recomputed directly from the POVM. These are the ground truth
// that the closed forms, the oracles and the LOCC construction are compared
// against.

#pragma once

#include <Eigen/Dense>

#include <array>

#include "mdisc/core.hpp"
#include "mdisc/optimizer.hpp"

namespace mdisc {

/// Conditioning probabilities below this are treated as zero; the conditional
/// error of an outcome that never fires is reported as 0.
inline constexpr double kNegligibleOutcome = 1e-14;
/// A margin constraint is met when its slack is at least -kFeasibilityTol.
inline constexpr double kFeasibilityTol = 1e-9;

struct DiscriminationReport {
  double p_success = 0.0;
  double p_error_given_1 = 0.0;  // P(rho2 | E1)
  double p_error_given_2 = 0.0;  // P(rho1 | E2)
  double p_mean_error = 0.0;
  double p_inconclusive = 0.0;
  /// joint[a][mu] = P(E_{mu+1}, rho_{a+1}) = tr[E rho] / 2.
  std::array<std::array<double, 3>, 2> joint{};
  bool psd_ok = false;
  bool complete_ok = false;
  std::array<int, 3> ranks{};

  /// Probability that outcome mu in {1, 2, 3} fires.
  double outcome_probability(int mu) const;
};

/// P(E, rho_a) = tr[E rho_a] / 2. Throws ValidationError for non-PSD E.
double joint_probability(const Observable2& e, int state_index, const StatePair& pair);

/// Throws ValidationError (naming the failing invariant) for a malformed POVM.
DiscriminationReport evaluate(const Povm3& povm, const StatePair& pair);

/// Same functionals for a POVM given as full matrices on a larger space,
/// evaluated against normalized state vectors.
DiscriminationReport evaluate_full(const std::array<Eigen::MatrixXcd, 3>& effects,
                                   const Eigen::VectorXcd& phi1, const Eigen::VectorXcd& phi2);

/// m - max(conditional errors) for Strong, m - p_mean_error for Weak.
double check_margin(const DiscriminationReport& report, const MarginCondition& cond);

inline bool is_feasible(double slack) { return slack >= -kFeasibilityTol; }

}  // namespace mdisc
