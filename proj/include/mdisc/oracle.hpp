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

// Numerical maximization of the error-margin problem, independent of the
// closed forms.
//
// oracle_reduced scans the one-dimensional reduced problem in y on both sign
// branches of x. oracle_general searches all eight Pauli coefficients of
// (E1, E2) with a quadratic-penalty Nelder-Mead and makes no symmetry or
// rank assumption.

#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "mdisc/core.hpp"
#include "mdisc/optimizer.hpp"

namespace mdisc {

/// T (1 - sqrt S) y^2 - T y / (1 - 2m) + (1 + sqrt S) / 4: the strong
/// constraint on the x >= 0 branch, divided by (1 - 2m).
double f_poly(double y, double S, double T, double m);
/// T (1 + sqrt S) y^2 - T y / (1 - 2m) + (1 - sqrt S) / 4: the same on x < 0.
double g_poly(double y, double S, double T, double m);

struct BranchScan {
  bool feasible = false;
  double p_best = 0.0;
  double y = 0.0;
};

struct OracleResult {
  double p_best = 0.0;
  /// Set by oracle_reduced when a feasible reduced point was found.
  std::optional<ReducedParams> reduced;
  /// (alpha1, beta1, alpha2, beta2) of the best point found.
  std::array<double, 8> raw{};
  long evaluations = 0;
  bool feasible = false;
  /// Largest margin-constraint violation at the reported point.
  double max_violation = 0.0;
  /// Per-branch scans (reduced mode only).
  BranchScan negative_x;
  BranchScan nonnegative_x;
};

/// Grid scan of y in [-1/(2 sqrt T), 1/(2 sqrt T)] with grid_n points per
/// branch, refined by bisection on the active constraint. grid_n >= 1000.
OracleResult oracle_reduced(double S, double T, double m, MarginKind kind, long grid_n);

/// Multi-start penalty search over (alpha1, beta1, alpha2, beta2). PSD of E1,
/// E2 is enforced by raising alpha to |beta| and E1 + E2 <= I by rescaling;
/// margin constraints are penalized with weights 10^k, k = 0..19.
/// budget >= 10^4 objective evaluations. Deterministic given (budget, seed).
OracleResult oracle_general(const StatePair& pair, const MarginCondition& cond, long budget,
                            std::uint64_t seed);

/// Maps eight raw coefficients onto a POVM (E3 = I - E1 - E2) exactly as the
/// general oracle does.
Povm3 povm_from_raw(const std::array<double, 8>& raw);

}  // namespace mdisc
