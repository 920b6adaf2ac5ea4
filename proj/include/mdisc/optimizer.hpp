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

// Closed-form optimum of two-state discrimination under an error margin.
//
// With equal priors and fidelity F = |<phi1|phi2>|, the best success
// probability interpolates between unambiguous discrimination (m = 0,
// p = 1 - F) and minimum-error discrimination (m >= m_c, p = (1 + sqrt(1 -
// F^2)) / 2). Below the critical margin the optimal POVM is described by three
// reduced coordinates (alpha, x, y): E1 = alpha + beta . sigma with
// beta = x (n1 + n2) / 2 + y (n1 - n2) / 2, and E2 is the mirror image of E1
// under the reflection exchanging n1 and n2.

#pragma once

#include <string>

#include "mdisc/core.hpp"

namespace mdisc {

enum class MarginKind { Strong, Weak };

/// Error-margin constraint. Strong bounds each conditional error
/// P(rho2 | E1), P(rho1 | E2); Weak bounds the mean error probability.
struct MarginCondition {
  MarginKind kind = MarginKind::Strong;
  double m = 0.0;

  /// Throws DomainError unless 0 <= m <= 1.
  static MarginCondition make(MarginKind kind, double m);
};

std::string to_string(MarginKind kind);
/// Accepts "strong" or "weak"; throws DomainError otherwise.
MarginKind parse_margin_kind(const std::string& text);

struct ReducedParams {
  double alpha = 0.0;
  double x = 0.0;
  double y = 0.0;
  double S = 0.0;
  double T = 1.0;

  /// alpha + S x + T y, the success probability of the symmetric POVM.
  double objective() const { return alpha + S * x + T * y; }
  /// Largest deviation from alpha = T y^2 + 1/4 and sqrt(S)|x| = (1 - 4 T y^2)/4,
  /// plus any excess of |y| over 1/(2 sqrt(T)).
  double invariant_residual() const;
};

/// Which closed-form branch applies to a (fidelity, margin) pair.
enum class Regime { Unambiguous, ErrorMargin, MinimumError };
std::string to_string(Regime regime);
Regime regime_for(double fidelity, double m);

/// m_c = (1 - sqrt(1 - F^2)) / 2.
double critical_margin(double fidelity);

/// A_m = (1 - m) / (1 - 2m)^2 * (1 + 2 sqrt(m (1 - m))), defined for 0 <= m < 1/2.
double amplification_factor(double m);

/// Helstrom success probability (1 + sqrt(1 - F^2)) / 2.
double minimum_error_success(double fidelity);

double success_strong(double fidelity, double m);
double success_weak(double fidelity, double m);
double success(double fidelity, const MarginCondition& cond);

/// Optimal reduced coordinates for 0 <= m <= m_c; RegimeError above m_c.
ReducedParams reduced_params_strong(double S, double T, double m);
ReducedParams reduced_params_weak(double S, double T, double m);

/// Assembles E1 = (alpha, beta), E2 = (alpha, O beta), E3 = I - E1 - E2.
/// Throws ValidationError when `rp` violates its invariants.
Povm3 build_povm(const StatePair& pair, const ReducedParams& rp);

/// Two-outcome projective measurement along the direction of n1 - n2.
Povm3 helstrom_povm(const StatePair& pair);

/// Optimal POVM for `cond`; minimum-error measurement once m >= m_c.
Povm3 optimal_povm(const StatePair& pair, const MarginCondition& cond);

}  // namespace mdisc
