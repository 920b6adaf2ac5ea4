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

#include "mdisc/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mdisc/errors.hpp"

namespace mdisc {
namespace {

void check_fidelity(double fidelity) {
  if (!std::isfinite(fidelity) || fidelity < 0.0) {
    throw DomainError("fidelity must be a finite number in [0, 1)");
  }
  if (fidelity >= 1.0) {
    throw DomainError(
        "fidelity must be < 1: the problem assumes |<phi1|phi2>| != 1");
  }
}

void check_margin(double m) {
  if (!std::isfinite(m) || m < 0.0 || m > 1.0) {
    throw DomainError("error margin must lie in [0, 1]");
  }
}

void check_reduced_inputs(double S, double T, double m) {
  if (!(S >= 0.0) || !(S < 1.0) || std::abs(S + T - 1.0) > kExactTol) {
    throw DomainError("reduced constants require 0 <= S < 1 and S + T = 1");
  }
  check_margin(m);
  const double mc = 0.5 * (1.0 - std::sqrt(T));
  if (m > mc + kExactTol) {
    std::ostringstream os;
    os << "margin " << m << " exceeds the critical margin " << mc
       << "; the minimum-error measurement is optimal there";
    throw RegimeError(os.str());
  }
}

// Completes (alpha, x) from y using the saturated rank and completeness
// conditions, taking the x <= 0 branch.
ReducedParams complete_from_y(double S, double T, double y) {
  ReducedParams rp;
  rp.S = S;
  rp.T = T;
  rp.y = y;
  rp.alpha = T * y * y + 0.25;
  const double sqrt_s = std::sqrt(S);
  const double gap = std::max(0.0, 1.0 - 4.0 * T * y * y);
  rp.x = sqrt_s > 0.0 ? -gap / (4.0 * sqrt_s) : 0.0;
  return rp;
}

}  // namespace

MarginCondition MarginCondition::make(MarginKind kind, double m) {
  check_margin(m);
  return {kind, m};
}

std::string to_string(MarginKind kind) { return kind == MarginKind::Strong ? "strong" : "weak"; }

MarginKind parse_margin_kind(const std::string& text) {
  if (text == "strong") return MarginKind::Strong;
  if (text == "weak") return MarginKind::Weak;
  throw DomainError("margin condition must be 'strong' or 'weak', got '" + text + "'");
}

double ReducedParams::invariant_residual() const {
  const double r_alpha = std::abs(alpha - (T * y * y + 0.25));
  const double r_x = std::abs(std::sqrt(S) * std::abs(x) - 0.25 * (1.0 - 4.0 * T * y * y));
  const double r_y = T > 0.0 ? std::max(0.0, std::abs(y) - 0.5 / std::sqrt(T)) : 0.0;
  return std::max({r_alpha, r_x, r_y});
}

std::string to_string(Regime regime) {
  switch (regime) {
    case Regime::Unambiguous:
      return "unambiguous";
    case Regime::ErrorMargin:
      return "error-margin";
    case Regime::MinimumError:
      return "minimum-error";
  }
  return "unknown";
}

Regime regime_for(double fidelity, double m) {
  check_fidelity(fidelity);
  check_margin(m);
  if (m >= critical_margin(fidelity)) return Regime::MinimumError;
  return m == 0.0 ? Regime::Unambiguous : Regime::ErrorMargin;
}

double critical_margin(double fidelity) {
  check_fidelity(fidelity);
  return 0.5 * (1.0 - std::sqrt(1.0 - fidelity * fidelity));
}

double amplification_factor(double m) {
  if (!std::isfinite(m) || m < 0.0 || m >= 0.5) {
    throw DomainError("amplification factor is defined for 0 <= m < 1/2");
  }
  const double d = 1.0 - 2.0 * m;
  return (1.0 - m) / (d * d) * (1.0 + 2.0 * std::sqrt(m * (1.0 - m)));
}

double minimum_error_success(double fidelity) {
  check_fidelity(fidelity);
  return 0.5 * (1.0 + std::sqrt(1.0 - fidelity * fidelity));
}

double success_strong(double fidelity, double m) {
  check_fidelity(fidelity);
  check_margin(m);
  if (m >= critical_margin(fidelity)) return minimum_error_success(fidelity);
  return amplification_factor(m) * (1.0 - fidelity);
}

double success_weak(double fidelity, double m) {
  check_fidelity(fidelity);
  check_margin(m);
  if (m >= critical_margin(fidelity)) return minimum_error_success(fidelity);
  const double root = std::sqrt(m) + std::sqrt(1.0 - fidelity);
  return root * root;
}

double success(double fidelity, const MarginCondition& cond) {
  return cond.kind == MarginKind::Strong ? success_strong(fidelity, cond.m)
                                         : success_weak(fidelity, cond.m);
}

ReducedParams reduced_params_strong(double S, double T, double m) {
  check_reduced_inputs(S, T, m);
  const double y = (1.0 + 2.0 * std::sqrt(m * (1.0 - m))) /
                   (2.0 * (1.0 + std::sqrt(S)) * (1.0 - 2.0 * m));
  return complete_from_y(S, T, y);
}

ReducedParams reduced_params_weak(double S, double T, double m) {
  check_reduced_inputs(S, T, m);
  const double sqrt_s = std::sqrt(S);
  const double y = (1.0 + 2.0 * std::sqrt(m / (1.0 - sqrt_s))) / (2.0 * (1.0 + sqrt_s));
  return complete_from_y(S, T, y);
}

Povm3 build_povm(const StatePair& pair, const ReducedParams& rp) {
  const double residual = rp.invariant_residual();
  if (!(residual <= kExactTol)) {
    std::ostringstream os;
    os << "reduced parameters violate their invariants (residual " << residual << ")";
    throw ValidationError(os.str());
  }
  if (std::abs(rp.S - pair.S()) > kExactTol) {
    throw ValidationError("reduced parameters were computed for a different fidelity");
  }
  const Vec3& n1 = pair.n1();
  const Vec3& n2 = pair.n2();
  const Vec3 beta = rp.x * 0.5 * (n1 + n2) + rp.y * 0.5 * (n1 - n2);
  const Mat3 reflect = reflection_about_bisector(pair);

  Povm3 povm;
  povm.e1 = {rp.alpha, beta};
  povm.e2 = {rp.alpha, reflect * beta};
  povm.e3 = Observable2::identity() - povm.e1 - povm.e2;
  povm.validate();
  return povm;
}

Povm3 helstrom_povm(const StatePair& pair) {
  const Vec3 d = pair.n1() - pair.n2();
  const Vec3 u = d / d.norm();
  return {{0.5, 0.5 * u}, {0.5, -0.5 * u}, Observable2::zero()};
}

Povm3 optimal_povm(const StatePair& pair, const MarginCondition& cond) {
  check_margin(cond.m);
  const double fidelity = pair.fidelity();
  if (cond.m >= critical_margin(fidelity)) return helstrom_povm(pair);
  const ReducedParams rp = cond.kind == MarginKind::Strong
                               ? reduced_params_strong(pair.S(), pair.T(), cond.m)
                               : reduced_params_weak(pair.S(), pair.T(), cond.m);
  return build_povm(pair, rp);
}

}  // namespace mdisc
