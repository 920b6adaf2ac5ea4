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

// Reference computations shared by the tests. Nothing here calls into the
// library's closed forms; operators are built from explicit Pauli matrices
// and probabilities from explicit traces.

#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <random>

#include "mdisc/core.hpp"

namespace mdisc::testing {

using C = std::complex<double>;
using M2 = Eigen::Matrix2cd;

inline M2 sigma(int k) {
  M2 s;
  switch (k) {
    case 0:
      s << 0, 1, 1, 0;
      break;
    case 1:
      s << 0, C(0, -1), C(0, 1), 0;
      break;
    default:
      s << 1, 0, 0, -1;
  }
  return s;
}

inline M2 dense(double alpha, const Vec3& beta) {
  M2 m = alpha * M2::Identity();
  for (int k = 0; k < 3; ++k) m += beta[k] * sigma(k);
  return m;
}

inline M2 dense(const Observable2& e) { return dense(e.alpha, e.beta); }

/// <psi|M|psi>
inline double sandwich(const M2& m, const Eigen::Vector2cd& psi) {
  return (psi.adjoint() * m * psi)(0, 0).real();
}

/// P(E, rho_a) = <phi_a|E|phi_a> / 2 computed from amplitudes.
inline double joint(const Observable2& e, const PureState& phi) {
  return 0.5 * sandwich(dense(e), phi.vector());
}

/// Closed forms evaluated in long double straight from their definitions.
inline long double ref_critical(long double f) { return 0.5L * (1.0L - std::sqrt(1.0L - f * f)); }
inline long double ref_helstrom(long double f) { return 0.5L * (1.0L + std::sqrt(1.0L - f * f)); }
inline long double ref_strong(long double f, long double m) {
  if (m >= ref_critical(f)) return ref_helstrom(f);
  const long double a = (1.0L - m) / ((1.0L - 2.0L * m) * (1.0L - 2.0L * m)) *
                        (1.0L + 2.0L * std::sqrt(m * (1.0L - m)));
  return a * (1.0L - f);
}
inline long double ref_weak(long double f, long double m) {
  if (m >= ref_critical(f)) return ref_helstrom(f);
  const long double r = std::sqrt(m) + std::sqrt(1.0L - f);
  return r * r;
}

inline PureState random_state(std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  return PureState::normalized(C(g(rng), g(rng)), C(g(rng), g(rng)));
}

/// Pair at a prescribed fidelity in an arbitrary frame.
inline StatePair pair_with_fidelity(double f, std::mt19937_64& rng) {
  const PureState a = random_state(rng);
  const Eigen::Vector2cd v = a.vector();
  const Eigen::Vector2cd w(-std::conj(v[1]), std::conj(v[0]));
  std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
  const Eigen::Vector2cd b =
      f * v * std::polar(1.0, phase(rng)) + std::sqrt(1.0 - f * f) * w * std::polar(1.0, phase(rng));
  return StatePair(a, PureState::normalized(b[0], b[1]));
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace mdisc::testing
