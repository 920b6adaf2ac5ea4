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

#include "mdisc/core.hpp"

#include <cmath>
#include <sstream>

#include "mdisc/errors.hpp"

namespace mdisc {

PureState::PureState(Complex a, Complex b) : amp_{a, b} {
  const double norm2 = std::norm(a) + std::norm(b);
  if (!std::isfinite(norm2) || std::abs(norm2 - 1.0) > kExactTol) {
    std::ostringstream os;
    os << "pure state is not normalized (squared norm " << norm2 << ")";
    throw ValidationError(os.str());
  }
}

PureState PureState::normalized(Complex a, Complex b) {
  const double norm = std::sqrt(std::norm(a) + std::norm(b));
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw ValidationError("cannot normalize the zero vector");
  }
  return PureState(a / norm, b / norm);
}

Complex PureState::inner(const PureState& other) const {
  return std::conj(amp_[0]) * other.amp_[0] + std::conj(amp_[1]) * other.amp_[1];
}

PureState PureState::rephased(Complex phase) const {
  return PureState::normalized(amp_[0] * phase, amp_[1] * phase);
}

Observable2 Observable2::projector(const PureState& psi) {
  return {0.5, 0.5 * bloch_from_state(psi).n};
}

int Observable2::rank(double tol) const {
  return (min_eigenvalue() > tol ? 1 : 0) + (max_eigenvalue() > tol ? 1 : 0);
}

const Observable2& Povm3::operator[](int mu) const {
  switch (mu) {
    case 1:
      return e1;
    case 2:
      return e2;
    case 3:
      return e3;
    default:
      throw ValidationError("POVM outcome index must be 1, 2 or 3");
  }
}

double Povm3::completeness_error() const {
  const Observable2 sum = e1 + e2 + e3;
  return std::max(std::abs(sum.alpha - 1.0), sum.beta.cwiseAbs().maxCoeff());
}

bool Povm3::all_psd(double tol) const {
  return e1.is_psd(tol) && e2.is_psd(tol) && e3.is_psd(tol);
}

void Povm3::validate(double tol) const {
  for (int mu = 1; mu <= 3; ++mu) {
    const Observable2& e = (*this)[mu];
    if (!std::isfinite(e.alpha) || !e.beta.allFinite()) {
      throw ValidationError("POVM element E" + std::to_string(mu) + " is not finite");
    }
    if (!e.is_psd(tol)) {
      std::ostringstream os;
      os << "POVM element E" << mu << " is not positive semidefinite (min eigenvalue "
         << e.min_eigenvalue() << ")";
      throw ValidationError(os.str());
    }
  }
  if (completeness_error() > tol) {
    std::ostringstream os;
    os << "POVM is not complete: E1 + E2 + E3 differs from identity by "
       << completeness_error();
    throw ValidationError(os.str());
  }
}

StatePair::StatePair(const PureState& phi1, const PureState& phi2)
    : phi1_(phi1), phi2_(phi2) {
  const Complex overlap = phi1.inner(phi2);
  fidelity_ = std::abs(overlap);
  if (fidelity_ >= 1.0 - kExactTol) {
    throw DomainError(
        "states with |<phi1|phi2>| = 1 cannot be discriminated; the problem "
        "assumes |<phi1|phi2>| != 1");
  }
  if (fidelity_ > 0.0) {
    phi2_ = phi2.rephased(std::conj(overlap) / fidelity_);
  }
  n1_ = bloch_from_state(phi1_).n;
  n2_ = bloch_from_state(phi2_).n;
}

StatePair StatePair::canonical(double fidelity) {
  if (!(fidelity >= 0.0) || !(fidelity < 1.0)) {
    throw DomainError(
        "fidelity must lie in [0, 1); the problem assumes |<phi1|phi2>| != 1");
  }
  // cos(theta) = fidelity, states at polar angles +-theta in the xz-plane.
  const double theta = std::acos(fidelity);
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  return StatePair(PureState::normalized(c, s), PureState::normalized(c, -s));
}

const Vec3& StatePair::n(int index) const {
  if (index == 1) return n1_;
  if (index == 2) return n2_;
  throw ValidationError("state index must be 1 or 2");
}

BlochVector bloch_from_state(const PureState& psi) {
  const Complex cross = std::conj(psi[0]) * psi[1];
  return {Vec3(2.0 * cross.real(), 2.0 * cross.imag(), std::norm(psi[0]) - std::norm(psi[1]))};
}

double expectation(const Observable2& e, const Vec3& n) { return e.alpha + e.beta.dot(n); }

double expectation(const Observable2& e, const BlochVector& n) { return expectation(e, n.n); }

Mat3 reflection_about_bisector(const Vec3& n1, const Vec3& n2) {
  const Vec3 d = n1 - n2;
  const double len = d.norm();
  if (len < kExactTol) {
    throw ValidationError("reflection about the bisector is undefined for identical Bloch vectors");
  }
  const Vec3 u = d / len;
  return Mat3::Identity() - 2.0 * u * u.transpose();
}

Mat3 reflection_about_bisector(const StatePair& pair) {
  return reflection_about_bisector(pair.n1(), pair.n2());
}

const std::array<Mat2c, 3>& pauli() {
  static const std::array<Mat2c, 3> sigma = [] {
    const Complex i(0.0, 1.0);
    Mat2c x, y, z;
    x << 0, 1, 1, 0;
    y << 0, -i, i, 0;
    z << 1, 0, 0, -1;
    return std::array<Mat2c, 3>{x, y, z};
  }();
  return sigma;
}

Mat2c operator_matrix(const Observable2& e) {
  const auto& s = pauli();
  Mat2c m = e.alpha * Mat2c::Identity();
  for (int k = 0; k < 3; ++k) m += e.beta[k] * s[static_cast<std::size_t>(k)];
  return m;
}

Observable2 observable_from_matrix(const Mat2c& m) {
  const auto& s = pauli();
  Observable2 e;
  e.alpha = 0.5 * m.trace().real();
  for (int k = 0; k < 3; ++k) {
    e.beta[k] = 0.5 * (s[static_cast<std::size_t>(k)] * m).trace().real();
  }
  return e;
}

}  // namespace mdisc
