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

// Qubit operator algebra on the two-dimensional span of the hypotheses.
//
// Every operator on that span is written as alpha * I + beta . sigma, so the
// discrimination problem reduces to arithmetic on scalars and real 3-vectors.
// Density operators of pure states are (I + n . sigma) / 2 with |n| = 1.

#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>

namespace mdisc {

using Complex = std::complex<double>;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat2c = Eigen::Matrix2cd;

/// Tolerance for identities that hold exactly in real arithmetic.
inline constexpr double kExactTol = 1e-12;
/// Tolerance for PSD and completeness checks on computed POVMs.
inline constexpr double kPovmTol = 1e-10;

/// A normalized vector in C^2.
class PureState {
 public:
  /// Throws ValidationError unless |a|^2 + |b|^2 = 1 within kExactTol.
  PureState(Complex a, Complex b);

  /// Normalizes (a, b); throws ValidationError on the zero vector.
  static PureState normalized(Complex a, Complex b);

  const Complex& operator[](int i) const { return amp_[static_cast<std::size_t>(i)]; }
  Eigen::Vector2cd vector() const { return {amp_[0], amp_[1]}; }

  /// <this|other>
  Complex inner(const PureState& other) const;

  /// The same ray with its global phase multiplied by `phase` (|phase| = 1).
  PureState rephased(Complex phase) const;

 private:
  std::array<Complex, 2> amp_;
};

struct BlochVector {
  Vec3 n;
};

/// Hermitian operator alpha * I + beta . sigma.
struct Observable2 {
  double alpha = 0.0;
  Vec3 beta = Vec3::Zero();

  static Observable2 identity() { return {1.0, Vec3::Zero()}; }
  static Observable2 zero() { return {0.0, Vec3::Zero()}; }
  /// |psi><psi| expressed in the Pauli basis.
  static Observable2 projector(const PureState& psi);

  double min_eigenvalue() const { return alpha - beta.norm(); }
  double max_eigenvalue() const { return alpha + beta.norm(); }
  bool is_psd(double tol = kPovmTol) const { return min_eigenvalue() >= -tol; }
  /// Number of eigenvalues above `tol`.
  int rank(double tol = kPovmTol) const;

  Observable2 operator+(const Observable2& o) const { return {alpha + o.alpha, beta + o.beta}; }
  Observable2 operator-(const Observable2& o) const { return {alpha - o.alpha, beta - o.beta}; }
  Observable2 operator*(double k) const { return {alpha * k, beta * k}; }
};

/// Ordered three-outcome POVM: guess 1, guess 2, inconclusive.
struct Povm3 {
  Observable2 e1;
  Observable2 e2;
  Observable2 e3;

  const Observable2& operator[](int mu) const;

  /// Throws ValidationError naming the first failing invariant.
  void validate(double tol = kPovmTol) const;
  double completeness_error() const;
  bool all_psd(double tol = kPovmTol) const;
};

/// Two hypotheses with their overlap phase fixed so that <phi1|phi2> >= 0.
class StatePair {
 public:
  /// Rephases phi2; throws DomainError when |<phi1|phi2>| = 1.
  StatePair(const PureState& phi1, const PureState& phi2);

  /// Pair with the given fidelity whose Bloch vectors lie in the xz-plane,
  /// symmetric about the z axis: n1 = (sin t, 0, cos t), n2 = (-sin t, 0, cos t).
  static StatePair canonical(double fidelity);

  const PureState& phi1() const { return phi1_; }
  const PureState& phi2() const { return phi2_; }
  const Vec3& n1() const { return n1_; }
  const Vec3& n2() const { return n2_; }
  /// Bloch vector of state `index` in {1, 2}.
  const Vec3& n(int index) const;

  double fidelity() const { return fidelity_; }
  double S() const { return fidelity_ * fidelity_; }
  double T() const { return 1.0 - fidelity_ * fidelity_; }

  /// The pair with phi1 and phi2 exchanged.
  StatePair swapped() const { return StatePair(phi2_, phi1_); }

 private:
  PureState phi1_;
  PureState phi2_;
  Vec3 n1_;
  Vec3 n2_;
  double fidelity_;
};

/// n_k = <psi|sigma_k|psi>.
BlochVector bloch_from_state(const PureState& psi);

/// tr[E rho] for rho = (I + n . sigma) / 2.
double expectation(const Observable2& e, const BlochVector& n);
double expectation(const Observable2& e, const Vec3& n);

/// Householder reflection through the plane orthogonal to n1 - n2; swaps the
/// two Bloch vectors. Throws ValidationError when n1 = n2.
Mat3 reflection_about_bisector(const Vec3& n1, const Vec3& n2);
Mat3 reflection_about_bisector(const StatePair& pair);

/// alpha * I + sum_k beta_k sigma_k as a 2x2 matrix.
Mat2c operator_matrix(const Observable2& e);

/// Inverse of operator_matrix on the Hermitian part of `m`.
Observable2 observable_from_matrix(const Mat2c& m);

/// Pauli matrices sigma_x, sigma_y, sigma_z.
const std::array<Mat2c, 3>& pauli();

}  // namespace mdisc
