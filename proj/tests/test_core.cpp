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

#include <gtest/gtest.h>

#include "mdisc/core.hpp"
#include "mdisc/errors.hpp"
#include "support.hpp"

namespace mdisc {
namespace {

using testing::C;

constexpr double kTol = 1e-12;

void expect_vec(const Vec3& got, const Vec3& want, double tol = kTol) {
  for (int k = 0; k < 3; ++k) EXPECT_NEAR(got[k], want[k], tol) << "component " << k;
}

TEST(PureState, RejectsUnnormalizedAmplitudes) {
  EXPECT_THROW(PureState(1.0, 1.0), ValidationError);
  EXPECT_THROW(PureState::normalized(0.0, 0.0), ValidationError);
  EXPECT_NO_THROW(PureState(C(0.6, 0.0), C(0.0, 0.8)));
}

TEST(BlochFromState, BasisAndSuperposition) {
  expect_vec(bloch_from_state(PureState(1.0, 0.0)).n, Vec3(0, 0, 1));
  const double h = 1.0 / std::sqrt(2.0);
  expect_vec(bloch_from_state(PureState(h, h)).n, Vec3(1, 0, 0));
}

TEST(BlochFromState, TiltedState) {
  const double theta = std::acos(0.8);
  const PureState psi(std::cos(theta / 2), std::sin(theta / 2));
  expect_vec(bloch_from_state(psi).n, Vec3(0.6, 0, 0.8));
}

TEST(BlochFromState, MatchesPauliExpectations) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 200; ++i) {
    const PureState psi = testing::random_state(rng);
    const Vec3 n = bloch_from_state(psi).n;
    for (int k = 0; k < 3; ++k) {
      EXPECT_NEAR(n[k], testing::sandwich(testing::sigma(k), psi.vector()), kTol);
    }
    EXPECT_NEAR(n.norm(), 1.0, kTol);
  }
}

TEST(Expectation, SpecExamples) {
  EXPECT_NEAR(expectation(Observable2::identity(), Vec3(0.3, -0.4, 0.1)), 1.0, kTol);
  const Observable2 up{0.5, Vec3(0, 0, 0.5)};
  EXPECT_NEAR(expectation(up, Vec3(0, 0, 1)), 1.0, kTol);
  EXPECT_NEAR(expectation(up, Vec3(0.6, 0, 0.8)), 0.9, kTol);
  // Same value from the 2x2 trace against rho = (I + n.sigma) / 2.
  const testing::M2 rho = 0.5 * testing::dense(1.0, Vec3(0.6, 0, 0.8));
  EXPECT_NEAR((testing::dense(up) * rho).trace().real(), 0.9, kTol);
}

TEST(Expectation, ProjectorAgainstOwnBlochVectorIsOne) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 500; ++i) {
    const PureState psi = testing::random_state(rng);
    EXPECT_NEAR(expectation(Observable2::projector(psi), bloch_from_state(psi)), 1.0, kTol);
  }
}

TEST(Expectation, LinearInBothArguments) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int i = 0; i < 200; ++i) {
    const Observable2 a{g(rng), Vec3(g(rng), g(rng), g(rng))};
    const Observable2 b{g(rng), Vec3(g(rng), g(rng), g(rng))};
    const Vec3 n1(g(rng), g(rng), g(rng));
    const Vec3 n2(g(rng), g(rng), g(rng));
    const double k = g(rng);
    EXPECT_NEAR(expectation(a + b * k, n1), expectation(a, n1) + k * expectation(b, n1), 1e-11);
    const Vec3 mix = 0.3 * n1 + 0.7 * n2;
    EXPECT_NEAR(expectation(a, mix), 0.3 * expectation(a, n1) + 0.7 * expectation(a, n2), 1e-11);
  }
}

TEST(Reflection, RejectsIdenticalVectors) {
  EXPECT_THROW(reflection_about_bisector(Vec3(0, 0, 1), Vec3(0, 0, 1)), ValidationError);
}

TEST(Reflection, SpecExamples) {
  const Mat3 want = Vec3(-1, 1, 1).asDiagonal();
  EXPECT_LE((reflection_about_bisector(Vec3(1, 0, 0), Vec3(-1, 0, 0)) - want).cwiseAbs().maxCoeff(),
            kTol);
  EXPECT_LE(
      (reflection_about_bisector(Vec3(0.6, 0, 0.8), Vec3(-0.6, 0, 0.8)) - want).cwiseAbs().maxCoeff(),
      kTol);
}

TEST(Reflection, OrthogonalWithDeterminantMinusOneAndSwapsVectors) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 300; ++i) {
    const Vec3 n1 = bloch_from_state(testing::random_state(rng)).n;
    const Vec3 n2 = bloch_from_state(testing::random_state(rng)).n;
    const Mat3 o = reflection_about_bisector(n1, n2);
    EXPECT_LE((o.transpose() * o - Mat3::Identity()).cwiseAbs().maxCoeff(), kTol);
    EXPECT_NEAR(o.determinant(), -1.0, kTol);
    expect_vec(o * n1, n2, 1e-11);
  }
}

TEST(OperatorMatrix, SpecExamples) {
  EXPECT_LE((operator_matrix(Observable2::identity()) - Mat2c::Identity()).cwiseAbs().maxCoeff(),
            kTol);
  Mat2c z;
  z << 1, 0, 0, -1;
  EXPECT_LE((operator_matrix({0.0, Vec3(0, 0, 1)}) - z).cwiseAbs().maxCoeff(), kTol);
  Mat2c plus;
  plus << 0.5, 0.5, 0.5, 0.5;
  EXPECT_LE((operator_matrix({0.5, Vec3(0.5, 0, 0)}) - plus).cwiseAbs().maxCoeff(), kTol);
}

TEST(OperatorMatrix, AgreesWithPauliSumAndEigenvalues) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int i = 0; i < 300; ++i) {
    const Observable2 e{g(rng), Vec3(g(rng), g(rng), g(rng))};
    const Mat2c m = operator_matrix(e);
    EXPECT_LE((m - testing::dense(e)).cwiseAbs().maxCoeff(), kTol);
    const Eigen::SelfAdjointEigenSolver<Mat2c> es(m);
    EXPECT_NEAR(es.eigenvalues()[0], e.alpha - e.beta.norm(), kTol);
    EXPECT_NEAR(es.eigenvalues()[1], e.alpha + e.beta.norm(), kTol);
    const Observable2 back = observable_from_matrix(m);
    EXPECT_NEAR(back.alpha, e.alpha, kTol);
    expect_vec(back.beta, e.beta);
  }
}

TEST(Observable2, PsdIffAlphaDominatesBeta) {
  EXPECT_TRUE((Observable2{0.5, Vec3(0.3, 0.4, 0)}).is_psd());
  EXPECT_FALSE((Observable2{0.49, Vec3(0.3, 0.4, 0)}).is_psd());
  EXPECT_EQ((Observable2{0.5, Vec3(0.3, 0.4, 0)}).rank(), 1);
  EXPECT_EQ(Observable2::identity().rank(), 2);
  EXPECT_EQ(Observable2::zero().rank(), 0);
}

TEST(Povm3, ValidateNamesFailingInvariant) {
  const Povm3 ok{Observable2::zero(), Observable2::zero(), Observable2::identity()};
  EXPECT_NO_THROW(ok.validate());
  const Povm3 negative{{0.1, Vec3(0, 0, 0.2)}, Observable2::zero(), {0.9, Vec3(0, 0, -0.2)}};
  try {
    negative.validate();
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("E1"), std::string::npos);
  }
  const Povm3 incomplete{Observable2::zero(), Observable2::zero(), {0.9, Vec3::Zero()}};
  try {
    incomplete.validate();
    FAIL() << "expected ValidationError";
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("complete"), std::string::npos);
  }
}

TEST(StatePair, FidelityOneRejectedWithAssumptionNamed) {
  const PureState a(1.0, 0.0);
  try {
    StatePair p(a, a.rephased(C(0.0, 1.0)));
    FAIL() << "expected DomainError";
  } catch (const DomainError& e) {
    EXPECT_NE(std::string(e.what()).find("|<phi1|phi2>| != 1"), std::string::npos);
  }
  EXPECT_THROW(StatePair::canonical(1.0), DomainError);
  EXPECT_THROW(StatePair::canonical(-0.1), DomainError);
}

TEST(StatePair, PhaseFixedAndConstantsConsistent) {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 200; ++i) {
    const double f = testing::uniform(rng, 0.0, 0.99);
    const StatePair p = testing::pair_with_fidelity(f, rng);
    const C ov = p.phi1().inner(p.phi2());
    EXPECT_NEAR(ov.imag(), 0.0, kTol);
    EXPECT_GE(ov.real(), -kTol);
    EXPECT_NEAR(p.fidelity(), f, 1e-10);
    EXPECT_NEAR(p.S() + p.T(), 1.0, kTol);
    EXPECT_NEAR(p.n1().dot(p.n2()), 2.0 * p.S() - 1.0, 1e-10);
  }
}

TEST(StatePair, CanonicalFrameIsSymmetricAboutZ) {
  const StatePair p = StatePair::canonical(0.8);
  expect_vec(p.n1(), Vec3(0.6, 0, 0.8));
  expect_vec(p.n2(), Vec3(-0.6, 0, 0.8));
  EXPECT_NEAR(std::abs(p.phi1().inner(p.phi2())), 0.8, kTol);
}

}  // namespace
}  // namespace mdisc
