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

#include <gsl/gsl_poly.h>
#include <gtest/gtest.h>

#include "mdisc/errors.hpp"
#include "mdisc/optimizer.hpp"
#include "mdisc/oracle.hpp"
#include "mdisc/validator.hpp"
#include "support.hpp"

namespace mdisc {
namespace {

TEST(Polynomials, SpecExamples) {
  const double S = 0.81, T = 0.19, m = 0.1;
  const double edge = 0.5 / std::sqrt(T);
  const double want = 0.5 * (1.0 - std::sqrt(T) / (1.0 - 2.0 * m));
  EXPECT_NEAR(f_poly(edge, S, T, m), want, 1e-12);
  EXPECT_NEAR(want, 0.22757, 1e-5);
  EXPECT_NEAR(g_poly(edge, S, T, m), want, 1e-12);
  EXPECT_NEAR(f_poly(0.0, S, T, 0.3), (1.0 + 0.9) / 4.0, 1e-15);
  EXPECT_NEAR(g_poly(0.0, S, T, 0.3), (1.0 - 0.9) / 4.0, 1e-15);

  const double vertex = 1.0 / (2.0 * (1.0 - 0.9));
  EXPECT_NEAR(vertex, 5.0, 1e-12);
  EXPECT_GE(vertex, edge);

  const double y_max = reduced_params_strong(S, T, m).y;
  EXPECT_NEAR(g_poly(y_max, S, T, m), 0.0, 1e-12);
  const double y0 = 1.0 / (2.0 * (1.0 - 2.0 * m) * 1.9);
  EXPECT_NEAR(g_poly(y0, S, T, m), T / (4.0 * 1.9) * (1.0 - 1.0 / 0.64), 1e-12);
  EXPECT_NEAR(g_poly(y0, S, T, m), -0.0141, 1e-4);

  EXPECT_THROW(f_poly(0.0, S, T, 0.5), DomainError);
  EXPECT_THROW(g_poly(0.0, 0.5, 0.6, 0.1), DomainError);
}

// Roots of g from GSL, independent of the closed-form y_max.
TEST(Polynomials, GreaterRootOfGIsYMax) {
  std::mt19937_64 rng(30);
  for (int i = 0; i < 1000; ++i) {
    const double f = testing::uniform(rng, 0.01, 0.99);
    const double S = f * f, T = 1.0 - S;
    const double m = testing::uniform(rng, 0.0, critical_margin(f));
    const double rs = std::sqrt(S);
    double lo = 0.0, hi = 0.0;
    ASSERT_EQ(gsl_poly_solve_quadratic(T * (1.0 + rs), -T / (1.0 - 2.0 * m), (1.0 - rs) / 4.0, &lo,
                                       &hi),
              2);
    const double y0 = 1.0 / (2.0 * (1.0 - 2.0 * m) * (1.0 + rs));
    EXPECT_LE(lo, y0);
    EXPECT_GE(hi, y0);
    EXPECT_NEAR(hi, reduced_params_strong(S, T, m).y, 1e-12);
    EXPECT_LE(g_poly(y0, S, T, m), 1e-15);
  }
}

TEST(OracleReduced, SpecExamples) {
  EXPECT_NEAR(oracle_reduced(0.81, 0.19, 0.0, MarginKind::Strong, 4000).p_best, 0.1, 1e-8);
  EXPECT_NEAR(oracle_reduced(0.81, 0.19, 0.1, MarginKind::Strong, 4000).p_best, 0.225, 1e-8);
  EXPECT_NEAR(oracle_reduced(0.81, 0.19, 0.1, MarginKind::Weak, 4000).p_best, 0.4, 1e-8);
}

TEST(OracleReduced, RejectsBadInputs) {
  EXPECT_THROW(oracle_reduced(0.81, 0.19, 0.1, MarginKind::Strong, 999), DomainError);
  EXPECT_THROW(oracle_reduced(1.0, 0.0, 0.1, MarginKind::Strong, 1000), DomainError);
  EXPECT_THROW(oracle_reduced(0.81, 0.19, 1.5, MarginKind::Strong, 1000), DomainError);
}

TEST(OracleReduced, PointSatisfiesInvariantsAndConstraints) {
  const OracleResult r = oracle_reduced(0.49, 0.51, 0.05, MarginKind::Strong, 5000);
  ASSERT_TRUE(r.reduced.has_value());
  EXPECT_TRUE(r.feasible);
  EXPECT_LE(r.max_violation, 1e-8);
  EXPECT_LE(r.reduced->invariant_residual(), 1e-12);
  const StatePair pair = StatePair::canonical(0.7);
  const auto report = evaluate(build_povm(pair, *r.reduced), pair);
  EXPECT_NEAR(report.p_success, r.p_best, 1e-12);
  EXPECT_GE(check_margin(report, MarginCondition::make(MarginKind::Strong, 0.05)), -1e-8);
}

TEST(OracleReduced, NonnegativeXBranchNeverBeatsNegativeBranch) {
  std::mt19937_64 rng(31);
  for (int i = 0; i < 60; ++i) {
    const double f = testing::uniform(rng, 0.05, 0.99);
    const double S = f * f;
    const double m = testing::uniform(rng, 0.0, 0.999 * critical_margin(f));
    const OracleResult r = oracle_reduced(S, 1.0 - S, m, MarginKind::Strong, 2000);
    EXPECT_FALSE(r.nonnegative_x.feasible) << "F=" << f << " m=" << m;
    EXPECT_TRUE(r.negative_x.feasible);
  }
}

TEST(OracleGeneral, SpecExamples) {
  const StatePair pair = StatePair::canonical(0.9);
  EXPECT_NEAR(
      oracle_general(pair, MarginCondition::make(MarginKind::Strong, 0.1), 100000, 1).p_best, 0.225,
      1e-4);
  EXPECT_NEAR(
      oracle_general(pair, MarginCondition::make(MarginKind::Strong, 1.0), 40000, 2).p_best,
      0.7179449472, 1e-4);
  EXPECT_NEAR(oracle_general(StatePair::canonical(0.0), MarginCondition::make(MarginKind::Strong, 0.0),
                             40000, 3)
                  .p_best,
              1.0, 1e-6);
}

TEST(OracleGeneral, ReportedPointIsAdmissible) {
  std::mt19937_64 rng(32);
  const StatePair pair = testing::pair_with_fidelity(0.6, rng);
  const auto cond = MarginCondition::make(MarginKind::Weak, 0.04);
  const OracleResult r = oracle_general(pair, cond, 40000, 9);
  ASSERT_TRUE(r.feasible);
  const Povm3 povm = povm_from_raw(r.raw);
  const auto report = evaluate(povm, pair);
  EXPECT_NEAR(report.p_success, r.p_best, 1e-12);
  EXPECT_GE(check_margin(report, cond), -1e-8);
  EXPECT_LE(r.max_violation, 1e-8);
  EXPECT_NEAR(r.p_best, success_weak(0.6, 0.04), 1e-4);
}

TEST(OracleGeneral, DeterministicForSeedAndBudget) {
  const StatePair pair = StatePair::canonical(0.5);
  const auto cond = MarginCondition::make(MarginKind::Strong, 0.05);
  const OracleResult a = oracle_general(pair, cond, 20000, 77);
  const OracleResult b = oracle_general(pair, cond, 20000, 77);
  EXPECT_EQ(a.p_best, b.p_best);
  EXPECT_EQ(a.raw, b.raw);
  EXPECT_EQ(a.evaluations, b.evaluations);
  EXPECT_THROW(oracle_general(pair, cond, 9999, 1), DomainError);
}

// The admissible set is convex: mixtures of admissible POVMs stay admissible.
TEST(Feasibility, ConvexCombinationsStayFeasible) {
  std::mt19937_64 rng(33);
  std::normal_distribution<double> g;
  int checked = 0;
  while (checked < 300) {
    const double f = testing::uniform(rng, 0.0, 0.95);
    const StatePair pair = StatePair::canonical(f);
    const double m = testing::uniform(rng, 0.0, 0.5);
    const auto kind = checked % 2 ? MarginKind::Strong : MarginKind::Weak;
    const auto cond = MarginCondition::make(kind, m);
    std::array<double, 8> raw_a, raw_b;
    for (auto& v : raw_a) v = 0.4 * g(rng);
    for (auto& v : raw_b) v = 0.4 * g(rng);
    const Povm3 a = povm_from_raw(raw_a);
    const Povm3 b = povm_from_raw(raw_b);
    if (!is_feasible(check_margin(evaluate(a, pair), cond)) ||
        !is_feasible(check_margin(evaluate(b, pair), cond))) {
      continue;
    }
    const double lam = testing::uniform(rng, 0.0, 1.0);
    const Povm3 mix{a.e1 * lam + b.e1 * (1 - lam), a.e2 * lam + b.e2 * (1 - lam),
                    a.e3 * lam + b.e3 * (1 - lam)};
    EXPECT_TRUE(is_feasible(check_margin(evaluate(mix, pair), cond)));
    ++checked;
  }
}

}  // namespace
}  // namespace mdisc
