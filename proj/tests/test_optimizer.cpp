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

#include "mdisc/errors.hpp"
#include "mdisc/optimizer.hpp"
#include "mdisc/validator.hpp"
#include "support.hpp"

namespace mdisc {
namespace {

using testing::joint;

// Conditional errors and mean error from explicit traces.
struct Errors {
  double given1, given2, mean, success;
};

Errors errors_of(const Povm3& povm, const StatePair& pair) {
  const double p11 = joint(povm.e1, pair.phi1());
  const double p12 = joint(povm.e1, pair.phi2());
  const double p21 = joint(povm.e2, pair.phi1());
  const double p22 = joint(povm.e2, pair.phi2());
  return {p12 / (p11 + p12), p21 / (p21 + p22), p12 + p21, p11 + p22};
}

TEST(CriticalMargin, SpecExamples) {
  EXPECT_NEAR(critical_margin(0.0), 0.0, 1e-15);
  EXPECT_NEAR(critical_margin(0.9), static_cast<double>(testing::ref_critical(0.9L)), 1e-15);
  EXPECT_NEAR(critical_margin(0.9), 0.2820550528, 1e-10);
  EXPECT_NEAR(critical_margin(0.6), 0.1, 1e-15);
  EXPECT_THROW(critical_margin(1.0), DomainError);
  EXPECT_THROW(critical_margin(-0.01), DomainError);
}

TEST(AmplificationFactor, SpecExamples) {
  EXPECT_DOUBLE_EQ(amplification_factor(0.0), 1.0);
  EXPECT_NEAR(amplification_factor(0.1), 2.25, 1e-14);
  EXPECT_NEAR(amplification_factor(0.25), 3.0 + 1.5 * std::sqrt(3.0), 1e-13);
  EXPECT_THROW(amplification_factor(0.5), DomainError);
}

TEST(Success, SpecExamples) {
  EXPECT_NEAR(success_strong(0.9, 0.0), 0.1, 1e-15);
  EXPECT_NEAR(success_strong(0.9, 1.0), 0.5 * (1.0 + std::sqrt(0.19)), 1e-15);
  EXPECT_NEAR(success_strong(0.9, 1.0), 0.7179449472, 1e-10);
  EXPECT_NEAR(success_strong(0.9, 0.1), 0.225, 1e-14);
  EXPECT_NEAR(success_weak(0.9, 0.0), 0.1, 1e-15);
  EXPECT_NEAR(success_weak(0.9, 0.1), 0.4, 1e-14);
  EXPECT_NEAR(success_weak(0.9, 0.5), 0.7179449472, 1e-10);
  EXPECT_THROW(success_strong(1.0, 0.1), DomainError);
  EXPECT_THROW(success_weak(0.5, 1.5), DomainError);
  EXPECT_THROW(success_weak(0.5, -0.1), DomainError);
}

TEST(Success, MatchesLongDoubleReference) {
  std::mt19937_64 rng(10);
  for (int i = 0; i < 1000; ++i) {
    const double f = testing::uniform(rng, 0.0, 0.999);
    const double m = testing::uniform(rng, 0.0, 1.0);
    EXPECT_NEAR(success_strong(f, m), static_cast<double>(testing::ref_strong(f, m)), 1e-12);
    EXPECT_NEAR(success_weak(f, m), static_cast<double>(testing::ref_weak(f, m)), 1e-12);
  }
}

TEST(Success, ContinuousAtCriticalMargin) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 500; ++i) {
    const double f = testing::uniform(rng, 0.0, 0.999);
    const double mc = critical_margin(f);
    const double pm = minimum_error_success(f);
    EXPECT_NEAR(success_strong(f, mc), pm, 1e-10);
    EXPECT_NEAR(success_weak(f, mc), pm, 1e-10);
    // Just below m_c the error-margin branch is in force.
    const double below = std::nextafter(mc, 0.0);
    EXPECT_NEAR(success_strong(f, below), pm, 1e-7);
    EXPECT_NEAR(success_weak(f, below), pm, 1e-7);
  }
}

TEST(Success, DominanceAndMonotonicity) {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 500; ++i) {
    const double f = testing::uniform(rng, 0.0, 0.99);
    double prev_s = 0.0;
    double prev_w = 0.0;
    for (int k = 0; k <= 50; ++k) {
      const double m = k / 50.0;
      const double ps = success_strong(f, m);
      const double pw = success_weak(f, m);
      EXPECT_GE(pw, ps - 1e-12);
      EXPECT_GE(ps, (1.0 - f) - 1e-12);
      EXPECT_GE(ps, prev_s - 1e-12);
      EXPECT_GE(pw, prev_w - 1e-12);
      prev_s = ps;
      prev_w = pw;
    }
    const double m = testing::uniform(rng, 0.0, 1.0);
    const double f2 = std::min(0.999, f + 0.01);
    EXPECT_LE(success_strong(f2, m), success_strong(f, m) + 1e-12);
    EXPECT_LE(success_weak(f2, m), success_weak(f, m) + 1e-12);
  }
}

TEST(Regime, Classification) {
  EXPECT_EQ(regime_for(0.9, 0.0), Regime::Unambiguous);
  EXPECT_EQ(regime_for(0.9, 0.1), Regime::ErrorMargin);
  EXPECT_EQ(regime_for(0.9, 0.3), Regime::MinimumError);
  EXPECT_EQ(regime_for(0.9, critical_margin(0.9)), Regime::MinimumError);
  EXPECT_EQ(to_string(Regime::MinimumError), "minimum-error");
}

TEST(ReducedParams, StrongSpecExamples) {
  const ReducedParams a = reduced_params_strong(0.81, 0.19, 0.0);
  EXPECT_NEAR(a.y, 1.0 / 3.8, 1e-12);
  EXPECT_NEAR(a.x, -1.0 / 3.8, 1e-12);
  EXPECT_NEAR(a.alpha, 1.0 / 3.8, 1e-12);
  EXPECT_NEAR(a.objective(), 0.1, 1e-12);
  const ReducedParams b = reduced_params_strong(0.36, 0.64, 0.1);
  EXPECT_NEAR(b.y, 0.625, 1e-12);
  EXPECT_THROW(reduced_params_strong(0.81, 0.19, 0.3), RegimeError);
}

TEST(ReducedParams, WeakSpecExamples) {
  EXPECT_NEAR(reduced_params_weak(0.81, 0.19, 0.0).y, 1.0 / 3.8, 1e-12);
  const ReducedParams w = reduced_params_weak(0.81, 0.19, 0.1);
  EXPECT_NEAR(w.y, 3.0 / 3.8, 1e-12);
  EXPECT_NEAR(w.objective(), 0.4, 1e-12);
  EXPECT_THROW(reduced_params_weak(0.81, 0.19, 0.29), RegimeError);
}

TEST(ReducedParams, InvariantsAndObjective) {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 1000; ++i) {
    const double f = testing::uniform(rng, 0.0, 0.99);
    const double S = f * f;
    const double T = 1.0 - S;
    const double m = testing::uniform(rng, 0.0, critical_margin(f));
    for (const bool strong : {true, false}) {
      const ReducedParams rp = strong ? reduced_params_strong(S, T, m) : reduced_params_weak(S, T, m);
      EXPECT_NEAR(rp.alpha, T * rp.y * rp.y + 0.25, 1e-12);
      EXPECT_NEAR(std::sqrt(S) * std::abs(rp.x), (1.0 - 4.0 * T * rp.y * rp.y) / 4.0, 1e-12);
      EXPECT_LE(std::abs(rp.y), 0.5 / std::sqrt(T) + 1e-12);
      EXPECT_LE(rp.x, 1e-15);
      const double want = strong ? success_strong(f, m) : success_weak(f, m);
      EXPECT_NEAR(rp.objective(), want, 1e-12);
    }
  }
}

TEST(BuildPovm, SpecExamples) {
  const StatePair pair = StatePair::canonical(0.9);
  const Povm3 zero = build_povm(pair, reduced_params_strong(pair.S(), pair.T(), 0.0));
  const Errors e0 = errors_of(zero, pair);
  EXPECT_NEAR(e0.given1, 0.0, 1e-10);
  EXPECT_NEAR(e0.given2, 0.0, 1e-10);
  const Povm3 tenth = build_povm(pair, reduced_params_strong(pair.S(), pair.T(), 0.1));
  const Errors e1 = errors_of(tenth, pair);
  EXPECT_NEAR(e1.success, 0.225, 1e-10);
  EXPECT_NEAR(e1.given1, 0.1, 1e-10);
  EXPECT_NEAR(e1.given2, 0.1, 1e-10);
}

TEST(BuildPovm, RejectsBrokenParams) {
  const StatePair pair = StatePair::canonical(0.9);
  ReducedParams rp = reduced_params_strong(pair.S(), pair.T(), 0.1);
  rp.alpha += 1e-6;
  EXPECT_THROW(build_povm(pair, rp), ValidationError);
  const ReducedParams other = reduced_params_strong(0.25, 0.75, 0.05);
  EXPECT_THROW(build_povm(pair, other), ValidationError);
}

TEST(Helstrom, SpecExamples) {
  const StatePair orth = StatePair::canonical(0.0);
  const Povm3 h0 = helstrom_povm(orth);
  EXPECT_NEAR(errors_of(h0, orth).success, 1.0, 1e-12);
  EXPECT_NEAR(joint(h0.e1, orth.phi1()), 0.5, 1e-12);
  EXPECT_NEAR(h0.e3.alpha, 0.0, 1e-12);

  const StatePair pair = StatePair::canonical(0.9);
  const Errors e = errors_of(helstrom_povm(pair), pair);
  EXPECT_NEAR(e.success, 0.7179449472, 1e-10);
  EXPECT_NEAR(e.given1, critical_margin(0.9), 1e-12);
  EXPECT_NEAR(e.given2, critical_margin(0.9), 1e-12);
}

class OptimalPovmProperties : public ::testing::TestWithParam<MarginKind> {};

TEST_P(OptimalPovmProperties, SaturationReconstructionRankAndSymmetry) {
  const MarginKind kind = GetParam();
  std::mt19937_64 rng(kind == MarginKind::Strong ? 14 : 15);
  for (int i = 0; i < 400; ++i) {
    const double f = testing::uniform(rng, 0.0, 0.99);
    const double m = i % 4 == 0 ? testing::uniform(rng, 0.0, 1.0)
                                : testing::uniform(rng, 0.0, critical_margin(f));
    const StatePair pair = testing::pair_with_fidelity(f, rng);
    const auto cond = MarginCondition::make(kind, m);
    const Povm3 povm = optimal_povm(pair, cond);
    const Errors e = errors_of(povm, pair);
    const double want = static_cast<double>(kind == MarginKind::Strong ? testing::ref_strong(f, m)
                                                                       : testing::ref_weak(f, m));
    EXPECT_NEAR(e.success, want, 1e-10) << "F=" << f << " m=" << m;
    if (m < critical_margin(f)) {
      if (kind == MarginKind::Strong) {
        if (m > 0.0) {
          EXPECT_NEAR(e.given1, m, 1e-9);
          EXPECT_NEAR(e.given2, m, 1e-9);
        }
      } else {
        EXPECT_NEAR(e.mean, m, 1e-9);
      }
    }
    for (int mu = 1; mu <= 3; ++mu) {
      EXPECT_GE(povm[mu].min_eigenvalue(), -1e-10);
      EXPECT_LE(povm[mu].rank(1e-10), 1) << "element " << mu;
    }
    const Povm3 swapped = optimal_povm(pair.swapped(), cond);
    EXPECT_NEAR(swapped.e1.alpha, povm.e2.alpha, 1e-10);
    EXPECT_LE((swapped.e1.beta - povm.e2.beta).norm(), 1e-10);
    EXPECT_LE((swapped.e2.beta - povm.e1.beta).norm(), 1e-10);
    EXPECT_NEAR(errors_of(swapped, pair.swapped()).success, e.success, 1e-10);
  }
}

INSTANTIATE_TEST_SUITE_P(BothConditions, OptimalPovmProperties,
                         ::testing::Values(MarginKind::Strong, MarginKind::Weak),
                         [](const auto& info) { return to_string(info.param); });

TEST(OptimalPovm, AtCriticalMarginUsesMinimumErrorMeasurement) {
  const StatePair pair = StatePair::canonical(0.7);
  const Povm3 p = optimal_povm(pair, MarginCondition::make(MarginKind::Strong, critical_margin(0.7)));
  EXPECT_NEAR(p.e3.alpha, 0.0, 1e-12);
  EXPECT_LE(p.e3.beta.norm(), 1e-12);
}

TEST(MarginCondition, ParsesAndValidates) {
  EXPECT_EQ(parse_margin_kind("strong"), MarginKind::Strong);
  EXPECT_EQ(parse_margin_kind("weak"), MarginKind::Weak);
  EXPECT_THROW(parse_margin_kind("medium"), DomainError);
  EXPECT_THROW(MarginCondition::make(MarginKind::Strong, 1.01), DomainError);
  EXPECT_THROW(MarginCondition::make(MarginKind::Weak, -0.01), DomainError);
}

}  // namespace
}  // namespace mdisc
