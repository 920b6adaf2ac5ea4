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

#include "mdisc/oracle.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_deriv.h>
#include <gsl/gsl_roots.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "mdisc/errors.hpp"
#include "mdisc/parallel.hpp"
#include "simplex.hpp"

namespace mdisc {
namespace {

constexpr double kOracleFeasTol = 1e-8;
constexpr int kPenaltyRounds = 20;
constexpr int kGeneralStarts = 8;
constexpr double kTangentTol = 1e-14;

void check_reduced_domain(double S, double T, double m) {
  if (!(S >= 0.0) || !(S < 1.0) || std::abs(S + T - 1.0) > kExactTol) {
    throw DomainError("reduced constants require 0 <= S < 1 and S + T = 1");
  }
  if (!(m >= 0.0) || !(m < 0.5)) throw DomainError("polynomial requires 0 <= m < 1/2");
}

// The reduced problem on one sign branch of x, as a function of y.
struct ReducedBranch {
  double S, T, m;
  double sign;  // +1 for x >= 0, -1 for x < 0
  MarginKind kind;

  double sx(double y) const {
    const double gap = std::max(0.0, 1.0 - 4.0 * T * y * y);
    return sign * std::sqrt(S) * gap / 4.0;
  }
  double alpha(double y) const { return T * y * y + 0.25; }
  double objective(double y) const { return alpha(y) + sx(y) + T * y; }
  double constraint(double y) const {
    const double a_sx = alpha(y) + sx(y);
    if (kind == MarginKind::Strong) return (1.0 - 2.0 * m) * a_sx - T * y;
    return a_sx - T * y - m;
  }
  bool feasible(double y) const { return constraint(y) <= 0.0; }
};

// Feasible end of [inside, outside] where the constraint changes sign.
double bisect_boundary(const ReducedBranch& b, double inside, double outside) {
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (inside + outside);
    if (mid == inside || mid == outside) break;
    (b.feasible(mid) ? inside : outside) = mid;
  }
  return inside;
}

// Minimizer of the (convex) constraint inside [lo, hi]: the root of its
// numerical derivative.
double constraint_minimizer(const ReducedBranch& b, double lo, double hi, long& evaluations) {
  struct Ctx {
    const ReducedBranch* branch;
    long* evaluations;
  } ctx{&b, &evaluations};
  gsl_function c;
  c.function = [](double y, void* p) {
    auto* ctx = static_cast<Ctx*>(p);
    ++*ctx->evaluations;
    return ctx->branch->constraint(y);
  };
  c.params = &ctx;
  gsl_function slope;
  slope.function = [](double y, void* p) {
    double d = 0.0, abserr = 0.0;
    gsl_deriv_central(static_cast<gsl_function*>(p), y, 1e-4, &d, &abserr);
    return d;
  };
  slope.params = &c;
  gsl_error_handler_t* old = gsl_set_error_handler_off();
  double best = 0.5 * (lo + hi);
  gsl_root_fsolver* s = gsl_root_fsolver_alloc(gsl_root_fsolver_brent);
  if (gsl_root_fsolver_set(s, &slope, lo, hi) == GSL_SUCCESS) {
    for (int it = 0; it < 200; ++it) {
      if (gsl_root_fsolver_iterate(s) != GSL_SUCCESS) break;
      best = gsl_root_fsolver_root(s);
      if (gsl_root_test_interval(gsl_root_fsolver_x_lower(s), gsl_root_fsolver_x_upper(s), 0.0,
                                 1e-15) == GSL_SUCCESS) {
        break;
      }
    }
  }
  gsl_root_fsolver_free(s);
  gsl_set_error_handler(old);
  return best;
}

BranchScan scan_branch(const ReducedBranch& b, long grid_n, long& evaluations) {
  const double ymax = 0.5 / std::sqrt(b.T);
  const auto y_at = [&](long k) {
    return -ymax + 2.0 * ymax * static_cast<double>(k) / static_cast<double>(grid_n - 1);
  };
  BranchScan scan;
  long best_k = -1;
  long low_k = 0;
  double low_c = 0.0;
  for (long k = 0; k < grid_n; ++k) {
    const double y = y_at(k);
    ++evaluations;
    const double c = b.constraint(y);
    if (k == 0 || c < low_c) {
      low_k = k;
      low_c = c;
    }
    if (c > 0.0) continue;
    const double p = b.objective(y);
    if (best_k < 0 || p > scan.p_best) {
      best_k = k;
      scan.p_best = p;
      scan.y = y;
    }
  }
  if (best_k < 0) {
    // A feasible set thinner than the grid spacing: try the constraint minimum.
    if (low_k == 0 || low_k == grid_n - 1) return scan;
    const double y = constraint_minimizer(b, y_at(low_k - 1), y_at(low_k + 1), evaluations);
    if (b.constraint(y) > kTangentTol) return scan;
    scan.feasible = true;
    scan.p_best = b.objective(y);
    scan.y = y;
    return scan;
  }
  scan.feasible = true;
  // The objective is convex in y, so the maximum over the feasible interval
  // sits at one of its ends; refine toward whichever neighbor is infeasible.
  for (const long nb : {best_k - 1, best_k + 1}) {
    if (nb < 0 || nb >= grid_n) continue;
    const double y_nb = y_at(nb);
    if (b.feasible(y_nb)) continue;
    const double y = bisect_boundary(b, y_at(best_k), y_nb);
    evaluations += 200;
    const double p = b.objective(y);
    if (p > scan.p_best) {
      scan.p_best = p;
      scan.y = y;
    }
  }
  return scan;
}

struct RawPoint {
  double a1, a2;
  Vec3 b1, b2;
};

RawPoint map_raw(const double* p) {
  RawPoint r;
  r.b1 = Vec3(p[1], p[2], p[3]);
  r.b2 = Vec3(p[5], p[6], p[7]);
  r.a1 = std::max(p[0], r.b1.norm());
  r.a2 = std::max(p[4], r.b2.norm());
  const double top = r.a1 + r.a2 + (r.b1 + r.b2).norm();
  if (top > 1.0) {
    r.a1 /= top;
    r.a2 /= top;
    r.b1 /= top;
    r.b2 /= top;
  }
  return r;
}

struct GeneralProblem {
  Vec3 n1, n2;
  MarginCondition cond;

  double success(const RawPoint& r) const {
    return 0.5 * (r.a1 + r.b1.dot(n1) + r.a2 + r.b2.dot(n2));
  }
  // Positive parts of the margin constraints in joint-probability units.
  double violation_sq(const RawPoint& r, double* worst) const {
    const Vec3 sum = n1 + n2;
    double v_sq = 0.0;
    double v_max = 0.0;
    auto add = [&](double v) {
      v_max = std::max(v_max, v);
      if (v > 0.0) v_sq += v * v;
    };
    const double err1 = 0.5 * (r.a1 + r.b1.dot(n2));
    const double err2 = 0.5 * (r.a2 + r.b2.dot(n1));
    if (cond.kind == MarginKind::Strong) {
      add(err1 - cond.m * 0.5 * (2.0 * r.a1 + r.b1.dot(sum)));
      add(err2 - cond.m * 0.5 * (2.0 * r.a2 + r.b2.dot(sum)));
    } else {
      add(err1 + err2 - cond.m);
    }
    if (worst) *worst = v_max;
    return v_sq;
  }
};

struct StartOutcome {
  bool feasible = false;
  double p = 0.0;
  double violation = 0.0;
  std::array<double, 8> raw{};
  long evaluations = 0;
};

std::array<double, 8> mapped_array(const RawPoint& r) {
  return {r.a1, r.b1[0], r.b1[1], r.b1[2], r.a2, r.b2[0], r.b2[1], r.b2[2]};
}

StartOutcome run_start(const GeneralProblem& prob, long budget, std::uint64_t seed,
                       std::size_t index) {
  auto rng = substream(seed, index);
  std::normal_distribution<double> gauss;
  Eigen::VectorXd x(8);
  for (int block = 0; block < 2; ++block) {
    Vec3 b(gauss(rng), gauss(rng), gauss(rng));
    b *= 0.5 * std::cbrt(uniform01(rng)) / std::max(b.norm(), 1e-300);
    x[4 * block] = 0.5 * uniform01(rng);
    x.segment<3>(4 * block + 1) = b;
  }

  StartOutcome out;
  const long per_round = std::max<long>(50, budget / kPenaltyRounds);
  double weight = 1.0;
  double step = 0.2;
  for (int round = 0; round < kPenaltyRounds; ++round) {
    const detail::Objective f = [&](const Eigen::VectorXd& v) {
      const RawPoint r = map_raw(v.data());
      return -prob.success(r) + weight * prob.violation_sq(r, nullptr);
    };
    const auto res = detail::minimize_simplex(f, x, step, per_round, 1e-13);
    out.evaluations += res.evaluations;
    x = res.x;
    const RawPoint r = map_raw(x.data());
    double worst = 0.0;
    prob.violation_sq(r, &worst);
    const double p = prob.success(r);
    if (worst <= kOracleFeasTol && (!out.feasible || p > out.p)) {
      out.feasible = true;
      out.p = p;
      out.violation = std::max(0.0, worst);
      out.raw = mapped_array(r);
    }
    weight *= 10.0;
    step = std::max(1e-7, step * 0.5);
  }
  return out;
}

}  // namespace

double f_poly(double y, double S, double T, double m) {
  check_reduced_domain(S, T, m);
  const double rs = std::sqrt(S);
  return T * (1.0 - rs) * y * y - T / (1.0 - 2.0 * m) * y + (1.0 + rs) / 4.0;
}

double g_poly(double y, double S, double T, double m) {
  check_reduced_domain(S, T, m);
  const double rs = std::sqrt(S);
  return T * (1.0 + rs) * y * y - T / (1.0 - 2.0 * m) * y + (1.0 - rs) / 4.0;
}

OracleResult oracle_reduced(double S, double T, double m, MarginKind kind, long grid_n) {
  if (!(S >= 0.0) || !(S < 1.0) || std::abs(S + T - 1.0) > kExactTol) {
    throw DomainError("reduced constants require 0 <= S < 1 and S + T = 1");
  }
  if (!(m >= 0.0) || !(m <= 1.0)) throw DomainError("error margin must lie in [0, 1]");
  if (grid_n < 1000) throw DomainError("reduced oracle needs grid_n >= 1000");

  OracleResult result;
  const ReducedBranch neg{S, T, m, -1.0, kind};
  const ReducedBranch pos{S, T, m, +1.0, kind};
  result.negative_x = scan_branch(neg, grid_n, result.evaluations);
  result.nonnegative_x = scan_branch(pos, grid_n, result.evaluations);

  const BranchScan* best = nullptr;
  const ReducedBranch* branch = nullptr;
  if (result.negative_x.feasible) {
    best = &result.negative_x;
    branch = &neg;
  }
  if (result.nonnegative_x.feasible && (!best || result.nonnegative_x.p_best > best->p_best)) {
    best = &result.nonnegative_x;
    branch = &pos;
  }
  if (!best) {
    // E1 = E2 = 0 is always admissible.
    result.feasible = true;
    result.p_best = 0.0;
    return result;
  }

  ReducedParams rp;
  rp.S = S;
  rp.T = T;
  rp.y = best->y;
  rp.alpha = branch->alpha(best->y);
  const double sqrt_s = std::sqrt(S);
  rp.x = sqrt_s > 0.0 ? branch->sx(best->y) / S : 0.0;
  result.reduced = rp;
  result.p_best = best->p_best;
  result.feasible = true;
  result.max_violation = std::max(0.0, branch->constraint(best->y));
  return result;
}

Povm3 povm_from_raw(const std::array<double, 8>& raw) {
  const RawPoint r = map_raw(raw.data());
  Povm3 povm{{r.a1, r.b1}, {r.a2, r.b2}, Observable2::zero()};
  povm.e3 = Observable2::identity() - povm.e1 - povm.e2;
  return povm;
}

OracleResult oracle_general(const StatePair& pair, const MarginCondition& cond, long budget,
                            std::uint64_t seed) {
  if (budget < 10000) throw DomainError("general oracle needs a budget of at least 10^4");
  if (!(cond.m >= 0.0) || !(cond.m <= 1.0)) throw DomainError("error margin must lie in [0, 1]");
  const GeneralProblem prob{pair.n1(), pair.n2(), cond};

  std::vector<StartOutcome> outcomes(kGeneralStarts);
  parallel_for(outcomes.size(), [&](std::size_t i) {
    outcomes[i] = run_start(prob, budget / kGeneralStarts, seed, i);
  });

  OracleResult result;
  result.feasible = true;  // E1 = E2 = 0 is always admissible
  for (const auto& o : outcomes) {
    result.evaluations += o.evaluations;
    if (o.feasible && o.p > result.p_best) {
      result.p_best = o.p;
      result.raw = o.raw;
      result.max_violation = o.violation;
    }
  }
  return result;
}

}  // namespace mdisc
