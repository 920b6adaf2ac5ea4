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

#include "simplex.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <cmath>
#include <limits>
#include <memory>
#include <mutex>

namespace mdisc::detail {
namespace {

struct Context {
  const Objective* f;
  long evaluations;
  Eigen::VectorXd scratch;
};

double trampoline(const gsl_vector* v, void* params) {
  auto* ctx = static_cast<Context*>(params);
  for (Eigen::Index i = 0; i < ctx->scratch.size(); ++i) {
    ctx->scratch[i] = gsl_vector_get(v, static_cast<std::size_t>(i));
  }
  ++ctx->evaluations;
  const double value = (*ctx->f)(ctx->scratch);
  return std::isfinite(value) ? value : std::numeric_limits<double>::max();
}

struct VectorDeleter {
  void operator()(gsl_vector* v) const { gsl_vector_free(v); }
};
struct MinimizerDeleter {
  void operator()(gsl_multimin_fminimizer* m) const { gsl_multimin_fminimizer_free(m); }
};

}  // namespace

SimplexResult minimize_simplex(const Objective& f, const Eigen::VectorXd& x0, double step,
                               long max_evals, double size_tol) {
  static std::once_flag quiet;
  std::call_once(quiet, [] { gsl_set_error_handler_off(); });

  const auto n = static_cast<std::size_t>(x0.size());
  Context ctx{&f, 0, Eigen::VectorXd(x0.size())};
  gsl_multimin_function fn{&trampoline, n, &ctx};

  std::unique_ptr<gsl_vector, VectorDeleter> start(gsl_vector_alloc(n));
  std::unique_ptr<gsl_vector, VectorDeleter> steps(gsl_vector_alloc(n));
  for (std::size_t i = 0; i < n; ++i) {
    gsl_vector_set(start.get(), i, x0[static_cast<Eigen::Index>(i)]);
  }
  gsl_vector_set_all(steps.get(), step);

  std::unique_ptr<gsl_multimin_fminimizer, MinimizerDeleter> solver(
      gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n));
  gsl_multimin_fminimizer_set(solver.get(), &fn, start.get(), steps.get());

  while (ctx.evaluations < max_evals) {
    if (gsl_multimin_fminimizer_iterate(solver.get()) != GSL_SUCCESS) break;
    const double size = gsl_multimin_fminimizer_size(solver.get());
    if (gsl_multimin_test_size(size, size_tol) == GSL_SUCCESS) break;
  }

  SimplexResult result;
  result.x.resize(x0.size());
  const gsl_vector* best = gsl_multimin_fminimizer_x(solver.get());
  for (std::size_t i = 0; i < n; ++i) {
    result.x[static_cast<Eigen::Index>(i)] = gsl_vector_get(best, i);
  }
  result.value = gsl_multimin_fminimizer_minimum(solver.get());
  result.evaluations = ctx.evaluations;
  return result;
}

}  // namespace mdisc::detail
