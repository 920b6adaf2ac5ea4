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

// Thin wrapper over GSL's Nelder-Mead simplex minimizer with an evaluation
// budget. Internal to the library.

#pragma once

#include <Eigen/Dense>

#include <functional>

namespace mdisc::detail {

struct SimplexResult {
  Eigen::VectorXd x;
  double value = 0.0;
  long evaluations = 0;
};

using Objective = std::function<double(const Eigen::VectorXd&)>;

/// Minimizes `f` from `x0` with initial simplex edge `step` until the simplex
/// characteristic size drops below `size_tol` or `max_evals` evaluations have
/// been spent. Deterministic for fixed inputs.
SimplexResult minimize_simplex(const Objective& f, const Eigen::VectorXd& x0, double step,
                               long max_evals, double size_tol);

}  // namespace mdisc::detail
