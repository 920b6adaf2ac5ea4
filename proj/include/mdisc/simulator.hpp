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

#pragma once

#include <array>
#include <cstdint>

#include "mdisc/core.hpp"

namespace mdisc {

/// Shots are simulated in fixed-size chunks, each with its own RNG stream, so
/// the counts do not depend on how chunks are spread over threads.
inline constexpr long kShotsPerChunk = 1L << 16;

/// Empirical counterparts of DiscriminationReport with standard errors.
/// Conditional-error errors use the delta method for a ratio estimator.
struct EmpiricalEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

struct SimulationResult {
  long shots = 0;
  /// counts[a][mu]: true state a+1, outcome mu+1.
  std::array<std::array<long, 3>, 2> counts{};

  EmpiricalEstimate p_success;
  EmpiricalEstimate p_error_given_1;
  EmpiricalEstimate p_error_given_2;
  EmpiricalEstimate p_mean_error;
  EmpiricalEstimate p_inconclusive;
  /// joint[a][mu] = counts[a][mu] / shots.
  std::array<std::array<EmpiricalEstimate, 3>, 2> joint{};
};

/// Draws the true state uniformly, then an outcome from tr[E_mu rho_a].
/// Born probabilities below zero by at most 1e-10 are clamped and the row
/// renormalized; anything worse is a ValidationError.
SimulationResult simulate(const Povm3& povm, const StatePair& pair, long shots,
                          std::uint64_t seed);

}  // namespace mdisc
