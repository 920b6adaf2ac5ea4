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

#include <string>
#include <vector>

namespace mdisc {

/// Success probabilities at one error margin; the last two do not depend on m.
struct CurveRow {
  double m = 0.0;
  double p_strong = 0.0;
  double p_weak = 0.0;
  double p_unambiguous = 0.0;
  double p_minimum_error = 0.0;
};

/// Rows at m = k / (m_steps - 1), k = 0 .. m_steps - 1. Requires m_steps >= 2.
std::vector<CurveRow> curve(double fidelity, int m_steps);

/// Header `m,p_strong,p_weak,p_unambiguous,p_minimum_error`, then one line per
/// row with 12 fixed decimals.
std::string curve_csv(const std::vector<CurveRow>& rows);

}  // namespace mdisc
