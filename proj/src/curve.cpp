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

#include "mdisc/curve.hpp"

#include <cstdio>

#include "mdisc/errors.hpp"
#include "mdisc/optimizer.hpp"

namespace mdisc {

std::vector<CurveRow> curve(double fidelity, int m_steps) {
  if (m_steps < 2) throw DomainError("curve needs at least 2 margin steps");
  const double p_u = success_strong(fidelity, 0.0);
  const double p_me = minimum_error_success(fidelity);
  std::vector<CurveRow> rows;
  rows.reserve(static_cast<std::size_t>(m_steps));
  for (int k = 0; k < m_steps; ++k) {
    const double m = static_cast<double>(k) / static_cast<double>(m_steps - 1);
    rows.push_back({m, success_strong(fidelity, m), success_weak(fidelity, m), p_u, p_me});
  }
  return rows;
}

std::string curve_csv(const std::vector<CurveRow>& rows) {
  std::string out = "m,p_strong,p_weak,p_unambiguous,p_minimum_error\n";
  char line[160];
  for (const auto& r : rows) {
    std::snprintf(line, sizeof line, "%.12f,%.12f,%.12f,%.12f,%.12f\n", r.m, r.p_strong, r.p_weak,
                  r.p_unambiguous, r.p_minimum_error);
    out += line;
  }
  return out;
}

}  // namespace mdisc
