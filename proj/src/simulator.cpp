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

#include "mdisc/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include "mdisc/errors.hpp"
#include "mdisc/parallel.hpp"

namespace mdisc {
namespace {

constexpr double kBornTol = 1e-10;

using Row = std::array<double, 3>;
using Counts = std::array<std::array<long, 3>, 2>;

// Cumulative outcome distribution for one true state.
Row born_cdf(const Povm3& povm, const Vec3& n, int state) {
  Row p{};
  double total = 0.0;
  for (int mu = 0; mu < 3; ++mu) {
    double q = expectation(povm[mu + 1], n);
    if (!std::isfinite(q) || q < -kBornTol || q > 1.0 + kBornTol) {
      std::ostringstream os;
      os << "Born probability tr[E" << mu + 1 << " rho" << state << "] = " << q
         << " lies outside [0, 1]";
      throw ValidationError(os.str());
    }
    q = std::clamp(q, 0.0, 1.0);
    p[static_cast<std::size_t>(mu)] = q;
    total += q;
  }
  if (!(total > 0.0)) throw ValidationError("Born probabilities sum to zero");
  Row cdf{};
  double acc = 0.0;
  for (std::size_t mu = 0; mu < 3; ++mu) {
    acc += p[mu] / total;
    cdf[mu] = acc;
  }
  cdf[2] = 1.0;
  return cdf;
}

int draw(const Row& cdf, double u) {
  if (u < cdf[0]) return 0;
  return u < cdf[1] ? 1 : 2;
}

// Binomial standard error of a frequency estimated from n trials.
double freq_stderr(double p, long n) {
  return n > 0 ? std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n)) : 0.0;
}

// Delta-method standard error of X/Y where X and Y are multinomial cell
// frequencies and X's cell is contained in Y's.
EmpiricalEstimate ratio_estimate(double x, double y, long n) {
  if (y <= 0.0 || n <= 0) return {0.0, 0.0};
  const double dn = static_cast<double>(n);
  const double var_x = x * (1.0 - x) / dn;
  const double var_y = y * (1.0 - y) / dn;
  const double cov = (x - x * y) / dn;
  const double var = var_x / (y * y) - 2.0 * x * cov / (y * y * y) + x * x * var_y / (y * y * y * y);
  return {x / y, std::sqrt(std::max(0.0, var))};
}

}  // namespace

SimulationResult simulate(const Povm3& povm, const StatePair& pair, long shots,
                          std::uint64_t seed) {
  if (shots < 1) throw DomainError("shots must be at least 1");
  const std::array<Row, 2> cdf{born_cdf(povm, pair.n1(), 1), born_cdf(povm, pair.n2(), 2)};

  const auto chunks = static_cast<std::size_t>((shots + kShotsPerChunk - 1) / kShotsPerChunk);
  std::vector<Counts> partial(chunks);
  parallel_for(chunks, [&](std::size_t c) {
    auto rng = substream(seed, c);
    const long begin = static_cast<long>(c) * kShotsPerChunk;
    const long end = std::min(shots, begin + kShotsPerChunk);
    Counts local{};
    for (long s = begin; s < end; ++s) {
      const int state = uniform01(rng) < 0.5 ? 0 : 1;
      const int mu = draw(cdf[static_cast<std::size_t>(state)], uniform01(rng));
      ++local[static_cast<std::size_t>(state)][static_cast<std::size_t>(mu)];
    }
    partial[c] = local;
  });

  SimulationResult r;
  r.shots = shots;
  for (const auto& part : partial) {
    for (std::size_t a = 0; a < 2; ++a) {
      for (std::size_t mu = 0; mu < 3; ++mu) r.counts[a][mu] += part[a][mu];
    }
  }
  const double n = static_cast<double>(shots);
  std::array<std::array<double, 3>, 2> f{};
  for (std::size_t a = 0; a < 2; ++a) {
    for (std::size_t mu = 0; mu < 3; ++mu) {
      f[a][mu] = static_cast<double>(r.counts[a][mu]) / n;
      r.joint[a][mu] = {f[a][mu], freq_stderr(f[a][mu], shots)};
    }
  }
  const auto estimate = [&](long count) {
    const double p = static_cast<double>(count) / n;
    return EmpiricalEstimate{p, freq_stderr(p, shots)};
  };
  const auto& c = r.counts;
  r.p_success = estimate(c[0][0] + c[1][1]);
  r.p_mean_error = estimate(c[1][0] + c[0][1]);
  r.p_inconclusive = estimate(c[0][2] + c[1][2]);
  r.p_error_given_1 = ratio_estimate(f[1][0], f[0][0] + f[1][0], shots);
  r.p_error_given_2 = ratio_estimate(f[0][1], f[0][1] + f[1][1], shots);
  return r;
}

}  // namespace mdisc
