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

#include "mdisc/json_io.hpp"

#include <string>

#include "mdisc/errors.hpp"

namespace mdisc {
namespace {

Json complex_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) {
    return {j[0].get<double>(), j[1].get<double>()};
  }
  throw ValidationError("expected a number or [re, im], got " + j.dump());
}

Json estimate_json(const EmpiricalEstimate& e) {
  return {{"value", e.value}, {"std_error", e.std_error}};
}

Json scan_json(const BranchScan& b) {
  return {{"feasible", b.feasible}, {"p_best", b.p_best}, {"y", b.y}};
}

}  // namespace

Json to_json(const PureState& psi) { return Json::array({complex_json(psi[0]), complex_json(psi[1])}); }

Json to_json(const Observable2& e) {
  return {{"alpha", e.alpha}, {"beta", Json::array({e.beta[0], e.beta[1], e.beta[2]})}};
}

Json to_json(const Povm3& povm) {
  return {{"e1", to_json(povm.e1)}, {"e2", to_json(povm.e2)}, {"e3", to_json(povm.e3)}};
}

Json to_json(const DiscriminationReport& r) {
  Json joint = Json::array();
  for (const auto& row : r.joint) joint.push_back(Json::array({row[0], row[1], row[2]}));
  return {{"p_success", r.p_success},
          {"p_error_given_1", r.p_error_given_1},
          {"p_error_given_2", r.p_error_given_2},
          {"p_mean_error", r.p_mean_error},
          {"p_inconclusive", r.p_inconclusive},
          {"joint", joint},
          {"psd_ok", r.psd_ok},
          {"complete_ok", r.complete_ok},
          {"ranks", Json::array({r.ranks[0], r.ranks[1], r.ranks[2]})}};
}

Json to_json(const SimulationResult& r) {
  Json counts = Json::array();
  Json joint = Json::array();
  for (std::size_t a = 0; a < 2; ++a) {
    counts.push_back(Json::array({r.counts[a][0], r.counts[a][1], r.counts[a][2]}));
    joint.push_back(Json::array(
        {estimate_json(r.joint[a][0]), estimate_json(r.joint[a][1]), estimate_json(r.joint[a][2])}));
  }
  return {{"shots", r.shots},
          {"counts", counts},
          {"p_success", estimate_json(r.p_success)},
          {"p_error_given_1", estimate_json(r.p_error_given_1)},
          {"p_error_given_2", estimate_json(r.p_error_given_2)},
          {"p_mean_error", estimate_json(r.p_mean_error)},
          {"p_inconclusive", estimate_json(r.p_inconclusive)},
          {"joint", joint}};
}

Json to_json(const ReducedParams& rp) {
  return {{"alpha", rp.alpha}, {"x", rp.x}, {"y", rp.y}, {"S", rp.S}, {"T", rp.T}};
}

Json to_json(const OracleResult& r) {
  Json j = {{"p_best", r.p_best},
            {"feasible", r.feasible},
            {"max_violation", r.max_violation},
            {"evaluations", r.evaluations},
            {"raw", r.raw}};
  if (r.reduced) {
    j["reduced"] = to_json(*r.reduced);
    j["negative_x"] = scan_json(r.negative_x);
    j["nonnegative_x"] = scan_json(r.nonnegative_x);
  }
  return j;
}

Json to_json(const LoccPipelineResult& r) {
  Json branches = Json::array();
  const auto& dec = r.decomposition;
  for (std::size_t i = 0; i < dec.branches(); ++i) {
    const Complex w = dec.weighted_overlap(i);
    branches.push_back({{"s", dec.weights_s[i]},
                        {"t", dec.weights_t[i]},
                        {"weighted_overlap", complex_json(w)},
                        {"slack", r.check.branch_slack[i]}});
  }
  return {{"max_deviation", r.max_deviation},
          {"closed_form", r.closed_form},
          {"p_success_global", r.global_report.p_success},
          {"p_success_locc", r.locc_report.p_success},
          {"margin_slack", r.margin_slack},
          {"priors", Json::array({r.problem.s, r.problem.t})},
          {"overlap", r.problem.overlap},
          {"b", r.problem.b},
          {"b_relation", r.b_relation},
          {"round_trip_error", r.round_trip_error},
          {"decomposition_residual", r.check.residual()},
          {"ancilla_dim", dec.ancilla_dim},
          {"branches", branches},
          {"global_report", to_json(r.global_report)},
          {"locc_report", to_json(r.locc_report)}};
}

PureState pure_state_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) throw ValidationError("pure state must be [[re, im], [re, im]]");
  return PureState(complex_from_json(j[0]), complex_from_json(j[1]));
}

Observable2 observable_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("alpha") || !j.contains("beta") || !j["beta"].is_array() ||
      j["beta"].size() != 3) {
    throw ValidationError("observable must be {\"alpha\": a, \"beta\": [x, y, z]}");
  }
  try {
    const auto& b = j["beta"];
    return {j["alpha"].get<double>(), Vec3(b[0].get<double>(), b[1].get<double>(), b[2].get<double>())};
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("observable: ") + e.what());
  }
}

Povm3 povm_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("e1") || !j.contains("e2") || !j.contains("e3")) {
    throw ValidationError("POVM must be {\"e1\": ..., \"e2\": ..., \"e3\": ...}");
  }
  return {observable_from_json(j["e1"]), observable_from_json(j["e2"]),
          observable_from_json(j["e3"])};
}

BipartiteState bipartite_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array() || j[0].empty()) {
    throw ValidationError("bipartite state must be a non-empty matrix of amplitudes");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  CMat m(rows, cols);
  for (Eigen::Index a = 0; a < rows; ++a) {
    const auto& row = j[static_cast<std::size_t>(a)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ValidationError("bipartite state rows must have equal length");
    }
    for (Eigen::Index b = 0; b < cols; ++b) m(a, b) = complex_from_json(row[static_cast<std::size_t>(b)]);
  }
  return BipartiteState(std::move(m));
}

}  // namespace mdisc
