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

// JSON forms used by the command-line tool.
//
//   PureState         [[re, im], [re, im]]
//   Observable2       {"alpha": a, "beta": [x, y, z]}
//   Povm3             {"e1": ..., "e2": ..., "e3": ...}
//   BipartiteState    d_A rows of d_B entries, each a number or [re, im]

#pragma once

#include <json.hpp>

#include "mdisc/core.hpp"
#include "mdisc/locc.hpp"
#include "mdisc/oracle.hpp"
#include "mdisc/simulator.hpp"
#include "mdisc/validator.hpp"

namespace mdisc {

using Json = nlohmann::ordered_json;

Json to_json(const PureState& psi);
Json to_json(const Observable2& e);
Json to_json(const Povm3& povm);
Json to_json(const DiscriminationReport& report);
Json to_json(const SimulationResult& result);
Json to_json(const OracleResult& result);
Json to_json(const ReducedParams& rp);
Json to_json(const LoccPipelineResult& result);

/// Throws ValidationError for malformed input or a non-normalized state.
PureState pure_state_from_json(const Json& j);
Observable2 observable_from_json(const Json& j);
Povm3 povm_from_json(const Json& j);
BipartiteState bipartite_from_json(const Json& j);

}  // namespace mdisc
