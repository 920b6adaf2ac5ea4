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

#include "cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <ostream>

#include "mdisc/curve.hpp"
#include "mdisc/errors.hpp"
#include "mdisc/json_io.hpp"
#include "mdisc/optimizer.hpp"
#include "mdisc/oracle.hpp"
#include "mdisc/simulator.hpp"
#include "mdisc/validator.hpp"

namespace mdisc::cli {
namespace {

struct Common {
  double fidelity = 0.0;
  double margin = 0.0;
  std::string condition = "strong";
  std::uint64_t seed = 0;
  std::string out;
};

void add_common(CLI::App* cmd, Common& c, bool needs_fidelity) {
  auto* f = cmd->add_option("--fidelity", c.fidelity, "overlap |<phi1|phi2>| in [0, 1)");
  if (needs_fidelity) f->required();
  cmd->add_option("--margin", c.margin, "error margin m in [0, 1]")->capture_default_str();
  cmd->add_option("--condition", c.condition, "margin condition")
      ->check(CLI::IsMember({"strong", "weak"}))
      ->capture_default_str();
  cmd->add_option("--seed", c.seed, "RNG seed")->capture_default_str();
  cmd->add_option("--out", c.out, "write output to this file instead of stdout");
}

MarginCondition condition_of(const Common& c) {
  return MarginCondition::make(parse_margin_kind(c.condition), c.margin);
}

Json header(const Common& c) {
  return {{"fidelity", c.fidelity}, {"condition", c.condition}, {"margin", c.margin}};
}

Json solve(const Common& c, bool with_oracle, const std::string& oracle_mode, long budget) {
  const StatePair pair = StatePair::canonical(c.fidelity);
  const MarginCondition cond = condition_of(c);
  const Povm3 povm = optimal_povm(pair, cond);
  const DiscriminationReport report = evaluate(povm, pair);
  const double p = success(c.fidelity, cond);
  Json j = header(c);
  j["critical_margin"] = critical_margin(c.fidelity);
  j["regime"] = to_string(regime_for(c.fidelity, c.margin));
  j["p_success"] = p;
  j["povm"] = to_json(povm);
  j["report"] = to_json(report);
  j["margin_slack"] = check_margin(report, cond);
  if (with_oracle) {
    const OracleResult o = oracle_mode == "reduced"
                               ? oracle_reduced(pair.S(), pair.T(), c.margin, cond.kind, budget)
                               : oracle_general(pair, cond, budget, c.seed);
    j["oracle"] = {{"mode", oracle_mode}, {"p_best", o.p_best}, {"delta", o.p_best - p}};
  }
  return j;
}

Json oracle(const Common& c, const std::string& mode, long budget) {
  const StatePair pair = StatePair::canonical(c.fidelity);
  const MarginCondition cond = condition_of(c);
  const OracleResult o = mode == "reduced"
                             ? oracle_reduced(pair.S(), pair.T(), c.margin, cond.kind, budget)
                             : oracle_general(pair, cond, budget, c.seed);
  const double p = success(c.fidelity, cond);
  Json j = header(c);
  j["mode"] = mode;
  j["budget"] = budget;
  j["seed"] = c.seed;
  j["result"] = to_json(o);
  j["closed_form"] = p;
  j["delta"] = o.p_best - p;
  return j;
}

Json simulate_cmd(const Common& c, long shots) {
  const StatePair pair = StatePair::canonical(c.fidelity);
  const MarginCondition cond = condition_of(c);
  const Povm3 povm = optimal_povm(pair, cond);
  Json j = header(c);
  j["seed"] = c.seed;
  j["expected"] = to_json(evaluate(povm, pair));
  j["simulation"] = to_json(simulate(povm, pair, shots, c.seed));
  return j;
}

BipartiteState state_arg(const std::string& text) {
  if (auto preset = preset_state(text)) return *preset;
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception&) {
    throw DomainError("'" + text + "' is neither a preset name nor a JSON amplitude matrix");
  }
  return bipartite_from_json(j);
}

Json locc_cmd(const Common& c, const std::string& phi1, const std::string& phi2,
              const SearchOptions& opts) {
  const BipartiteState s1 = state_arg(phi1);
  const BipartiteState s2 = state_arg(phi2);
  const LoccPipelineResult r = margin_povm_to_locc(s1, s2, condition_of(c), opts);
  Json j = {{"condition", c.condition}, {"margin", c.margin}, {"seed", opts.seed},
            {"budget", opts.budget}};
  j["fidelity"] = std::abs(s1.inner(s2));
  j["verification"] = to_json(r);
  return j;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream file(path);
  if (!file) throw DomainError("cannot open output file '" + path + "'");
  file << text;
}

}  // namespace

std::optional<BipartiteState> preset_state(const std::string& name) {
  const double h = 1.0 / std::sqrt(2.0);
  CMat m = CMat::Zero(2, 2);
  if (name == "zero-zero") {
    m(0, 0) = 1.0;
  } else if (name == "one-one") {
    m(1, 1) = 1.0;
  } else if (name == "plus-plus") {
    m.setConstant(0.5);
  } else if (name == "zero-plus") {
    m(0, 0) = m(0, 1) = h;
  } else if (name == "bell-phi-plus") {
    m(0, 0) = m(1, 1) = h;
  } else if (name == "bell-psi-plus") {
    m(0, 1) = m(1, 0) = h;
  } else if (name == "partial") {
    m(0, 0) = std::cos(M_PI / 8.0);
    m(1, 1) = std::sin(M_PI / 8.0);
  } else {
    return std::nullopt;
  }
  return BipartiteState(m);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Optimal discrimination of two pure states with an error margin"};
  app.require_subcommand(1);

  Common solve_c, curve_c, sim_c, oracle_c, locc_c;
  bool with_oracle = false;
  bool report_flag = false;
  std::string solve_mode = "general";
  long solve_budget = 100000;
  auto* solve_cmd = app.add_subcommand("solve", "closed-form optimum, POVM and report");
  add_common(solve_cmd, solve_c, true);
  solve_cmd->add_flag("--report", report_flag, "include the validator report (always included)");
  solve_cmd->add_flag("--oracle", with_oracle, "compare with a numerical oracle");
  solve_cmd->add_option("--oracle-mode", solve_mode)
      ->check(CLI::IsMember({"reduced", "general"}))
      ->capture_default_str();
  solve_cmd->add_option("--budget", solve_budget, "oracle budget")->capture_default_str();

  int m_steps = 101;
  auto* curve_cmd = app.add_subcommand("curve", "success probability against the margin (CSV)");
  add_common(curve_cmd, curve_c, true);
  curve_cmd->add_option("--m-steps", m_steps, "number of margin values")->capture_default_str();

  long shots = 1000000;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo run of the optimal POVM");
  add_common(sim_cmd, sim_c, true);
  sim_cmd->add_option("--shots", shots)->capture_default_str();

  std::string mode = "general";
  long budget = 100000;
  auto* oracle_cmd = app.add_subcommand("oracle", "numerical optimum without closed forms");
  add_common(oracle_cmd, oracle_c, true);
  oracle_cmd->add_option("--mode", mode)
      ->check(CLI::IsMember({"reduced", "general"}))
      ->capture_default_str();
  oracle_cmd->add_option("--budget", budget,
                         "evaluations (general) or grid points per branch (reduced)")
      ->capture_default_str();

  std::string phi1, phi2;
  SearchOptions search;
  auto* locc_sub = app.add_subcommand("locc", "one-way LOCC realization for bipartite states");
  add_common(locc_sub, locc_c, false);
  locc_sub->add_option("--phi1", phi1, "preset name or JSON amplitude matrix")->required();
  locc_sub->add_option("--phi2", phi2, "preset name or JSON amplitude matrix")->required();
  locc_sub->add_option("--ancilla-dim", search.ancilla_dim)->capture_default_str();
  locc_sub->add_option("--budget", search.budget)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, err, err);
    if (!e.get_name().empty() && e.get_exit_code() != 0) err << app.help();
    return kExitUsage;
  }

  try {
    if (*solve_cmd) {
      emit(solve(solve_c, with_oracle, solve_mode, solve_budget).dump(2) + "\n", solve_c.out, out);
    } else if (*curve_cmd) {
      emit(curve_csv(curve(curve_c.fidelity, m_steps)), curve_c.out, out);
    } else if (*sim_cmd) {
      emit(simulate_cmd(sim_c, shots).dump(2) + "\n", sim_c.out, out);
    } else if (*oracle_cmd) {
      emit(oracle(oracle_c, mode, budget).dump(2) + "\n", oracle_c.out, out);
    } else if (*locc_sub) {
      search.seed = locc_c.seed;
      emit(locc_cmd(locc_c, phi1, phi2, search).dump(2) + "\n", locc_c.out, out);
    }
  } catch (const SearchFailure& e) {
    err << "error: " << e.what() << " (best residual " << e.best_residual() << ")\n";
    for (const auto& [name, value] : e.magnitudes()) err << "  " << name << ": " << value << "\n";
    return kExitInternal;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const RegimeError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ValidationError& e) {
    err << "error: invalid input: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitOk;
}

}  // namespace mdisc::cli
