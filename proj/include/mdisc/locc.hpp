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

// One-way LOCC realization of rank-one three-outcome POVMs on the span V of
// two bipartite pure states.
//
// Pipeline:
//   1. A POVM on V whose elements have rank <= 1 is identified with the
//      optimal unambiguous measurement for a pair (Psi1, Psi2) with priors
//      (s, t)  [povm_to_unambiguous / global_unambiguous_povm].
//   2. Alice, helped by an ancilla R, measures RA in an orthonormal basis
//      {|I>} chosen so that |0>_R|Psi1> = sum_I sqrt(s_I)|I>|eta_I> and
//      |0>_R|Psi2> = sum_I sqrt(t_I)|I>|gamma_I>, with <eta_I|gamma_I> real,
//      nonnegative, and at most sqrt(s s_I / (t t_I)) and its reciprocal
//      [find_alice_decomposition].
//   3. Bob runs the optimal unambiguous measurement on branch I
//      [build_locc_povm]; compressing the resulting POVM onto V recovers the
//      global one [verify_compression].
//
// Full-space vectors use the index a * d_B + b. On RA the index is
// r * d_A + a with r the ancilla level.

#pragma once

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <vector>

#include "mdisc/core.hpp"
#include "mdisc/optimizer.hpp"
#include "mdisc/validator.hpp"

namespace mdisc {

using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

inline constexpr int kMaxLocalDim = 4;
/// Certification tolerance for decompositions and the compression identity.
inline constexpr double kLoccTol = 1e-9;

/// Normalized state on C^{d_A} (x) C^{d_B}, stored as a d_A x d_B matrix.
class BipartiteState {
 public:
  /// Throws ValidationError unless 1 <= d_A, d_B <= 4, d_A d_B >= 2 and the
  /// Frobenius norm is 1 within 1e-12.
  explicit BipartiteState(CMat amplitudes);

  static BipartiteState from_vector(const CVec& v, int dim_a, int dim_b);
  /// Normalizes `amplitudes`; throws ValidationError on zero input.
  static BipartiteState normalized(const CMat& amplitudes);

  int dim_a() const { return static_cast<int>(amp_.rows()); }
  int dim_b() const { return static_cast<int>(amp_.cols()); }
  const CMat& amplitudes() const { return amp_; }
  CVec vector() const;
  Complex inner(const BipartiteState& other) const;
  BipartiteState rephased(Complex phase) const;

 private:
  CMat amp_;
};

/// Three effects written as full-space operators.
struct SubspacePovm {
  std::array<CMat, 3> effects;
};

/// Unambiguous discrimination of `first` (prior s) against `second` (prior
/// t) with r = sqrt(t / s). Built from a rank-one POVM with elements
/// b_mu |psi_mu><psi_mu|: first = psi2_perp, second = psi1_perp.
struct UnambiguousProblem {
  CVec psi1_perp;
  CVec psi2_perp;
  double s = 0.5;
  double t = 0.5;
  double r = 1.0;
  /// |<psi1|psi2>| = |<psi1_perp|psi2_perp>|.
  double overlap = 0.0;
  /// Coefficients b_mu of the input POVM.
  std::array<double, 3> b{};

  const CVec& first() const { return psi2_perp; }
  const CVec& second() const { return psi1_perp; }
};

/// Optimal unambiguous POVM for (phi1, phi2) with priors (s, t):
/// E1 = a1 |phi2_perp><phi2_perp|, E2 = a2 |phi1_perp><phi1_perp|,
/// E3 = P - E1 - E2. Throws RegimeError unless sqrt(s/t), sqrt(t/s) >=
/// |<phi1|phi2>|; DomainError for parallel states or invalid priors.
SubspacePovm global_unambiguous_povm(const CVec& phi1, const CVec& phi2, double s, double t);
SubspacePovm global_unambiguous_povm(const BipartiteState& phi1, const BipartiteState& phi2,
                                     double s, double t);

/// Throws NotRepresentableError when an element has rank 2, the elements do
/// not sum to a rank-two projector, or the top eigenvalue of E1 + E2 is not 1.
UnambiguousProblem povm_to_unambiguous(const SubspacePovm& povm);

/// b1 + b2 - 1 - b1 b2 (1 - overlap^2); zero for every representable POVM.
double b_relation_residual(const UnambiguousProblem& problem);

struct AliceDecomposition {
  int dim_a = 0;
  int dim_b = 0;
  int ancilla_dim = 1;
  /// Unitary on RA; column I is |I>.
  CMat alice_states;
  std::vector<double> weights_s;
  std::vector<double> weights_t;
  std::vector<CVec> bob_eta;
  std::vector<CVec> bob_gamma;

  std::size_t branches() const { return weights_s.size(); }
  /// <0|_R |I><I| |0>_R as a d_A x d_A operator.
  CMat alice_effect(std::size_t branch) const;
  /// sqrt(s_I t_I) <eta_I|gamma_I>.
  Complex weighted_overlap(std::size_t branch) const;
};

/// Invariant residuals of a decomposition. Branch inequalities are measured
/// in weighted form, w_I = sqrt(s_I t_I) <eta_I|gamma_I> against
/// sqrt(s/t) s_I and sqrt(t/s) t_I, which is the scale at which they enter
/// the compression identity.
struct DecompositionCheck {
  double reconstruction = 0.0;
  double orthonormality = 0.0;
  double weight_sums = 0.0;
  double imaginary = 0.0;
  double negativity = 0.0;
  double bound_violation = 0.0;
  /// Smallest of the three inequality slacks per branch.
  std::vector<double> branch_slack;

  double residual() const;
  bool ok() const { return residual() <= kLoccTol; }
};

DecompositionCheck check_decomposition(const AliceDecomposition& dec, const BipartiteState& phi1,
                                       const BipartiteState& phi2, double s, double t);

struct SearchOptions {
  int ancilla_dim = 2;
  long budget = 40000;
  std::uint64_t seed = 0;
  int starts = 8;
};

/// Seeded multi-start search for an Alice basis satisfying the decomposition
/// invariants; every returned decomposition passes check_decomposition.
/// Requires <phi1|phi2> real and nonnegative. Throws SearchFailure with the
/// best violation magnitudes when the budget runs out.
AliceDecomposition find_alice_decomposition(const BipartiteState& phi1,
                                            const BipartiteState& phi2, double s, double t,
                                            const SearchOptions& options);

struct LoccBranch {
  CMat alice_effect;
  std::array<CMat, 3> bob_effects;
};

struct LoccPovm {
  int dim_a = 0;
  int dim_b = 0;
  std::vector<LoccBranch> branches;

  /// E_mu^L = sum_I e_I^A (x) e_mu^B(I).
  SubspacePovm assemble() const;
};

/// Bob's per-branch unambiguous measurement, completed to his full space.
/// Throws ValidationError when the decomposition violates its invariants
/// for (s, t) beyond kLoccTol.
LoccPovm build_locc_povm(const AliceDecomposition& dec, double s, double t);

/// max over mu, i, j of |<v_i|E_mu - E_mu^L|v_j>| for the basis {v0, v1} of V.
double verify_compression(const SubspacePovm& global, const LoccPovm& locc, const CVec& v0,
                          const CVec& v1);

struct LoccPipelineResult {
  SubspacePovm global;
  UnambiguousProblem problem;
  AliceDecomposition decomposition;
  DecompositionCheck check;
  LoccPovm locc;
  double max_deviation = 0.0;
  /// Elementwise gap between the input POVM and global_unambiguous_povm of
  /// the identified problem.
  double round_trip_error = 0.0;
  /// Largest gap between b_mu and the coefficients recomputed from r.
  double b_round_trip_error = 0.0;
  double b_relation = 0.0;
  double closed_form = 0.0;
  DiscriminationReport global_report;
  DiscriminationReport locc_report;
  double margin_slack = 0.0;
};

/// Optimal margin POVM on span{Phi1, Phi2} realized by one-way LOCC and
/// certified against the closed form.
LoccPipelineResult margin_povm_to_locc(const BipartiteState& phi1, const BipartiteState& phi2,
                                       const MarginCondition& cond, const SearchOptions& options);

}  // namespace mdisc
