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

#include "mdisc/locc.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <utility>

#include "mdisc/errors.hpp"
#include "mdisc/parallel.hpp"
#include "simplex.hpp"

namespace mdisc {
namespace {

constexpr double kNormTol = 1e-12;
constexpr double kRankTol = 1e-9;
// Branches lighter than this carry no usable direction.
constexpr double kEmptyWeight = 1e-30;
constexpr double kTargetFraction = 0.1;
constexpr double kNewtonTol = 1e-14;
constexpr int kNewtonIterations = 60;
constexpr int kPinningPasses = 6;

double max_abs(const CMat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

CMat projector(const CVec& v) { return v * v.adjoint(); }

// Unit vector orthogonal to unit vector v.
CVec orthogonal_unit(const CVec& v) {
  Eigen::Index k = 0;
  v.cwiseAbs().minCoeff(&k);
  CVec e = CVec::Zero(v.size());
  e[k] = 1.0;
  e -= v * v.dot(e);
  return e / e.norm();
}

void check_priors(double s, double t) {
  if (!(s > 0.0) || !(t > 0.0) || std::abs(s + t - 1.0) > kNormTol) {
    throw DomainError("priors must be positive and sum to 1");
  }
}

void check_unambiguous_regime(double c, double s, double t) {
  if (std::sqrt(s / t) < c - kNormTol || std::sqrt(t / s) < c - kNormTol) {
    std::ostringstream os;
    os << "unambiguous discrimination with priors (" << s << ", " << t
       << ") requires sqrt(s/t) and sqrt(t/s) >= |<phi1|phi2>| = " << c;
    throw RegimeError(os.str());
  }
}

// Inequality slacks of one branch in weighted form.
struct BranchSlacks {
  double nonneg;
  double upper1;
  double upper2;
  double min() const { return std::min({nonneg, upper1, upper2}); }
};

BranchSlacks branch_slacks(double s_i, double t_i, Complex w, double s, double t) {
  return {w.real(), std::sqrt(s / t) * s_i - w.real(), std::sqrt(t / s) * t_i - w.real()};
}

// State-independent part of check_decomposition.
DecompositionCheck check_structure(const AliceDecomposition& dec, double s, double t) {
  DecompositionCheck c;
  const auto n = static_cast<Eigen::Index>(dec.branches());
  if (dec.alice_states.rows() != n || dec.alice_states.cols() != n ||
      n != static_cast<Eigen::Index>(dec.ancilla_dim) * dec.dim_a ||
      dec.weights_t.size() != dec.branches() || dec.bob_eta.size() != dec.branches() ||
      dec.bob_gamma.size() != dec.branches()) {
    throw ValidationError("decomposition has inconsistent dimensions");
  }
  c.orthonormality = max_abs(dec.alice_states.adjoint() * dec.alice_states - CMat::Identity(n, n));
  double sum_s = 0.0;
  double sum_t = 0.0;
  for (std::size_t i = 0; i < dec.branches(); ++i) {
    const double s_i = dec.weights_s[i];
    const double t_i = dec.weights_t[i];
    sum_s += s_i;
    sum_t += t_i;
    c.negativity = std::max({c.negativity, -s_i, -t_i});
    c.orthonormality = std::max({c.orthonormality, std::abs(dec.bob_eta[i].norm() - 1.0),
                                 std::abs(dec.bob_gamma[i].norm() - 1.0)});
    const Complex w = dec.weighted_overlap(i);
    const BranchSlacks sl = branch_slacks(s_i, t_i, w, s, t);
    c.imaginary = std::max(c.imaginary, std::abs(w.imag()));
    c.negativity = std::max(c.negativity, -sl.nonneg);
    c.bound_violation = std::max({c.bound_violation, -sl.upper1, -sl.upper2});
    c.branch_slack.push_back(sl.min());
  }
  c.weight_sums = std::max(std::abs(sum_s - 1.0), std::abs(sum_t - 1.0));
  return c;
}

// ---------------------------------------------------------------------------
// Decomposition search.
//
// Alice's measurement is parametrized by an unconstrained complex d_A x n
// matrix Z; X = (Z Z^dag)^{-1/2} Z has orthonormal rows, so its columns x_I
// form a rank-one POVM on A that extends to an orthonormal basis of RA.

struct Branches {
  Eigen::VectorXd s;
  Eigen::VectorXd t;
  CVec w;
};

class DecompositionSearch {
 public:
  DecompositionSearch(const CMat& phi1, const CMat& phi2, double s, double t, int ancilla_dim)
      : phi1_(phi1), phi2_(phi2), s_(s), t_(t) {
    da_ = static_cast<int>(phi1.rows());
    n_ = ancilla_dim * da_;
    const double c = phi1.cwiseProduct(phi2.conjugate()).sum().real();
    totals_ = {c, std::sqrt(s / t) - c, std::sqrt(t / s) - c};
  }

  int params() const { return 2 * da_ * n_; }

  // Rows-orthonormal X; false when Z is too close to rank deficient.
  bool alice_rows(const Eigen::VectorXd& z, CMat& x) const {
    CMat zm(da_, n_);
    for (int a = 0; a < da_; ++a) {
      for (int i = 0; i < n_; ++i) {
        const int k = 2 * (a * n_ + i);
        zm(a, i) = Complex(z[k], z[k + 1]);
      }
    }
    const Eigen::SelfAdjointEigenSolver<CMat> es(zm * zm.adjoint());
    if (es.eigenvalues().minCoeff() < 1e-12) return false;
    x = es.operatorInverseSqrt() * zm;
    return true;
  }

  Branches branches(const CMat& x) const {
    Branches b{Eigen::VectorXd(n_), Eigen::VectorXd(n_), CVec(n_)};
    for (int i = 0; i < n_; ++i) {
      const CVec u = phi1_.transpose() * x.col(i).conjugate();
      const CVec v = phi2_.transpose() * x.col(i).conjugate();
      b.s[i] = u.squaredNorm();
      b.t[i] = v.squaredNorm();
      b.w[i] = u.dot(v);
    }
    return b;
  }

  double slack(const Branches& b, int family, int i) const {
    const BranchSlacks sl = branch_slacks(b.s[i], b.t[i], b.w[i], s_, t_);
    return family == 0 ? sl.nonneg : family == 1 ? sl.upper1 : sl.upper2;
  }

  bool tight(int family) const { return totals_[static_cast<std::size_t>(family)] <= kNormTol; }

  // Zero exactly when every branch is real and clears a margin proportional
  // to its weight on every family that has room.
  double penalty(const Eigen::VectorXd& z) const {
    CMat x;
    if (!alice_rows(z, x)) return 1e3;
    const Branches b = branches(x);
    double q = 0.0;
    for (int i = 0; i < n_; ++i) {
      q += b.w[i].imag() * b.w[i].imag();
      for (int k = 0; k < 3; ++k) {
        const double total = std::max(0.0, totals_[static_cast<std::size_t>(k)]);
        const double target = kTargetFraction * total * 0.5 * (b.s[i] + b.t[i]);
        const double gap = target - slack(b, k, i);
        if (gap > 0.0) q += gap * gap;
      }
    }
    return q;
  }

  using Pins = std::vector<std::pair<int, int>>;

  Eigen::VectorXd equations(const Eigen::VectorXd& z, const Pins& pins) const {
    CMat x;
    if (!alice_rows(z, x)) return Eigen::VectorXd::Constant(1, 1e3);
    const Branches b = branches(x);
    std::vector<double> eq;
    for (int i = 0; i < n_; ++i) eq.push_back(b.w[i].imag());
    for (int k = 0; k < 3; ++k) {
      if (!tight(k)) continue;
      for (int i = 0; i < n_; ++i) eq.push_back(slack(b, k, i));
    }
    for (const auto& [k, i] : pins) eq.push_back(slack(b, k, i));
    return Eigen::Map<Eigen::VectorXd>(eq.data(), static_cast<Eigen::Index>(eq.size()));
  }

  // Damped least-norm Newton iteration on the active equations.
  Eigen::VectorXd newton(Eigen::VectorXd z, const Pins& pins) const {
    constexpr double h = 1e-7;
    Eigen::VectorXd g = equations(z, pins);
    for (int it = 0; it < kNewtonIterations; ++it) {
      const double err = g.cwiseAbs().maxCoeff();
      if (err <= kNewtonTol) break;
      Eigen::MatrixXd jac(g.size(), z.size());
      for (Eigen::Index p = 0; p < z.size(); ++p) {
        Eigen::VectorXd zp = z;
        Eigen::VectorXd zm = z;
        zp[p] += h;
        zm[p] -= h;
        const Eigen::VectorXd gp = equations(zp, pins);
        const Eigen::VectorXd gm = equations(zm, pins);
        if (gp.size() != g.size() || gm.size() != g.size()) return z;
        jac.col(p) = (gp - gm) / (2.0 * h);
      }
      const Eigen::VectorXd step = jac.completeOrthogonalDecomposition().solve(-g);
      double scale = 1.0;
      bool moved = false;
      for (int ls = 0; ls < 12; ++ls, scale *= 0.5) {
        const Eigen::VectorXd trial = z + scale * step;
        const Eigen::VectorXd gt = equations(trial, pins);
        if (gt.size() == g.size() && gt.cwiseAbs().maxCoeff() < err) {
          z = trial;
          g = gt;
          moved = true;
          break;
        }
      }
      if (!moved) break;
    }
    return z;
  }

  // Newton on the equalities, pinning any inequality that goes negative.
  Eigen::VectorXd polish(Eigen::VectorXd z) const {
    Pins pins;
    for (int pass = 0; pass < kPinningPasses; ++pass) {
      z = newton(z, pins);
      CMat x;
      if (!alice_rows(z, x)) return z;
      const Branches b = branches(x);
      bool added = false;
      for (int k = 0; k < 3; ++k) {
        if (tight(k)) continue;
        for (int i = 0; i < n_; ++i) {
          if (slack(b, k, i) >= -kNewtonTol) continue;
          if (std::find(pins.begin(), pins.end(), std::pair{k, i}) != pins.end()) continue;
          pins.emplace_back(k, i);
          added = true;
        }
      }
      if (!added) break;
    }
    return z;
  }

  AliceDecomposition decompose(const CMat& x) const {
    AliceDecomposition dec;
    dec.dim_a = da_;
    dec.dim_b = static_cast<int>(phi1_.cols());
    dec.ancilla_dim = n_ / da_;
    // Complete the rows of X to a unitary on RA.
    const Eigen::HouseholderQR<CMat> qr(x.adjoint());
    const CMat q = qr.householderQ();
    CMat u(n_, n_);
    u.topRows(da_) = x;
    if (n_ > da_) u.bottomRows(n_ - da_) = q.rightCols(n_ - da_).adjoint();
    dec.alice_states = u;
    for (int i = 0; i < n_; ++i) {
      const CVec xi = u.col(i).head(da_);
      const CVec ui = phi1_.transpose() * xi.conjugate();
      const CVec vi = phi2_.transpose() * xi.conjugate();
      const double s_i = ui.squaredNorm();
      const double t_i = vi.squaredNorm();
      CVec gamma = t_i > kEmptyWeight ? CVec(vi / std::sqrt(t_i)) : CVec();
      CVec eta = s_i > kEmptyWeight ? CVec(ui / std::sqrt(s_i)) : CVec();
      if (gamma.size() == 0 && eta.size() == 0) {
        gamma = CVec::Unit(dec.dim_b, 0);
        eta = dec.dim_b > 1 ? CVec(CVec::Unit(dec.dim_b, 1)) : gamma;
      } else if (eta.size() == 0) {
        eta = dec.dim_b > 1 ? orthogonal_unit(gamma) : gamma;
      } else if (gamma.size() == 0) {
        gamma = dec.dim_b > 1 ? orthogonal_unit(eta) : eta;
      }
      dec.weights_s.push_back(s_i);
      dec.weights_t.push_back(t_i);
      dec.bob_eta.push_back(std::move(eta));
      dec.bob_gamma.push_back(std::move(gamma));
    }
    return dec;
  }

 private:
  CMat phi1_;
  CMat phi2_;
  double s_;
  double t_;
  int da_ = 0;
  int n_ = 0;
  std::array<double, 3> totals_{};
};

struct StartResult {
  bool ok = false;
  double residual = std::numeric_limits<double>::infinity();
  AliceDecomposition dec;
  DecompositionCheck check;
};

StartResult run_start(const DecompositionSearch& search, const BipartiteState& phi1,
                      const BipartiteState& phi2, double s, double t, long budget,
                      std::uint64_t seed, std::size_t index) {
  auto rng = substream(seed, index);
  std::normal_distribution<double> gauss;
  Eigen::VectorXd z(search.params());
  for (Eigen::Index k = 0; k < z.size(); ++k) z[k] = gauss(rng);

  const detail::Objective f = [&](const Eigen::VectorXd& v) { return search.penalty(v); };
  long remaining = budget;
  double step = 0.5;
  while (remaining > 0) {
    const auto res = detail::minimize_simplex(f, z, step, std::min<long>(remaining, 4000), 1e-12);
    remaining -= std::max<long>(1, res.evaluations);
    z = res.x;
    if (res.value < 1e-18) break;
    step = 0.1;
  }
  z = search.polish(z);

  StartResult out;
  CMat x;
  if (!search.alice_rows(z, x)) return out;
  out.dec = search.decompose(x);
  out.check = check_decomposition(out.dec, phi1, phi2, s, t);
  out.residual = out.check.residual();
  out.ok = out.check.ok();
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

BipartiteState::BipartiteState(CMat amplitudes) : amp_(std::move(amplitudes)) {
  const auto da = amp_.rows();
  const auto db = amp_.cols();
  if (da < 1 || db < 1 || da > kMaxLocalDim || db > kMaxLocalDim || da * db < 2) {
    throw ValidationError("bipartite local dimensions must lie in 1..4 with d_A d_B >= 2");
  }
  if (!amp_.allFinite() || std::abs(amp_.norm() - 1.0) > kNormTol) {
    throw ValidationError("bipartite state is not normalized");
  }
}

BipartiteState BipartiteState::from_vector(const CVec& v, int dim_a, int dim_b) {
  if (v.size() != static_cast<Eigen::Index>(dim_a) * dim_b) {
    throw ValidationError("vector length does not match d_A d_B");
  }
  CMat m(dim_a, dim_b);
  for (int a = 0; a < dim_a; ++a) {
    for (int b = 0; b < dim_b; ++b) m(a, b) = v[a * dim_b + b];
  }
  return BipartiteState(std::move(m));
}

BipartiteState BipartiteState::normalized(const CMat& amplitudes) {
  const double norm = amplitudes.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw ValidationError("zero bipartite state");
  return BipartiteState(amplitudes / norm);
}

CVec BipartiteState::vector() const {
  CVec v(amp_.size());
  for (Eigen::Index a = 0; a < amp_.rows(); ++a) {
    for (Eigen::Index b = 0; b < amp_.cols(); ++b) v[a * amp_.cols() + b] = amp_(a, b);
  }
  return v;
}

Complex BipartiteState::inner(const BipartiteState& other) const {
  if (other.amp_.rows() != amp_.rows() || other.amp_.cols() != amp_.cols()) {
    throw ValidationError("bipartite states have different dimensions");
  }
  return amp_.conjugate().cwiseProduct(other.amp_).sum();
}

BipartiteState BipartiteState::rephased(Complex phase) const {
  if (std::abs(std::abs(phase) - 1.0) > kNormTol) throw ValidationError("phase must be unimodular");
  return BipartiteState(amp_ * phase);
}

SubspacePovm global_unambiguous_povm(const CVec& phi1, const CVec& phi2, double s, double t) {
  check_priors(s, t);
  if (phi1.size() != phi2.size() || std::abs(phi1.norm() - 1.0) > kNormTol ||
      std::abs(phi2.norm() - 1.0) > kNormTol) {
    throw ValidationError("states must be normalized vectors of equal length");
  }
  const Complex ov = phi1.dot(phi2);
  const double c = std::abs(ov);
  if (c >= 1.0 - kNormTol) throw DomainError("states are parallel");
  check_unambiguous_regime(c, s, t);

  const double d = 1.0 - c * c;
  const double a1 = std::max(0.0, (1.0 - std::sqrt(t / s) * c) / d);
  const double a2 = std::max(0.0, (1.0 - std::sqrt(s / t) * c) / d);
  const CVec phi2_perp = (phi1 - phi2 * std::conj(ov)).normalized();
  const CVec phi1_perp = (phi2 - phi1 * ov).normalized();
  const CMat p = projector(phi1) + projector(phi1_perp);

  SubspacePovm povm;
  povm.effects[0] = a1 * projector(phi2_perp);
  povm.effects[1] = a2 * projector(phi1_perp);
  povm.effects[2] = p - povm.effects[0] - povm.effects[1];
  return povm;
}

SubspacePovm global_unambiguous_povm(const BipartiteState& phi1, const BipartiteState& phi2,
                                     double s, double t) {
  return global_unambiguous_povm(phi1.vector(), phi2.vector(), s, t);
}

UnambiguousProblem povm_to_unambiguous(const SubspacePovm& povm) {
  const auto dim = povm.effects[0].rows();
  std::array<CVec, 3> psi;
  UnambiguousProblem prob;
  for (std::size_t mu = 0; mu < 3; ++mu) {
    const CMat& e = povm.effects[mu];
    if (e.rows() != dim || e.cols() != dim) throw ValidationError("POVM elements differ in size");
    if (max_abs(e - e.adjoint()) > kRankTol) {
      throw ValidationError("E" + std::to_string(mu + 1) + " is not Hermitian");
    }
    const Eigen::SelfAdjointEigenSolver<CMat> es(0.5 * (e + e.adjoint()));
    const auto& ev = es.eigenvalues();
    if (ev[0] < -kRankTol) {
      throw ValidationError("E" + std::to_string(mu + 1) + " is not positive semidefinite");
    }
    if (dim > 1 && ev[dim - 2] > kRankTol) {
      throw NotRepresentableError("E" + std::to_string(mu + 1) + " has rank greater than one");
    }
    prob.b[mu] = std::max(0.0, ev[dim - 1]);
    psi[mu] = es.eigenvectors().col(dim - 1);
  }
  const CMat sum = povm.effects[0] + povm.effects[1] + povm.effects[2];
  if (max_abs(sum * sum - sum) > kRankTol || std::abs(sum.trace().real() - 2.0) > kRankTol) {
    throw NotRepresentableError("elements do not sum to a projector onto a two-dimensional space");
  }
  const Eigen::SelfAdjointEigenSolver<CMat> top(povm.effects[0] + povm.effects[1],
                                                Eigen::EigenvaluesOnly);
  if (std::abs(top.eigenvalues()[dim - 1] - 1.0) > kRankTol) {
    throw NotRepresentableError("largest eigenvalue of E1 + E2 is not 1");
  }

  const bool has1 = prob.b[0] > kRankTol;
  const bool has2 = prob.b[1] > kRankTol;
  double r = 1.0;
  if (!has1 && !has2) {
    throw NotRepresentableError("E1 and E2 both vanish");
  } else if (!has2) {
    // E2 = 0: any psi2 at overlap 1/sqrt2 inside V with r = overlap works.
    psi[1] = (psi[0] + psi[2]) / std::sqrt(2.0);
    r = 1.0 / std::sqrt(2.0);
  } else if (!has1) {
    psi[0] = (psi[1] + psi[2]) / std::sqrt(2.0);
    r = std::sqrt(2.0);
  }
  const Complex ov = psi[0].dot(psi[1]);
  const double c = std::abs(ov);
  if (c >= 1.0 - kNormTol) throw NotRepresentableError("E1 and E2 are parallel");
  if (has1 && has2) {
    if (c < kNormTol) {
      r = 1.0;
    } else {
      const double num1 = 1.0 - prob.b[0] * (1.0 - c * c);
      const double num2 = 1.0 - prob.b[1] * (1.0 - c * c);
      r = num1 >= num2 ? num1 / c : c / num2;
    }
  }
  prob.overlap = c;
  prob.r = r;
  prob.s = 1.0 / (1.0 + r * r);
  prob.t = r * r / (1.0 + r * r);
  prob.psi2_perp = (psi[0] - psi[1] * std::conj(ov)).normalized();
  prob.psi1_perp = (psi[1] - psi[0] * ov).normalized();
  const Complex phase = prob.psi2_perp.dot(prob.psi1_perp);
  if (std::abs(phase) > 0.0) prob.psi1_perp *= std::conj(phase) / std::abs(phase);
  return prob;
}

double b_relation_residual(const UnambiguousProblem& p) {
  const double c2 = p.overlap * p.overlap;
  return p.b[0] + p.b[1] - 1.0 - p.b[0] * p.b[1] * (1.0 - c2);
}

CMat AliceDecomposition::alice_effect(std::size_t branch) const {
  const CVec x = alice_states.col(static_cast<Eigen::Index>(branch)).head(dim_a);
  return projector(x);
}

Complex AliceDecomposition::weighted_overlap(std::size_t branch) const {
  return std::sqrt(std::max(0.0, weights_s[branch] * weights_t[branch])) *
         bob_eta[branch].dot(bob_gamma[branch]);
}

double DecompositionCheck::residual() const {
  return std::max(
      {reconstruction, orthonormality, weight_sums, imaginary, negativity, bound_violation});
}

DecompositionCheck check_decomposition(const AliceDecomposition& dec, const BipartiteState& phi1,
                                       const BipartiteState& phi2, double s, double t) {
  check_priors(s, t);
  if (phi1.dim_a() != dec.dim_a || phi1.dim_b() != dec.dim_b || phi2.dim_a() != dec.dim_a ||
      phi2.dim_b() != dec.dim_b) {
    throw ValidationError("decomposition and states have different dimensions");
  }
  DecompositionCheck c = check_structure(dec, s, t);
  const auto n = static_cast<Eigen::Index>(dec.branches());
  const int db = dec.dim_b;
  CVec lhs1 = CVec::Zero(n * db);
  CVec lhs2 = CVec::Zero(n * db);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    const double rs = std::sqrt(std::max(0.0, dec.weights_s[k]));
    const double rt = std::sqrt(std::max(0.0, dec.weights_t[k]));
    for (Eigen::Index row = 0; row < n; ++row) {
      lhs1.segment(row * db, db) += rs * dec.alice_states(row, i) * dec.bob_eta[k];
      lhs2.segment(row * db, db) += rt * dec.alice_states(row, i) * dec.bob_gamma[k];
    }
  }
  CVec rhs1 = CVec::Zero(n * db);
  CVec rhs2 = CVec::Zero(n * db);
  rhs1.head(phi1.vector().size()) = phi1.vector();
  rhs2.head(phi2.vector().size()) = phi2.vector();
  c.reconstruction = std::max((lhs1 - rhs1).cwiseAbs().maxCoeff(),
                              (lhs2 - rhs2).cwiseAbs().maxCoeff());
  return c;
}

AliceDecomposition find_alice_decomposition(const BipartiteState& phi1,
                                            const BipartiteState& phi2, double s, double t,
                                            const SearchOptions& options) {
  check_priors(s, t);
  if (phi1.dim_a() != phi2.dim_a() || phi1.dim_b() != phi2.dim_b()) {
    throw ValidationError("states have different dimensions");
  }
  if (options.ancilla_dim < 1 || options.ancilla_dim > 4) {
    throw DomainError("ancilla dimension must lie in 1..4");
  }
  if (options.starts < 1 || options.budget < options.starts) {
    throw DomainError("search needs at least one start and one evaluation per start");
  }
  const Complex ov = phi1.inner(phi2);
  if (std::abs(ov.imag()) > kNormTol || ov.real() < -kNormTol) {
    throw ValidationError("<Psi1|Psi2> must be real and nonnegative");
  }
  if (ov.real() >= 1.0 - kNormTol) throw DomainError("states are parallel");
  check_unambiguous_regime(ov.real(), s, t);

  const DecompositionSearch search(phi1.amplitudes(), phi2.amplitudes(), s, t,
                                   options.ancilla_dim);
  const auto starts = static_cast<std::size_t>(options.starts);
  const long per_start = options.budget / options.starts;
  const std::size_t batch = std::max<std::size_t>(1, worker_count());
  StartResult best;
  for (std::size_t begin = 0; begin < starts; begin += batch) {
    const std::size_t count = std::min(batch, starts - begin);
    std::vector<StartResult> results(count);
    parallel_for(count, [&](std::size_t k) {
      results[k] = run_start(search, phi1, phi2, s, t, per_start, options.seed, begin + k);
    });
    for (auto& r : results) {
      if (r.ok) return std::move(r.dec);
      if (r.residual < best.residual) best = std::move(r);
    }
  }
  const auto& c = best.check;
  throw SearchFailure("no decomposition met the invariants within the budget", best.residual,
                      {{"imaginary", c.imaginary},
                       {"negativity", c.negativity},
                       {"bound", c.bound_violation},
                       {"reconstruction", c.reconstruction}});
}

// Bob's (e1, e2) for one branch, u = sqrt(s s_I) eta and v = sqrt(t t_I) gamma.
// Candidates are the unambiguous measurement on span{eta, gamma} and the
// one-state limits; the one closest to the target matrix elements
// <u|e1|u> = |u|^2 - Re<u|v>, <v|e2|v> = |v|^2 - Re<u|v>, e1 v = 0, e2 u = 0
// wins.
std::pair<CMat, CMat> bob_branch(const CVec& u, const CVec& v) {
  const auto db = u.size();
  const double su = u.squaredNorm();
  const double tv = v.squaredNorm();
  const double w = u.dot(v).real();
  const auto error = [&](const CMat& e1, const CMat& e2) {
    double err = std::abs(u.dot(e1 * u).real() - (su - w));
    err = std::max(err, std::abs(v.dot(e2 * v).real() - (tv - w)));
    err = std::max(err, (e1 * v).norm());
    return std::max(err, (e2 * u).norm());
  };
  std::vector<std::pair<CMat, CMat>> candidates;
  candidates.emplace_back(CMat::Zero(db, db), CMat::Zero(db, db));
  if (su > kEmptyWeight) candidates.emplace_back(projector(u.normalized()), CMat::Zero(db, db));
  if (tv > kEmptyWeight) candidates.emplace_back(CMat::Zero(db, db), projector(v.normalized()));
  if (su > kEmptyWeight && tv > kEmptyWeight) {
    const CVec eta = u.normalized();
    const CVec gamma = v.normalized();
    const Complex ov = eta.dot(gamma);
    const double o = std::min(std::abs(ov), 1.0);
    if (o < 1.0 - kNormTol) {
      const double kappa = std::sqrt(tv / su);
      const double d = 1.0 - o * o;
      const double a1 = std::clamp((1.0 - kappa * o) / d, 0.0, 1.0);
      const double a2 = std::clamp((1.0 - o / kappa) / d, 0.0, 1.0);
      const CVec gamma_perp = (eta - gamma * gamma.dot(eta)).normalized();
      const CVec eta_perp = (gamma - eta * ov).normalized();
      candidates.emplace_back(a1 * projector(gamma_perp), a2 * projector(eta_perp));
    }
  }
  std::size_t best = 0;
  double best_err = error(candidates[0].first, candidates[0].second);
  for (std::size_t k = 1; k < candidates.size(); ++k) {
    const double err = error(candidates[k].first, candidates[k].second);
    if (err < best_err) {
      best = k;
      best_err = err;
    }
  }
  return candidates[best];
}

LoccPovm build_locc_povm(const AliceDecomposition& dec, double s, double t) {
  check_priors(s, t);
  const DecompositionCheck c = check_structure(dec, s, t);
  if (!c.ok()) {
    std::ostringstream os;
    os << "decomposition violates its invariants (residual " << c.residual() << ")";
    throw ValidationError(os.str());
  }
  const int db = dec.dim_b;
  const CMat id_b = CMat::Identity(db, db);
  LoccPovm locc;
  locc.dim_a = dec.dim_a;
  locc.dim_b = db;
  CMat alice_sum = CMat::Zero(dec.dim_a, dec.dim_a);
  for (std::size_t i = 0; i < dec.branches(); ++i) {
    const double s_i = dec.weights_s[i];
    const double t_i = dec.weights_t[i];
    const CVec& eta = dec.bob_eta[i];
    const CVec& gamma = dec.bob_gamma[i];
    LoccBranch br;
    br.alice_effect = dec.alice_effect(i);
    alice_sum += br.alice_effect;
    const auto [e1, e2] = bob_branch(std::sqrt(s * s_i) * eta, std::sqrt(t * t_i) * gamma);
    br.bob_effects = {e1, e2, id_b - e1 - e2};
    for (std::size_t mu = 0; mu < 3; ++mu) {
      const Eigen::SelfAdjointEigenSolver<CMat> es(br.bob_effects[mu], Eigen::EigenvaluesOnly);
      if (es.eigenvalues()[0] < -kPovmTol) {
        throw ValidationError("Bob's effect is not positive semidefinite on branch " +
                              std::to_string(i));
      }
    }
    locc.branches.push_back(std::move(br));
  }
  if (max_abs(alice_sum - CMat::Identity(dec.dim_a, dec.dim_a)) > kLoccTol) {
    throw ValidationError("Alice's effects do not sum to the identity");
  }
  return locc;
}

SubspacePovm LoccPovm::assemble() const {
  const int dim = dim_a * dim_b;
  SubspacePovm out;
  for (auto& e : out.effects) e = CMat::Zero(dim, dim);
  for (const auto& br : branches) {
    for (std::size_t mu = 0; mu < 3; ++mu) {
      out.effects[mu] += Eigen::kroneckerProduct(br.alice_effect, br.bob_effects[mu]).eval();
    }
  }
  return out;
}

double verify_compression(const SubspacePovm& global, const LoccPovm& locc, const CVec& v0,
                          const CVec& v1) {
  const SubspacePovm full = locc.assemble();
  CMat basis(v0.size(), 2);
  basis << v0, v1;
  double worst = 0.0;
  for (std::size_t mu = 0; mu < 3; ++mu) {
    if (global.effects[mu].rows() != basis.rows() || full.effects[mu].rows() != basis.rows()) {
      throw ValidationError("POVMs and basis live in different spaces");
    }
    worst = std::max(
        worst, max_abs(basis.adjoint() * (global.effects[mu] - full.effects[mu]) * basis));
  }
  return worst;
}

LoccPipelineResult margin_povm_to_locc(const BipartiteState& phi1, const BipartiteState& phi2,
                                       const MarginCondition& cond, const SearchOptions& options) {
  if (phi1.dim_a() != phi2.dim_a() || phi1.dim_b() != phi2.dim_b()) {
    throw ValidationError("states have different dimensions");
  }
  const CVec v0 = phi1.vector();
  CVec w = phi2.vector();
  const Complex raw = v0.dot(w);
  const double c = std::abs(raw);
  if (c >= 1.0 - kNormTol) {
    throw DomainError("|<Phi1|Phi2>| = 1; the states cannot be discriminated");
  }
  if (c > 0.0) w *= std::conj(raw) / c;
  const CVec v1 = (w - v0 * c).normalized();

  const StatePair pair(PureState(1.0, 0.0), PureState(c, std::sqrt(1.0 - c * c)));
  const Povm3 optimal = optimal_povm(pair, cond);

  LoccPipelineResult res;
  res.closed_form = success(c, cond);
  CMat basis(v0.size(), 2);
  basis << v0, v1;
  for (int mu = 0; mu < 3; ++mu) {
    const CMat m = operator_matrix(optimal[mu + 1]);
    res.global.effects[static_cast<std::size_t>(mu)] = basis * m * basis.adjoint();
  }

  res.problem = povm_to_unambiguous(res.global);
  res.b_relation = b_relation_residual(res.problem);
  const SubspacePovm again =
      global_unambiguous_povm(res.problem.first(), res.problem.second(), res.problem.s,
                              res.problem.t);
  for (std::size_t mu = 0; mu < 3; ++mu) {
    res.round_trip_error =
        std::max(res.round_trip_error, max_abs(again.effects[mu] - res.global.effects[mu]));
  }
  {
    const double oc = res.problem.overlap;
    const double d = 1.0 - oc * oc;
    const double a1 = (1.0 - res.problem.r * oc) / d;
    const double a2 = (1.0 - oc / res.problem.r) / d;
    if (res.problem.b[0] > kRankTol) {
      res.b_round_trip_error = std::abs(a1 - res.problem.b[0]);
    }
    if (res.problem.b[1] > kRankTol) {
      res.b_round_trip_error = std::max(res.b_round_trip_error, std::abs(a2 - res.problem.b[1]));
    }
  }

  const int da = phi1.dim_a();
  const int db = phi1.dim_b();
  const auto psi1 = BipartiteState::from_vector(res.problem.first(), da, db);
  const auto psi2 = BipartiteState::from_vector(res.problem.second(), da, db);
  res.decomposition =
      find_alice_decomposition(psi1, psi2, res.problem.s, res.problem.t, options);
  res.check = check_decomposition(res.decomposition, psi1, psi2, res.problem.s, res.problem.t);
  res.locc = build_locc_povm(res.decomposition, res.problem.s, res.problem.t);
  res.max_deviation = verify_compression(res.global, res.locc, v0, v1);

  auto completed = res.global.effects;
  completed[2] += CMat::Identity(v0.size(), v0.size()) - basis * basis.adjoint();
  res.global_report = evaluate_full(completed, phi1.vector(), phi2.vector());
  res.locc_report = evaluate_full(res.locc.assemble().effects, phi1.vector(), phi2.vector());
  res.margin_slack = check_margin(res.locc_report, cond);
  return res;
}

}  // namespace mdisc
