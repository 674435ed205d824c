// Copyright 2026 The fidelimax authors
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

#ifndef FIDELIMAX_SADDLE_HPP
#define FIDELIMAX_SADDLE_HPP

// Saddle-point construction of the minimax fidelity estimator. The saddle
// value of Phi is computed by splitting it into a scalar convex outer
// minimization over alpha (golden section on log alpha) and a concave inner
// maximization over density-matrix pairs (accelerated projected gradient).
// Half the saddle value is the risk of the extracted affine estimator.

#include <cmath>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "fidelimax/apg.hpp"
#include "fidelimax/errors.hpp"
#include "fidelimax/estimator.hpp"
#include "fidelimax/linalg.hpp"
#include "fidelimax/operators.hpp"
#include "fidelimax/serialization.hpp"

namespace fidelimax {

struct SolverConfig {
  double inner_tolerance = 1e-6;   // relative objective change in the inner solve
  int inner_max_iters = 5000;
  double outer_tolerance = 1e-6;   // relative precision on alpha
  double alpha_lo = 1e-8;
  double alpha_hi = 1e3;
  double initial_step = 1.0;
  double step_shrink = 0.5;
  double sufficient_increase = 1e-4;
  double reported_precision = 1e-4;  // delta added to the reported risk
  double grad_tolerance = 1e-4;      // projected-gradient residual for convergence
  int stall_iterations = 20;

  void validate() const {
    if (inner_tolerance <= 0 || outer_tolerance <= 0 || reported_precision <= 0 ||
        grad_tolerance <= 0) {
      throw invalid_input_error("solver config: tolerances must be positive");
    }
    if (!(alpha_lo > 0 && alpha_lo < alpha_hi)) {
      throw invalid_input_error("solver config: need 0 < alpha_lo < alpha_hi");
    }
    if (inner_max_iters < 1 || stall_iterations < 1) {
      throw invalid_input_error("solver config: iteration limits must be positive");
    }
  }

  ApgOptions apg() const {
    ApgOptions o;
    o.max_iters = inner_max_iters;
    o.rel_tolerance = inner_tolerance;
    o.stall_iters = stall_iterations;
    o.grad_tolerance = grad_tolerance;
    o.initial_step = initial_step;
    o.step_shrink = step_shrink;
    o.sufficient_increase = sufficient_increase;
    return o;
  }
};

struct SaddlePoint {
  DensityMatrix chi1_star;
  DensityMatrix chi2_star;
  double alpha_star = 0.0;
  double saddle_value = 0.0;  // = 2 * risk before precision padding
  double precision = 0.0;     // delta
  int iterations = 0;         // inner iterations, summed over outer evaluations
  int outer_iterations = 0;
  bool converged = false;
  bool boundary_warning = false;  // alpha minimum pinned at the bracket edge

  SaddlePoint(DensityMatrix c1, DensityMatrix c2)
      : chi1_star(std::move(c1)), chi2_star(std::move(c2)) {}
};

namespace detail {

// Per-setting flattened effects: row k holds vec(E_k^T), so that the smoothed
// Born probabilities of chi are affine in vec(chi).
struct SettingCache {
  Cmatrix rows;
  double repetitions = 0.0;
  double bias = 0.0;  // eps_o / N
  Eigen::Index n_outcomes = 0;
};

struct PlanCache {
  Eigen::Index d = 0;
  double epsilon_o = 0.0;
  Cmatrix rho;
  std::vector<SettingCache> settings;

  explicit PlanCache(const MeasurementPlan& plan)
      : d(plan.dim), epsilon_o(plan.epsilon_o), rho(plan.target.mat()) {
    settings.reserve(plan.settings.size());
    for (const auto& s : plan.settings) {
      SettingCache c;
      c.n_outcomes = static_cast<Eigen::Index>(s.outcomes());
      c.repetitions = static_cast<double>(s.repetitions);
      c.bias = epsilon_o / static_cast<double>(c.n_outcomes);
      c.rows.resize(c.n_outcomes, d * d);
      for (Eigen::Index k = 0; k < c.n_outcomes; ++k) {
        Cmatrix t = s.effects[static_cast<std::size_t>(k)].mat().transpose();
        c.rows.row(k) = Eigen::Map<const Cvector>(t.data(), d * d).transpose();
      }
      settings.push_back(std::move(c));
    }
  }

  Rvector probs(const SettingCache& s, const Cmatrix& chi) const {
    const Eigen::Map<const Cvector> v(chi.data(), d * d);
    Rvector p = (s.rows * v).real();
    p.array() += s.bias;
    p /= (1.0 + epsilon_o);
    return p;
  }
};

// Objective and gradient of the inner problem for a fixed alpha:
//   f(chi1, chi2) = tr(rho chi1) - tr(rho chi2) + 2 alpha sum_l R_l ln S_l,
//   S_l = sum_k sqrt(p1_k p2_k).
struct InnerProblem {
  const PlanCache& cache;
  double alpha;

  double value(const Cmatrix& chi1, const Cmatrix& chi2) const {
    double f = trace_product(cache.rho, chi1) - trace_product(cache.rho, chi2);
    for (const auto& s : cache.settings) {
      if (s.repetitions == 0.0) continue;
      const Rvector p1 = cache.probs(s, chi1);
      const Rvector p2 = cache.probs(s, chi2);
      const double sl = (p1.cwiseMax(0.0).cwiseProduct(p2.cwiseMax(0.0)))
                            .cwiseSqrt()
                            .sum();
      if (sl <= 0.0) throw singularity_error("inner objective: zero affinity");
      f += 2.0 * alpha * s.repetitions * std::log(sl);
    }
    return f;
  }

  std::pair<Cmatrix, Cmatrix> gradient(const Cmatrix& chi1, const Cmatrix& chi2) const {
    Cmatrix g1 = cache.rho;
    Cmatrix g2 = -cache.rho;
    for (const auto& s : cache.settings) {
      if (s.repetitions == 0.0) continue;
      const Rvector p1 = cache.probs(s, chi1);
      const Rvector p2 = cache.probs(s, chi2);
      if (p1.minCoeff() <= 0.0 || p2.minCoeff() <= 0.0) {
        throw singularity_error(
            "inner gradient: zero outcome probability (epsilon_o smoothing disabled?)");
      }
      const Rvector root = (p1.cwiseProduct(p2)).cwiseSqrt();
      const double sl = root.sum();
      const double scale = alpha * s.repetitions / (sl * (1.0 + cache.epsilon_o));
      // d/dchi1 of 2 alpha R ln S = alpha R / S * sum_k sqrt(p2/p1) E_k / (1+eps_o)
      const Rvector c1 = scale * root.cwiseQuotient(p1);
      const Rvector c2 = scale * root.cwiseQuotient(p2);
      const Cvector w1 = s.rows.transpose() * c1.cast<Complex>();
      const Cvector w2 = s.rows.transpose() * c2.cast<Complex>();
      g1 += Eigen::Map<const Cmatrix>(w1.data(), cache.d, cache.d).transpose();
      g2 += Eigen::Map<const Cmatrix>(w2.data(), cache.d, cache.d).transpose();
    }
    return {hermitize(g1), hermitize(g2)};
  }
};

inline Rvector embed_pair(const Cmatrix& chi1, const Cmatrix& chi2) {
  const Rvector a = embed_hermitian(chi1);
  const Rvector b = embed_hermitian(chi2);
  Rvector u(a.size() + b.size());
  u << a, b;
  return u;
}

inline std::pair<Cmatrix, Cmatrix> unembed_pair(const Rvector& u, Eigen::Index d) {
  const Eigen::Index half = d * d;
  return {unembed_hermitian(u.head(half), d), unembed_hermitian(u.tail(half), d)};
}

// Scalar convex minimization of g(alpha) by golden section on log10(alpha).
// Returns the best evaluated point; `boundary` flags a minimum pinned at the
// bracket edge.
struct GoldenResult {
  double alpha = 0.0;
  double value = 0.0;
  int evaluations = 0;
  bool boundary = false;
};

inline GoldenResult golden_minimize(const std::function<double(double)>& g,
                                    double alpha_lo, double alpha_hi,
                                    double rel_tolerance) {
  constexpr double kInvPhi = 0.61803398874989485;
  const double lo0 = std::log10(alpha_lo);
  const double hi0 = std::log10(alpha_hi);
  double lo = lo0, hi = hi0;
  const double tol_u = rel_tolerance / std::log(10.0);

  GoldenResult res;
  double best_v = std::numeric_limits<double>::infinity();
  auto eval = [&](double u) {
    const double v = g(std::pow(10.0, u));
    ++res.evaluations;
    if (v < best_v) {
      best_v = v;
      res.alpha = std::pow(10.0, u);
      res.value = v;
    }
    return v;
  };

  double u1 = hi - kInvPhi * (hi - lo);
  double u2 = lo + kInvPhi * (hi - lo);
  double g1 = eval(u1);
  double g2 = eval(u2);
  int guard = 0;
  while (hi - lo > tol_u && ++guard < 200) {
    if (g1 <= g2) {
      hi = u2;
      u2 = u1;
      g2 = g1;
      u1 = hi - kInvPhi * (hi - lo);
      g1 = eval(u1);
    } else {
      lo = u1;
      u1 = u2;
      g1 = g2;
      u2 = lo + kInvPhi * (hi - lo);
      g2 = eval(u2);
    }
  }
  const double u_best = std::log10(res.alpha);
  res.boundary = (u_best - lo0 < 1e-3) || (hi0 - u_best < 1e-3);
  return res;
}

}  // namespace detail

/// Inner maximization result for one value of alpha.
struct InnerSolve {
  DensityMatrix chi1;
  DensityMatrix chi2;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  double pg_residual = 0.0;

  InnerSolve(DensityMatrix c1, DensityMatrix c2)
      : chi1(std::move(c1)), chi2(std::move(c2)) {}
};

namespace detail {
inline InnerSolve solve_inner(const PlanCache& cache, const MeasurementPlan& plan,
                              double alpha, const SolverConfig& config,
                              const std::optional<std::pair<Cmatrix, Cmatrix>>& warm);
}  // namespace detail

/// Exact evaluation of Phi at (chi1, chi2; phi, alpha), including the
/// epsilon_o smoothing. `phi` holds one coefficient vector per setting.
inline double eval_phi(const MeasurementPlan& plan, const DensityMatrix& chi1,
                       const DensityMatrix& chi2,
                       const std::vector<std::vector<double>>& phi, double alpha) {
  if (!(alpha > 0.0)) throw invalid_input_error("eval_phi: alpha must be positive");
  if (phi.size() != plan.settings.size()) {
    throw invalid_input_error("eval_phi: phi must have one vector per setting");
  }
  double value = trace_product(plan.target.mat(), chi1.mat()) -
                 trace_product(plan.target.mat(), chi2.mat()) +
                 2.0 * alpha * std::log(2.0 / plan.epsilon);
  for (std::size_t l = 0; l < plan.settings.size(); ++l) {
    const auto& s = plan.settings[l];
    if (phi[l].size() != s.outcomes()) {
      throw invalid_input_error("eval_phi: phi length mismatch in setting " +
                                std::to_string(l));
    }
    const Rvector p1 = born_probs(s, chi1, plan.epsilon_o);
    const Rvector p2 = born_probs(s, chi2, plan.epsilon_o);
    // log-sum-exp of (-phi_k/alpha + ln p1_k) and (+phi_k/alpha + ln p2_k)
    for (int side = 0; side < 2; ++side) {
      const Rvector& p = side == 0 ? p1 : p2;
      const double sgn = side == 0 ? -1.0 : 1.0;
      double m = -std::numeric_limits<double>::infinity();
      for (Eigen::Index k = 0; k < p.size(); ++k) {
        if (p[k] <= 0.0) continue;
        m = std::max(m, sgn * phi[l][static_cast<std::size_t>(k)] / alpha + std::log(p[k]));
      }
      if (!std::isfinite(m)) throw singularity_error("eval_phi: all probabilities vanish");
      double acc = 0.0;
      for (Eigen::Index k = 0; k < p.size(); ++k) {
        if (p[k] <= 0.0) continue;
        acc += std::exp(sgn * phi[l][static_cast<std::size_t>(k)] / alpha +
                        std::log(p[k]) - m);
      }
      value += alpha * static_cast<double>(s.repetitions) * (m + std::log(acc));
    }
  }
  return value;
}

/// Analytic gradient of the inner objective with respect to (chi1, chi2).
inline std::pair<HermitianOperator, HermitianOperator> inner_gradient(
    const MeasurementPlan& plan, double alpha, const DensityMatrix& chi1,
    const DensityMatrix& chi2) {
  if (!(alpha > 0.0)) throw invalid_input_error("inner_gradient: alpha must be positive");
  const detail::PlanCache cache(plan);
  const detail::InnerProblem problem{cache, alpha};
  auto [g1, g2] = problem.gradient(chi1.mat(), chi2.mat());
  return {HermitianOperator(std::move(g1)), HermitianOperator(std::move(g2))};
}

/// Maximize f(chi1, chi2) = tr(rho chi1) - tr(rho chi2) + 2 alpha ln AffH over
/// density-matrix pairs. Iterates stay feasible: every step ends in a
/// projection onto the density-matrix set.
inline InnerSolve inner_maximize(
    const MeasurementPlan& plan, double alpha, const SolverConfig& config = {},
    const std::optional<std::pair<Cmatrix, Cmatrix>>& warm_start = std::nullopt) {
  if (!(alpha > 0.0)) throw invalid_input_error("inner_maximize: alpha must be positive");
  config.validate();
  const detail::PlanCache cache(plan);
  return detail::solve_inner(cache, plan, alpha, config, warm_start);
}

namespace detail {

inline InnerSolve solve_inner(const PlanCache& cache, const MeasurementPlan& plan,
                              double alpha, const SolverConfig& config,
                              const std::optional<std::pair<Cmatrix, Cmatrix>>& warm) {
  const Eigen::Index d = cache.d;
  const InnerProblem problem{cache, alpha};

  const ApgObjective value = [&](const Rvector& u) {
    auto [c1, c2] = unembed_pair(u, d);
    return problem.value(c1, c2);
  };
  const ApgGradient gradient = [&](const Rvector& u) {
    auto [c1, c2] = unembed_pair(u, d);
    auto [g1, g2] = problem.gradient(c1, c2);
    return embed_pair(g1, g2);
  };
  const ApgProjection project = [&](const Rvector& u) {
    auto [c1, c2] = unembed_pair(u, d);
    return embed_pair(project_density(c1).mat(), project_density(c2).mat());
  };

  Rvector start;
  if (warm.has_value()) {
    start = embed_pair(warm->first, warm->second);
  } else {
    start = embed_pair(plan.target.mat(),
                       Cmatrix::Identity(d, d) / static_cast<double>(d));
  }

  const ApgResult apg = apg_maximize(value, gradient, project, start, config.apg());
  auto [c1, c2] = unembed_pair(apg.x, d);
  InnerSolve out(project_density(c1), project_density(c2));
  out.value = apg.value;
  out.iterations = apg.iterations;
  out.converged = apg.converged;
  out.pg_residual = apg.pg_residual;
  return out;
}

}  // namespace detail

/// Full saddle-point solve: golden-section minimization over alpha of
/// 2 alpha ln(2/eps) + max_(chi1,chi2) f, with warm-started inner solves.
inline SaddlePoint outer_minimize(const MeasurementPlan& plan,
                                  const SolverConfig& config = {}) {
  plan.validate();
  config.validate();
  const detail::PlanCache cache(plan);
  const double log_conf = std::log(2.0 / plan.epsilon);

  std::optional<std::pair<Cmatrix, Cmatrix>> warm;
  std::optional<InnerSolve> best_inner;
  double best_alpha = 0.0;
  int total_inner_iters = 0;

  const std::function<double(double)> objective = [&](double alpha) {
    const InnerSolve inner = detail::solve_inner(cache, plan, alpha, config, warm);
    total_inner_iters += inner.iterations;
    warm = std::make_pair(inner.chi1.mat(), inner.chi2.mat());
    const double g = 2.0 * alpha * log_conf + inner.value;
    if (!best_inner.has_value() ||
        g < 2.0 * best_alpha * log_conf + best_inner->value) {
      best_inner = inner;
      best_alpha = alpha;
    }
    return g;
  };

  const detail::GoldenResult outer = detail::golden_minimize(
      objective, config.alpha_lo, config.alpha_hi, config.outer_tolerance);

  SaddlePoint sp(best_inner->chi1, best_inner->chi2);
  sp.alpha_star = best_alpha;
  sp.saddle_value = 2.0 * best_alpha * log_conf + best_inner->value;
  sp.precision = config.reported_precision;
  sp.iterations = total_inner_iters;
  sp.outer_iterations = outer.evaluations;
  sp.converged = best_inner->converged;
  sp.boundary_warning = outer.boundary;
  return sp;
}

/// Read off the affine estimator from a solved saddle point:
/// a^(l)_k = (alpha*/2) ln(p1_k / p2_k), c = (tr(rho chi1*) + tr(rho chi2*))/2,
/// reported risk = saddle_value/2 + delta.
inline AffineEstimator extract_estimator(const SaddlePoint& sp,
                                         const MeasurementPlan& plan) {
  if (!sp.converged) {
    throw invalid_input_error("extract_estimator: saddle point did not converge");
  }
  AffineEstimator est;
  est.epsilon = plan.epsilon;
  est.epsilon_o = plan.epsilon_o;
  est.constant = std::clamp(0.5 * (trace_product(plan.target.mat(), sp.chi1_star.mat()) +
                                   trace_product(plan.target.mat(), sp.chi2_star.mat())),
                            0.0, 1.0);
  est.risk = std::max(0.0, 0.5 * sp.saddle_value) + sp.precision;
  est.plan_fingerprint = plan_fingerprint(plan);
  for (const auto& s : plan.settings) {
    const Rvector p1 = born_probs(s, sp.chi1_star, plan.epsilon_o);
    const Rvector p2 = born_probs(s, sp.chi2_star, plan.epsilon_o);
    std::vector<double> a(s.outcomes());
    for (Eigen::Index k = 0; k < p1.size(); ++k) {
      if (p1[k] <= 0.0 || p2[k] <= 0.0) {
        throw singularity_error("extract_estimator: zero outcome probability");
      }
      a[static_cast<std::size_t>(k)] = 0.5 * sp.alpha_star * std::log(p1[k] / p2[k]);
    }
    est.coefficients.push_back(std::move(a));
    est.repetitions.push_back(s.repetitions);
  }
  est.validate();
  return est;
}

/// Saddle-point solve specialized to a single two-outcome setting whose first
/// effect decomposes as Theta = w1 rho + w2 (I - rho) with w1 > w2. The inner
/// maximization runs over the two mixing weights (a1, a2) in [0, 1]^2 with
/// chi_i = a_i rho + (1 - a_i) (I - rho)/(d - 1), so the runtime does not
/// depend on the dimension except for assembling the outputs.
inline SaddlePoint solve_reduced_two_outcome(const MeasurementPlan& plan,
                                             const SolverConfig& config = {}) {
  plan.validate();
  config.validate();
  if (plan.settings.size() != 1 || plan.settings.front().outcomes() != 2) {
    throw invalid_input_error(
        "solve_reduced_two_outcome: plan must have a single two-outcome setting");
  }
  const auto& setting = plan.settings.front();
  const Cmatrix& rho = plan.target.mat();
  const Eigen::Index d = plan.dim;
  const Cmatrix delta_rho = Cmatrix::Identity(d, d) - rho;
  const Cmatrix& theta = setting.effects[0].mat();

  const double w1 = trace_product(theta, rho);
  const double w2 = trace_product(theta, delta_rho) / static_cast<double>(d - 1);
  const double residual =
      (theta - w1 * rho - w2 * delta_rho).cwiseAbs().maxCoeff();
  if (residual > 1e-8) {
    throw invalid_input_error(
        "solve_reduced_two_outcome: effect is not in span{rho, I - rho} (residual " +
        std::to_string(residual) + ")");
  }
  if (!(w1 > w2)) {
    throw invalid_input_error("solve_reduced_two_outcome: requires omega1 > omega2");
  }

  const double eps_o = plan.epsilon_o;
  const double reps = static_cast<double>(setting.repetitions);
  const double log_conf = std::log(2.0 / plan.epsilon);

  // Smoothed outcome probabilities of chi(a) = a rho + (1-a) rho_perp.
  const auto q0 = [&](double a) { return (w2 + (w1 - w2) * a + eps_o / 2.0) / (1.0 + eps_o); };
  const auto q1 = [&](double a) {
    return ((1.0 - w2) - (w1 - w2) * a + eps_o / 2.0) / (1.0 + eps_o);
  };

  const auto inner_value = [&](double alpha, const Rvector& u) {
    const double s = std::sqrt(q0(u[0]) * q0(u[1])) + std::sqrt(q1(u[0]) * q1(u[1]));
    return u[0] - u[1] + 2.0 * alpha * reps * std::log(s);
  };
  const auto inner_gradient2 = [&](double alpha, const Rvector& u) {
    const double r0 = std::sqrt(q0(u[0]) * q0(u[1]));
    const double r1 = std::sqrt(q1(u[0]) * q1(u[1]));
    const double s = r0 + r1;
    const double slope = (w1 - w2) / (1.0 + eps_o);
    const double scale = alpha * reps / s;
    Rvector g(2);
    g[0] = 1.0 + scale * slope * (r0 / q0(u[0]) - r1 / q1(u[0]));
    g[1] = -1.0 + scale * slope * (r0 / q0(u[1]) - r1 / q1(u[1]));
    return g;
  };
  const ApgProjection box = [](const Rvector& u) {
    Rvector v(u.size());
    for (Eigen::Index i = 0; i < u.size(); ++i) v[i] = std::clamp(u[i], 0.0, 1.0);
    return v;
  };

  Rvector warm(2);
  warm << 1.0, 1.0 / static_cast<double>(d);
  std::optional<ApgResult> best_inner;
  double best_alpha = 0.0;
  int total_iters = 0;

  const std::function<double(double)> objective = [&](double alpha) {
    const ApgObjective value = [&](const Rvector& u) { return inner_value(alpha, u); };
    const ApgGradient gradient = [&](const Rvector& u) { return inner_gradient2(alpha, u); };
    const ApgResult res = apg_maximize(value, gradient, box, warm, config.apg());
    total_iters += res.iterations;
    warm = res.x;
    const double g = 2.0 * alpha * log_conf + res.value;
    if (!best_inner.has_value() ||
        g < 2.0 * best_alpha * log_conf + best_inner->value) {
      best_inner = res;
      best_alpha = alpha;
    }
    return g;
  };

  const detail::GoldenResult outer = detail::golden_minimize(
      objective, config.alpha_lo, config.alpha_hi, config.outer_tolerance);

  const auto assemble = [&](double a) {
    Cmatrix chi = a * rho + ((1.0 - a) / static_cast<double>(d - 1)) * delta_rho;
    return DensityMatrix::trusted(std::move(chi));
  };
  SaddlePoint sp(assemble(best_inner->x[0]), assemble(best_inner->x[1]));
  sp.alpha_star = best_alpha;
  sp.saddle_value = 2.0 * best_alpha * log_conf + best_inner->value;
  sp.precision = config.reported_precision;
  sp.iterations = total_iters;
  sp.outer_iterations = outer.evaluations;
  sp.converged = best_inner->converged;
  sp.boundary_warning = outer.boundary;
  return sp;
}

}  // namespace fidelimax

#endif  // FIDELIMAX_SADDLE_HPP
