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

#ifndef FIDELIMAX_SIMULATOR_HPP
#define FIDELIMAX_SIMULATOR_HPP

// Outcome sampling, repeated-trial coverage experiments, bounded-perturbation
// robustness runs, and risk curves over (L, R) grids.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <thread>
#include <vector>

#include "fidelimax/errors.hpp"
#include "fidelimax/estimator.hpp"
#include "fidelimax/operators.hpp"
#include "fidelimax/pauli.hpp"
#include "fidelimax/rng.hpp"
#include "fidelimax/saddle.hpp"
#include "fidelimax/schemes.hpp"
#include "fidelimax/serialization.hpp"

namespace fidelimax {

namespace detail {

// Inverse-CDF draw from cumulative probabilities; ties break to lower index.
inline std::size_t draw_outcome(const Rvector& probs, double u) {
  double cum = 0.0;
  for (Eigen::Index k = 0; k + 1 < probs.size(); ++k) {
    cum += probs[k];
    if (u <= cum) return static_cast<std::size_t>(k);
  }
  return static_cast<std::size_t>(probs.size() - 1);
}

inline void run_indexed_tasks(std::int64_t count, int threads,
                              const std::function<void(std::int64_t)>& task) {
  if (threads <= 1 || count < 2) {
    for (std::int64_t i = 0; i < count; ++i) task(i);
    return;
  }
  const int workers = std::min<std::int64_t>(threads, count);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (std::int64_t i = w; i < count; i += workers) task(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace detail

/// Draw a full dataset for the plan from the smoothed Born probabilities of
/// `true_state`. Setting l uses substream(seed, l), so the result is a pure
/// function of (plan, state, seed).
inline Dataset sample_outcomes(const MeasurementPlan& plan, const DensityMatrix& true_state,
                               std::uint64_t seed) {
  if (true_state.dim() != plan.dim) {
    throw invalid_input_error("sample_outcomes: dimension mismatch");
  }
  Dataset data;
  data.plan_fingerprint = plan_fingerprint(plan);
  data.counts.resize(plan.settings.size());
  for (std::size_t l = 0; l < plan.settings.size(); ++l) {
    const auto& s = plan.settings[l];
    const Rvector p = born_probs(s, true_state, plan.epsilon_o);
    SplitMix64 rng(substream(seed, l));
    data.counts[l].assign(s.outcomes(), 0);
    for (std::int64_t r = 0; r < s.repetitions; ++r) {
      ++data.counts[l][detail::draw_outcome(p, rng.next_double())];
    }
  }
  return data;
}

/// Aggregate of a repeated-trial experiment.
struct TrialReport {
  std::int64_t trials = 0;
  std::vector<double> estimates;
  std::int64_t coverage_count = 0;
  double empirical_coverage = 0.0;
  double mean_estimate = 0.0;
  double mean_abs_error = 0.0;
  double true_fidelity = 0.0;
};

/// Repeatedly simulate the experiment against `true_state` and count how often
/// the true fidelity falls inside estimate +- risk. Trial t draws from
/// substream(seed, t); trials are independent and may run on several threads.
inline TrialReport run_coverage(const MeasurementPlan& plan, const AffineEstimator& est,
                                const DensityMatrix& true_state, std::int64_t trials,
                                std::uint64_t seed, int threads = 1) {
  if (trials < 1) throw invalid_input_error("run_coverage: trials must be >= 1");
  if (!est.plan_fingerprint.empty() && est.plan_fingerprint != plan_fingerprint(plan)) {
    throw integrity_error("run_coverage: estimator was built for a different plan");
  }
  const double f_true = fidelity_pure(plan.target, true_state);

  TrialReport report;
  report.trials = trials;
  report.true_fidelity = f_true;
  report.estimates.assign(static_cast<std::size_t>(trials), 0.0);
  detail::run_indexed_tasks(trials, threads, [&](std::int64_t t) {
    const Dataset data = sample_outcomes(plan, true_state, substream(seed, static_cast<std::uint64_t>(t)));
    report.estimates[static_cast<std::size_t>(t)] = estimate(est, data);
  });

  double sum = 0.0, abs_err = 0.0;
  for (double e : report.estimates) {
    sum += e;
    abs_err += std::abs(e - f_true);
    if (std::abs(e - f_true) <= est.risk) ++report.coverage_count;
  }
  report.empirical_coverage =
      static_cast<double>(report.coverage_count) / static_cast<double>(trials);
  report.mean_estimate = sum / static_cast<double>(trials);
  report.mean_abs_error = abs_err / static_cast<double>(trials);
  return report;
}

namespace detail {

// Random traceless Hermitian direction with unit entrywise 1-norm.
inline Cmatrix perturbation_direction(Eigen::Index d, SplitMix64& rng) {
  Cmatrix g(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      g(i, j) = Complex(rng.next_gaussian(), rng.next_gaussian());
    }
  }
  Cmatrix h = hermitize(g);
  h -= (h.trace() / static_cast<double>(d)) * Cmatrix::Identity(d, d);
  const double norm1 = h.cwiseAbs().sum();
  return h / norm1;
}

// Perturbed copy of `state`, entrywise-1-norm of the applied perturbation
// bounded by delta. Retries the draw when the projection step would move the
// state further than delta allows.
inline Cmatrix perturb_state(const Cmatrix& state, double delta, SplitMix64& rng) {
  if (delta == 0.0) return state;
  const Eigen::Index d = state.rows();
  for (int attempt = 0; attempt < 100; ++attempt) {
    const Cmatrix dir = perturbation_direction(d, rng);
    const double radius = rng.next_double() * delta;
    const Cmatrix candidate = project_density(state + radius * dir).mat();
    if ((candidate - state).cwiseAbs().sum() <= delta + 1e-12) return candidate;
  }
  throw invalid_input_error("perturb_state: could not keep the state valid within delta");
}

// Perturbed POVM effects; zero-sum directions keep completeness exact, and
// each per-effect perturbation has entrywise 1-norm at most delta.
inline std::vector<Cmatrix> perturb_effects(const std::vector<HermitianOperator>& effects,
                                            double delta, SplitMix64& rng) {
  std::vector<Cmatrix> out;
  out.reserve(effects.size());
  if (delta == 0.0) {
    for (const auto& e : effects) out.push_back(e.mat());
    return out;
  }
  const Eigen::Index d = effects.front().dim();
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<Cmatrix> dirs;
    dirs.reserve(effects.size());
    Cmatrix mean = Cmatrix::Zero(d, d);
    for (std::size_t k = 0; k < effects.size(); ++k) {
      Cmatrix g(d, d);
      for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
          g(i, j) = Complex(rng.next_gaussian(), rng.next_gaussian());
        }
      }
      dirs.push_back(hermitize(g));
      mean += dirs.back();
    }
    mean /= static_cast<double>(effects.size());
    double max_norm = 0.0;
    for (auto& dir : dirs) {
      dir -= mean;
      max_norm = std::max(max_norm, dir.cwiseAbs().sum());
    }
    const double radius = rng.next_double() * delta / max_norm;
    out.clear();
    bool valid = true;
    for (std::size_t k = 0; k < effects.size(); ++k) {
      Cmatrix candidate = effects[k].mat() + radius * dirs[k];
      if (eigh(candidate).values.minCoeff() < -kEigenvalueTol) {
        valid = false;
        break;
      }
      out.push_back(std::move(candidate));
    }
    if (valid) return out;
  }
  throw invalid_input_error("perturb_effects: could not keep the POVM valid within delta");
}

}  // namespace detail

struct PerturbationReport {
  double noiseless_estimate = 0.0;
  double perturbed_estimate = 0.0;
  double observed_difference = 0.0;
  double bound = 0.0;
  RobustnessInput inputs;
};

/// Simulate the same experiment twice from one seed: once exactly, once with
/// fresh per-shot bounded perturbations of the state and the POVM effects.
/// The report pairs the observed estimate shift with robustness_bound
/// evaluated at the supplied norm bounds and the exactly measured histogram
/// errors.
inline PerturbationReport perturb_and_estimate(const MeasurementPlan& plan,
                                               const AffineEstimator& est,
                                               const DensityMatrix& true_state,
                                               double delta_state, double delta_measurement,
                                               std::uint64_t seed) {
  if (delta_state < 0.0 || delta_measurement < 0.0) {
    throw invalid_input_error("perturb_and_estimate: deltas must be nonnegative");
  }
  if (!est.plan_fingerprint.empty() && est.plan_fingerprint != plan_fingerprint(plan)) {
    throw integrity_error("perturb_and_estimate: estimator/plan mismatch");
  }
  const std::string fingerprint = plan_fingerprint(plan);

  Dataset noiseless, perturbed;
  noiseless.plan_fingerprint = fingerprint;
  perturbed.plan_fingerprint = fingerprint;
  noiseless.counts.resize(plan.settings.size());
  perturbed.counts.resize(plan.settings.size());

  double hist_err = 0.0, hist_err_tilde = 0.0;
  double max_effect_inf = 0.0;
  for (const auto& s : plan.settings) {
    for (const auto& e : s.effects) {
      max_effect_inf = std::max(max_effect_inf, e.mat().cwiseAbs().maxCoeff());
    }
  }

  for (std::size_t l = 0; l < plan.settings.size(); ++l) {
    const auto& s = plan.settings[l];
    const auto n = static_cast<Eigen::Index>(s.outcomes());
    const Rvector p = born_probs(s, true_state, plan.epsilon_o);
    SplitMix64 rng(substream(seed, l));
    noiseless.counts[l].assign(s.outcomes(), 0);
    perturbed.counts[l].assign(s.outcomes(), 0);
    Rvector mean_perturbed = Rvector::Zero(n);
    const double bias = plan.epsilon_o / static_cast<double>(n);

    for (std::int64_t r = 0; r < s.repetitions; ++r) {
      const double u = rng.next_double();
      ++noiseless.counts[l][detail::draw_outcome(p, u)];

      const Cmatrix sigma_tilde = detail::perturb_state(true_state.mat(), delta_state, rng);
      const auto effects_tilde = detail::perturb_effects(s.effects, delta_measurement, rng);
      Rvector p_tilde(n);
      for (Eigen::Index k = 0; k < n; ++k) {
        p_tilde[k] = (trace_product(effects_tilde[static_cast<std::size_t>(k)], sigma_tilde) + bias) /
                     (1.0 + plan.epsilon_o);
      }
      mean_perturbed += p_tilde;
      ++perturbed.counts[l][detail::draw_outcome(p_tilde, u)];
    }
    mean_perturbed /= static_cast<double>(s.repetitions);

    for (Eigen::Index k = 0; k < n; ++k) {
      const double reps = static_cast<double>(s.repetitions);
      const double f = static_cast<double>(noiseless.counts[l][static_cast<std::size_t>(k)]) / reps;
      const double f_tilde =
          static_cast<double>(perturbed.counts[l][static_cast<std::size_t>(k)]) / reps;
      hist_err = std::max(hist_err, std::abs(f - p[k]));
      hist_err_tilde = std::max(hist_err_tilde, std::abs(f_tilde - mean_perturbed[k]));
    }
  }

  PerturbationReport report;
  report.noiseless_estimate = estimate(est, noiseless);
  report.perturbed_estimate = estimate(est, perturbed);
  report.observed_difference =
      std::abs(report.perturbed_estimate - report.noiseless_estimate);
  report.inputs = RobustnessInput{delta_state,
                                  delta_measurement,
                                  hist_err,
                                  hist_err_tilde,
                                  max_effect_inf,
                                  true_state.mat().cwiseAbs().maxCoeff()};
  report.bound = robustness_bound(est, report.inputs);
  return report;
}

struct RiskCurvePoint {
  int n_settings = 0;   // L
  std::int64_t shots = 0;  // R per setting
  double risk = 0.0;
};

/// Risk over a grid of (L, R): the plan with L Pauli settings uses the first
/// L entries of the pool after one seed-determined shuffle, so larger L only
/// appends settings and the risk is non-increasing along both axes.
inline std::vector<RiskCurvePoint> risk_curve(const DensityMatrix& target,
                                              std::vector<PauliString> pool,
                                              const std::vector<int>& l_values,
                                              const std::vector<std::int64_t>& r_values,
                                              double epsilon, PovmMode mode,
                                              std::uint64_t seed,
                                              const SolverConfig& config = {},
                                              double epsilon_o = 1e-5) {
  if (l_values.empty() || r_values.empty()) {
    throw invalid_input_error("risk_curve: empty grid");
  }
  SplitMix64 rng(seed);
  for (std::size_t i = pool.size(); i > 1; --i) {
    std::swap(pool[i - 1], pool[rng.next_below(i)]);
  }

  std::vector<RiskCurvePoint> points;
  for (int l_count : l_values) {
    if (l_count < 0 || static_cast<std::size_t>(l_count) > pool.size()) {
      throw invalid_input_error("risk_curve: L exceeds the Pauli pool");
    }
    for (std::int64_t r : r_values) {
      std::vector<PovmSetting> settings;
      settings.reserve(static_cast<std::size_t>(l_count));
      for (int i = 0; i < l_count; ++i) {
        settings.push_back(pauli_povm(pool[static_cast<std::size_t>(i)], mode, r));
      }
      MeasurementPlan plan(target, epsilon, std::move(settings), epsilon_o);
      const SaddlePoint sp = outer_minimize(plan, config);
      points.push_back({l_count, r, 0.5 * sp.saddle_value});
    }
  }
  return points;
}

}  // namespace fidelimax

#endif  // FIDELIMAX_SIMULATOR_HPP
