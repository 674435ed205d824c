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

#ifndef FIDELIMAX_MLE_HPP
#define FIDELIMAX_MLE_HPP

// Maximum likelihood state reconstruction and the Monte-Carlo (parametric
// bootstrap) interval used as the comparison baseline.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "fidelimax/apg.hpp"
#include "fidelimax/errors.hpp"
#include "fidelimax/estimator.hpp"
#include "fidelimax/operators.hpp"
#include "fidelimax/rng.hpp"
#include "fidelimax/simulator.hpp"

namespace fidelimax {

struct MleConfig {
  double tolerance = 1e-8;  // relative objective change
  int max_iters = 20000;
  int stall_iterations = 20;
  double grad_tolerance = 1e-4;

  ApgOptions apg() const {
    ApgOptions o;
    o.max_iters = max_iters;
    o.rel_tolerance = tolerance;
    o.stall_iters = stall_iterations;
    o.grad_tolerance = grad_tolerance;
    return o;
  }
};

/// Negative log-likelihood -sum_l sum_k f^(l)_k ln p^(l)_k, evaluated on the
/// plan's epsilon_o-smoothed Born probabilities. With smoothing enabled every
/// probability is positive; with epsilon_o = 0 a zero probability under a
/// nonzero frequency yields +infinity, the correct limiting value.
inline double nll(const MeasurementPlan& plan,
                  const std::vector<std::vector<double>>& freqs, const DensityMatrix& chi) {
  if (freqs.size() != plan.settings.size()) {
    throw invalid_input_error("nll: one frequency vector per setting required");
  }
  double value = 0.0;
  for (std::size_t l = 0; l < plan.settings.size(); ++l) {
    const Rvector p = born_probs(plan.settings[l], chi, plan.epsilon_o);
    if (freqs[l].size() != static_cast<std::size_t>(p.size())) {
      throw invalid_input_error("nll: frequency length mismatch in setting " +
                                std::to_string(l));
    }
    for (Eigen::Index k = 0; k < p.size(); ++k) {
      const double f = freqs[l][static_cast<std::size_t>(k)];
      if (f == 0.0) continue;
      if (p[k] <= 0.0) return std::numeric_limits<double>::infinity();
      value -= f * std::log(p[k]);
    }
  }
  return value;
}

/// Gradient of the negative log-likelihood with respect to chi.
inline HermitianOperator nll_gradient(const MeasurementPlan& plan,
                                      const std::vector<std::vector<double>>& freqs,
                                      const DensityMatrix& chi) {
  const Eigen::Index d = plan.dim;
  Cmatrix g = Cmatrix::Zero(d, d);
  for (std::size_t l = 0; l < plan.settings.size(); ++l) {
    const auto& s = plan.settings[l];
    const Rvector p = born_probs(s, chi, plan.epsilon_o);
    for (Eigen::Index k = 0; k < p.size(); ++k) {
      const double f = freqs[l][static_cast<std::size_t>(k)];
      if (f == 0.0) continue;
      if (p[k] <= 0.0) {
        throw singularity_error("nll_gradient: zero probability with nonzero frequency");
      }
      g -= (f / (p[k] * (1.0 + plan.epsilon_o))) * s.effects[static_cast<std::size_t>(k)].mat();
    }
  }
  return HermitianOperator(hermitize(g));
}

struct MleResult {
  DensityMatrix state;
  double nll = 0.0;
  double fidelity = 0.0;
  int iterations = 0;
  bool converged = false;

  explicit MleResult(DensityMatrix s) : state(std::move(s)) {}
};

/// Accelerated projected-gradient descent on the negative log-likelihood over
/// density matrices, started from the maximally mixed state.
inline MleResult mle_reconstruct(const MeasurementPlan& plan, const Dataset& data,
                                 const MleConfig& config = {}) {
  if (plan.settings.empty()) {
    throw invalid_input_error("mle_reconstruct: plan has no settings");
  }
  if (data.n_settings() != plan.settings.size()) {
    throw invalid_input_error("mle_reconstruct: dataset does not match plan");
  }
  data.validate();
  std::vector<std::vector<double>> freqs;
  freqs.reserve(data.n_settings());
  for (std::size_t l = 0; l < data.n_settings(); ++l) {
    if (data.counts[l].size() != plan.settings[l].outcomes()) {
      throw invalid_input_error("mle_reconstruct: outcome count mismatch in setting " +
                                std::to_string(l));
    }
    freqs.push_back(data.frequencies_for(l));
  }

  const Eigen::Index d = plan.dim;
  const ApgObjective value = [&](const Rvector& u) {
    return -nll(plan, freqs, DensityMatrix::trusted(unembed_hermitian(u, d)));
  };
  const ApgGradient gradient = [&](const Rvector& u) {
    return embed_hermitian(
        -nll_gradient(plan, freqs, DensityMatrix::trusted(unembed_hermitian(u, d))).mat());
  };
  const ApgProjection project = [&](const Rvector& u) {
    return embed_hermitian(project_density(unembed_hermitian(u, d)).mat());
  };

  const Rvector start =
      embed_hermitian(Cmatrix::Identity(d, d) / static_cast<double>(d));
  const ApgResult apg = apg_maximize(value, gradient, project, start, config.apg());

  MleResult res(project_density(unembed_hermitian(apg.x, d)));
  res.nll = -apg.value;
  res.fidelity = trace_product(plan.target.mat(), res.state.mat());
  res.iterations = apg.iterations;
  res.converged = apg.converged;
  return res;
}

/// Parametric bootstrap interval around the median: refit B synthetic
/// datasets drawn from the MLE-fitted probabilities and report the eps/2 and
/// 1 - eps/2 empirical quantiles of the refitted fidelities.
inline std::pair<double, double> bootstrap_interval(const MeasurementPlan& plan,
                                                    const Dataset& data, int replicates,
                                                    double epsilon, std::uint64_t seed,
                                                    const MleConfig& config = {},
                                                    int threads = 1) {
  if (replicates < 100) {
    throw invalid_input_error("bootstrap_interval: need at least 100 replicates");
  }
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw invalid_input_error("bootstrap_interval: epsilon must lie in (0, 1)");
  }
  const MleResult base = mle_reconstruct(plan, data, config);
  std::vector<Rvector> fitted;
  fitted.reserve(plan.settings.size());
  for (const auto& s : plan.settings) {
    fitted.push_back(born_probs(s, base.state, plan.epsilon_o));
  }

  std::vector<double> fidelities(static_cast<std::size_t>(replicates), 0.0);
  detail::run_indexed_tasks(replicates, threads, [&](std::int64_t b) {
    SplitMix64 rng(substream(seed, static_cast<std::uint64_t>(b)));
    Dataset synthetic;
    synthetic.counts.resize(plan.settings.size());
    for (std::size_t l = 0; l < plan.settings.size(); ++l) {
      synthetic.counts[l].assign(plan.settings[l].outcomes(), 0);
      const std::int64_t shots = data.shots(l);
      for (std::int64_t r = 0; r < shots; ++r) {
        ++synthetic.counts[l][detail::draw_outcome(fitted[l], rng.next_double())];
      }
    }
    fidelities[static_cast<std::size_t>(b)] =
        mle_reconstruct(plan, synthetic, config).fidelity;
  });

  std::sort(fidelities.begin(), fidelities.end());
  const auto quantile = [&](double q) {
    const auto idx = static_cast<std::size_t>(std::clamp<double>(
        std::ceil(q * replicates) - 1, 0.0, static_cast<double>(replicates - 1)));
    return fidelities[idx];
  };
  return {quantile(epsilon / 2.0), quantile(1.0 - epsilon / 2.0)};
}

}  // namespace fidelimax

#endif  // FIDELIMAX_MLE_HPP
