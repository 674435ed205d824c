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

#ifndef FIDELIMAX_ESTIMATOR_HPP
#define FIDELIMAX_ESTIMATOR_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "fidelimax/errors.hpp"

namespace fidelimax {

/// Affine fidelity estimator: F_hat = sum_l R_l <a^(l), f^(l)> + c, together
/// with its precomputed risk and the fingerprint of the plan it was built for.
struct AffineEstimator {
  std::vector<std::vector<double>> coefficients;  // a^(l), one vector per setting
  std::vector<std::int64_t> repetitions;          // R_l
  double constant = 0.0;                          // c
  double risk = 0.0;                              // reported risk (includes delta)
  double epsilon = 0.05;
  double epsilon_o = 1e-5;
  std::string plan_fingerprint;

  std::size_t n_settings() const { return coefficients.size(); }

  void validate() const {
    if (coefficients.size() != repetitions.size()) {
      throw invalid_input_error("estimator: coefficients/repetitions shape mismatch");
    }
    if (risk < 0.0 || risk > 0.5 + 1e-3) {
      throw invalid_input_error("estimator: risk outside [0, 0.5 + 1e-3]");
    }
    if (constant < 0.0 || constant > 1.0 || constant + risk > 1.0 + 1e-3) {
      throw invalid_input_error("estimator: constant violates 0 <= c and c + risk <= 1");
    }
    for (auto r : repetitions) {
      if (r < 1) throw invalid_input_error("estimator: repetitions must be positive");
    }
  }
};

/// Outcome counts per setting, with the derived relative frequencies.
struct Dataset {
  std::vector<std::vector<std::int64_t>> counts;
  std::string plan_fingerprint;  // empty when unknown

  std::size_t n_settings() const { return counts.size(); }

  std::int64_t shots(std::size_t l) const {
    std::int64_t total = 0;
    for (auto c : counts[l]) total += c;
    return total;
  }

  std::vector<double> frequencies_for(std::size_t l) const {
    const auto total = static_cast<double>(shots(l));
    std::vector<double> f(counts[l].size());
    for (std::size_t k = 0; k < f.size(); ++k) {
      f[k] = static_cast<double>(counts[l][k]) / total;
    }
    return f;
  }

  void validate() const {
    for (std::size_t l = 0; l < counts.size(); ++l) {
      std::int64_t total = 0;
      for (auto c : counts[l]) {
        if (c < 0) throw invalid_input_error("dataset: negative count");
        total += c;
      }
      if (total < 1) {
        throw invalid_input_error("dataset: setting " + std::to_string(l) +
                                  " has no outcomes");
      }
    }
  }
};

/// Bin raw outcome index lists into a Dataset. Every setting needs at least
/// one outcome; outcome indices must be below the stated outcome count.
inline Dataset frequencies(const std::vector<std::vector<std::size_t>>& outcomes,
                           const std::vector<std::size_t>& n_outcomes) {
  if (outcomes.size() != n_outcomes.size()) {
    throw invalid_input_error("frequencies: settings shape mismatch");
  }
  Dataset data;
  data.counts.resize(outcomes.size());
  for (std::size_t l = 0; l < outcomes.size(); ++l) {
    if (outcomes[l].empty()) {
      throw invalid_input_error("frequencies: setting " + std::to_string(l) +
                                " has no outcomes (R_l >= 1 required)");
    }
    data.counts[l].assign(n_outcomes[l], 0);
    for (auto o : outcomes[l]) {
      if (o >= n_outcomes[l]) {
        throw invalid_input_error("frequencies: outcome index " + std::to_string(o) +
                                  " out of range for setting " + std::to_string(l));
      }
      ++data.counts[l][o];
    }
  }
  return data;
}

/// Evaluate the estimator on a dataset: sum_l R_l <a^(l), f^(l)> + c.
/// The value is the raw affine output and is deliberately not clipped to
/// [0, 1]; the confidence interval may extend past physical values.
inline double estimate(const AffineEstimator& est, const Dataset& data) {
  if (!est.plan_fingerprint.empty() && !data.plan_fingerprint.empty() &&
      est.plan_fingerprint != data.plan_fingerprint) {
    throw integrity_error("estimate: dataset fingerprint does not match estimator");
  }
  if (data.n_settings() != est.n_settings()) {
    throw invalid_input_error("estimate: setting count mismatch");
  }
  double value = est.constant;
  for (std::size_t l = 0; l < est.coefficients.size(); ++l) {
    if (data.counts[l].size() != est.coefficients[l].size()) {
      throw invalid_input_error("estimate: outcome count mismatch in setting " +
                                std::to_string(l));
    }
    if (data.shots(l) != est.repetitions[l]) {
      throw invalid_input_error("estimate: dataset has " +
                                std::to_string(data.shots(l)) + " shots for setting " +
                                std::to_string(l) + ", estimator expects " +
                                std::to_string(est.repetitions[l]));
    }
    const double r = static_cast<double>(est.repetitions[l]);
    const auto f = data.frequencies_for(l);
    for (std::size_t k = 0; k < f.size(); ++k) {
      value += r * est.coefficients[l][k] * f[k];
    }
  }
  return value;
}

/// ||C_a R||_1 = sum_l R_l sum_k |a^(l)_k|; the sensitivity of the estimate
/// to a sup-norm shift of the observed frequencies.
inline double coefficient_one_norm(const AffineEstimator& est) {
  double norm = 0.0;
  for (std::size_t l = 0; l < est.coefficients.size(); ++l) {
    double setting_sum = 0.0;
    for (double a : est.coefficients[l]) setting_sum += std::abs(a);
    norm += static_cast<double>(est.repetitions[l]) * setting_sum;
  }
  return norm;
}

/// Perturbation magnitudes feeding the robustness bound. Matrix norms are
/// entrywise over the vectorized matrix, not Schatten norms.
struct RobustnessInput {
  double delta_state = 0.0;          // bound on each per-shot state perturbation
  double delta_measurement = 0.0;    // bound on each per-shot effect perturbation
  double hist_err = 0.0;             // max_l ||f - p||_inf, noiseless case
  double hist_err_tilde = 0.0;       // max_l ||f~ - <p~>||_inf, perturbed case
  double max_effect_infnorm = 0.0;   // max_{l,k} largest |entry| of E^(l)_k
  double state_infnorm = 0.0;        // largest |entry| of sigma

  void validate() const {
    if (delta_state < 0 || delta_measurement < 0 || hist_err < 0 ||
        hist_err_tilde < 0 || max_effect_infnorm < 0 || state_infnorm < 0) {
      throw invalid_input_error("robustness input: all fields must be nonnegative");
    }
  }
};

/// Worst-case change of the affine estimate under bounded per-shot state and
/// POVM perturbations plus histogram errors.
inline double robustness_bound(const AffineEstimator& est, const RobustnessInput& rin) {
  rin.validate();
  const double envelope = rin.max_effect_infnorm * rin.delta_state +
                          rin.state_infnorm * rin.delta_measurement +
                          rin.delta_measurement * rin.delta_state + rin.hist_err +
                          rin.hist_err_tilde;
  return coefficient_one_norm(est) * envelope;
}

}  // namespace fidelimax

#endif  // FIDELIMAX_ESTIMATOR_HPP
