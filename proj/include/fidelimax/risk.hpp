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

#ifndef FIDELIMAX_RISK_HPP
#define FIDELIMAX_RISK_HPP

// Closed-form risks and sample complexities for the minimax fidelity
// estimator: the dimension-independent lower bound, the two-outcome POVM
// family, its stabilizer specialization, and the randomized-Pauli bound.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "fidelimax/errors.hpp"

namespace fidelimax {

namespace detail {

inline void check_epsilon(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 0.25)) {
    throw invalid_input_error("epsilon must lie in (0, 0.25)");
  }
}

inline void check_risk(double risk) {
  if (!(risk > 0.0 && risk < 0.5)) {
    throw invalid_input_error("risk must lie in (0, 0.5)");
  }
}

/// Ceiling of a sample-complexity bound with an overflow guard.
inline std::int64_t ceil_shots(double bound) {
  if (!(bound < 9.2e18) || !std::isfinite(bound)) {
    throw invalid_input_error("sample complexity exceeds the 2^62 guard");
  }
  const double c = std::ceil(bound);
  if (c > 4.6e18) {
    throw invalid_input_error("sample complexity exceeds the 2^62 guard");
  }
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(c));
}

}  // namespace detail

/// Guarantee factor: the computed risk is within vartheta(epsilon) of the
/// minimax optimal risk. vartheta(eps) = 2 + ln(64)/ln(0.25/eps).
inline double vartheta(double epsilon) {
  detail::check_epsilon(epsilon);
  return 2.0 + std::log(64.0) / std::log(0.25 / epsilon);
}

/// Dimension-independent lower bound on the achievable risk with R total
/// shots: (1/2) sqrt(1 - (eps/2)^(2/R)). Attained by the POVM {rho, I - rho}.
inline double risk_lower_bound(std::int64_t shots, double epsilon) {
  detail::check_epsilon(epsilon);
  if (shots < 1) throw invalid_input_error("risk_lower_bound: shots must be >= 1");
  const double gamma = std::pow(epsilon / 2.0, 2.0 / static_cast<double>(shots));
  return 0.5 * std::sqrt(1.0 - gamma);
}

/// Shots needed to reach `risk` with the optimal measurement:
/// ceil(2 ln(2/eps) / |ln(1 - 4 risk^2)|).
inline std::int64_t sample_complexity_optimal(double risk, double epsilon) {
  detail::check_epsilon(epsilon);
  detail::check_risk(risk);
  const double denom = std::abs(std::log1p(-4.0 * risk * risk));
  return detail::ceil_shots(2.0 * std::log(2.0 / epsilon) / denom);
}

/// Two-outcome POVM {Theta, I - Theta} with Theta = w1 rho + w2 (I - rho),
/// w1 > w2, measured R times at confidence 1 - epsilon. Derived quantities
/// feed the closed-form risk: gamma, the threshold R_o below which the risk
/// saturates at 0.5, the feasibility breakpoints a^(1,2)_{+-}, and the
/// feasible set A_a (up to three closed intervals in [0, 1]).
struct TwoOutcomeModel {
  double omega1 = 1.0;
  double omega2 = 0.0;
  std::int64_t shots = 1;
  double epsilon = 0.05;

  double gamma = 0.0;
  double shot_threshold = 0.0;  // R_o
  double a1_minus = 0.0, a1_plus = 0.0;
  double a2_minus = 0.0, a2_plus = 0.0;
  double b_minus = 0.0, b_plus = 0.0;
  std::vector<std::pair<double, double>> feasible;  // A_a

  TwoOutcomeModel(double w1, double w2, std::int64_t repetitions, double eps)
      : omega1(w1), omega2(w2), shots(repetitions), epsilon(eps) {
    detail::check_epsilon(eps);
    if (!(w1 > w2)) {
      throw invalid_input_error("TwoOutcomeModel: omega1 must exceed omega2");
    }
    if (w1 > 1.0 + 1e-12 || w2 < -1e-12) {
      throw invalid_input_error("TwoOutcomeModel: omegas must lie in [0, 1]");
    }
    if (repetitions < 1) {
      throw invalid_input_error("TwoOutcomeModel: shots must be >= 1");
    }
    gamma = std::pow(eps / 2.0, 2.0 / static_cast<double>(repetitions));

    const double affh_extreme =
        std::sqrt(std::max(w1 * w2, 0.0)) +
        std::sqrt(std::max((1.0 - w1) * (1.0 - w2), 0.0));
    shot_threshold = affh_extreme <= 0.0
                         ? 0.0
                         : std::log(2.0 / eps) / std::abs(std::log(affh_extreme));

    const double spread = (1.0 - gamma) / gamma;
    const double h1 = std::sqrt(std::max(w1 * (1.0 - w1) * spread, 0.0));
    const double h2 = std::sqrt(std::max(w2 * (1.0 - w2) * spread, 0.0));
    a1_minus = w1 - h1;
    a1_plus = w1 + h1;
    a2_minus = w2 - h2;
    a2_plus = w2 + h2;
    b_minus = 2.0 * (1.0 - a2_plus);
    b_plus = 2.0 * (1.0 - a2_minus);

    feasible = {{0.0, 1.0}};
    exclude_open(a1_minus, a1_plus);
    exclude_open(a2_minus, a2_plus);
  }

 private:
  // Remove the open interval (lo, hi) from the feasible set.
  void exclude_open(double lo, double hi) {
    if (!(hi > lo)) return;
    std::vector<std::pair<double, double>> next;
    for (const auto& [a, b] : feasible) {
      if (b < lo || a > hi) {
        next.emplace_back(a, b);
        continue;
      }
      if (a <= lo) next.emplace_back(a, std::min(b, lo));
      if (b >= hi) next.emplace_back(std::max(a, hi), b);
    }
    feasible = std::move(next);
  }
};

/// Exact risk for the two-outcome model (closed form). Returns 0.5 when the
/// shot count is at or below the model threshold; otherwise evaluates the
/// one-dimensional maximization at the feasible point nearest a = 1/2 (the
/// objective is unimodal in |2a - 1|).
inline double risk_two_outcome(const TwoOutcomeModel& m) {
  if (static_cast<double>(m.shots) <= m.shot_threshold) return 0.5;
  if (m.feasible.empty()) {
    throw invalid_input_error("risk_two_outcome: empty feasible set");
  }
  double best = 0.0;
  for (const auto& [lo, hi] : m.feasible) {
    const double a = std::clamp(0.5, lo, hi);
    const double t = 2.0 * a - 1.0;
    best = std::max(best, 1.0 - t * t * m.gamma);
  }
  const double value =
      std::sqrt(1.0 - m.gamma) / (2.0 * (m.omega1 - m.omega2)) * std::sqrt(best);
  return std::min(value, 0.5);
}

/// Shots sufficient for the two-outcome model to reach `risk`:
/// ceil(2 ln(2/eps) / |ln(1 - 4 (w1 - w2)^2 risk^2)|).
inline std::int64_t sample_complexity_two_outcome(double risk, double epsilon,
                                                  double omega1, double omega2) {
  detail::check_epsilon(epsilon);
  detail::check_risk(risk);
  if (!(omega1 > omega2)) {
    throw invalid_input_error("sample_complexity_two_outcome: omega1 must exceed omega2");
  }
  const double s = omega1 - omega2;
  const double denom = std::abs(std::log1p(-4.0 * s * s * risk * risk));
  return detail::ceil_shots(2.0 * std::log(2.0 / epsilon) / denom);
}

/// Closed-form risk for the stabilizer-type POVM Theta = rho +
/// ((delta/2 - 1)/(delta - 1)) (I - rho), measured R times. `delta` is the
/// family parameter (equal to the dimension d for the stabilizer sampling
/// scheme) and must be >= 2.
inline double risk_stabilizer(double delta, std::int64_t shots, double epsilon) {
  detail::check_epsilon(epsilon);
  if (delta < 2.0) throw invalid_input_error("risk_stabilizer: delta must be >= 2");
  if (shots < 1) throw invalid_input_error("risk_stabilizer: shots must be >= 1");

  const double gamma = std::pow(epsilon / 2.0, 2.0 / static_cast<double>(shots));
  const double half = delta / 2.0 - 1.0;
  const double threshold =
      half <= 0.0 ? 0.0
                  : 2.0 * std::log(2.0 / epsilon) / std::log((delta - 1.0) / half);
  if (static_cast<double>(shots) <= threshold) return 0.5;

  const double scale = (delta - 1.0) / delta;
  const double root = std::sqrt(((1.0 - gamma) / gamma) * ((delta - 2.0) / delta));
  const double b_minus = (delta / (delta - 1.0)) * (1.0 - root);
  const double b_plus = (delta / (delta - 1.0)) * (1.0 + root);

  double value;
  if (b_minus >= 1.0) {
    value = scale * std::sqrt(1.0 - gamma);
  } else {
    const double ratio = gamma / (1.0 - gamma);
    const double b = (std::abs(b_minus - 1.0) <= std::abs(b_plus - 1.0)) ? b_minus : b_plus;
    value = scale * (1.0 - gamma) * std::sqrt(1.0 + b * (2.0 - b) * ratio);
  }
  return std::min(value, 0.5);
}

/// Shots sufficient for the uniform stabilizer sampling scheme in dimension d:
/// ceil(2 ln(2/eps) / |ln(1 - (d/(d-1))^2 risk^2)|).
inline std::int64_t sample_complexity_stabilizer(double risk, double epsilon,
                                                 std::int64_t d) {
  detail::check_epsilon(epsilon);
  detail::check_risk(risk);
  if (d < 2) throw invalid_input_error("sample_complexity_stabilizer: d must be >= 2");
  const double ratio = static_cast<double>(d) / static_cast<double>(d - 1);
  const double denom = std::abs(std::log1p(-ratio * ratio * risk * risk));
  return detail::ceil_shots(2.0 * std::log(2.0 / epsilon) / denom);
}

/// Shots sufficient for the randomized Pauli scheme with weight norm N:
/// ceil(2 ln(2/eps) / |ln(1 - (d/N)^2 risk^2)|). Requires risk < N/d.
inline std::int64_t sample_complexity_pauli(double risk, double epsilon, double norm_n,
                                            std::int64_t d) {
  detail::check_epsilon(epsilon);
  detail::check_risk(risk);
  if (d < 2 || norm_n <= 0.0) {
    throw invalid_input_error("sample_complexity_pauli: bad dimension or norm");
  }
  const double x = (static_cast<double>(d) / norm_n) * risk;
  if (x >= 1.0) {
    throw invalid_input_error("sample_complexity_pauli: risk >= N/d is infeasible");
  }
  const double denom = std::abs(std::log1p(-x * x));
  return detail::ceil_shots(2.0 * std::log(2.0 / epsilon) / denom);
}

/// Upper bound on N = sum_i |tr(W_i rho)| over pure states: (d-1) sqrt(d+1).
inline double pauli_norm_bound(std::int64_t d) {
  if (d < 2) throw invalid_input_error("pauli_norm_bound: d must be >= 2");
  return (static_cast<double>(d) - 1.0) * std::sqrt(static_cast<double>(d) + 1.0);
}

}  // namespace fidelimax

#endif  // FIDELIMAX_RISK_HPP
