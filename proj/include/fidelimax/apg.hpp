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

#ifndef FIDELIMAX_APG_HPP
#define FIDELIMAX_APG_HPP

// Accelerated projected gradient ascent over a compact convex set, in the
// variant of Nesterov's second method where every query point is a convex
// combination of feasible iterates (Tseng's formulation). The step size is
// found by backtracking, so no Lipschitz constant is needed up front.

#include <cmath>
#include <functional>

#include "fidelimax/linalg.hpp"

namespace fidelimax {

struct ApgOptions {
  int max_iters = 5000;
  double rel_tolerance = 1e-6;     // relative objective change counted as a stall
  int stall_iters = 20;            // consecutive stalls before declaring done
  double grad_tolerance = 1e-4;    // unit-step projected-gradient residual
  double initial_step = 1.0;
  double step_shrink = 0.5;
  double sufficient_increase = 1e-4;  // Armijo constant in the accept test
};

struct ApgResult {
  Rvector x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
  double pg_residual = 0.0;
};

using ApgObjective = std::function<double(const Rvector&)>;
using ApgGradient = std::function<Rvector(const Rvector&)>;
using ApgProjection = std::function<Rvector(const Rvector&)>;

/// Maximize a concave objective over the set carved out by `project`.
/// The best-so-far value sequence is non-decreasing: momentum restarts
/// whenever an accelerated step fails to improve on it.
inline ApgResult apg_maximize(const ApgObjective& value, const ApgGradient& gradient,
                              const ApgProjection& project, const Rvector& start,
                              const ApgOptions& opts) {
  ApgResult res;
  Rvector x = project(start);
  double fx = value(x);
  Rvector z = x;
  double theta = 1.0;
  double lipschitz = 1.0 / opts.initial_step;

  int stall = 0;
  int stall_checks = 0;
  int iter = 0;
  for (; iter < opts.max_iters; ++iter) {
    const Rvector y = (theta == 1.0) ? z : Rvector((1.0 - theta) * x + theta * z);
    const Rvector g = gradient(y);
    const double fy = (theta == 1.0) ? fx : value(y);

    Rvector z_next, x_next;
    double f_next = fy;
    bool accepted = false;
    bool backtracked = false;
    for (int bt = 0; bt < 60; ++bt) {
      z_next = project(z + (1.0 / (theta * lipschitz)) * g);
      x_next = (1.0 - theta) * x + theta * z_next;
      const Rvector step = x_next - y;
      f_next = value(x_next);
      const double along = g.dot(step);
      const double slack = 1e-12 * (1.0 + std::abs(fy));
      const bool majorized =
          f_next >= fy + along - 0.5 * lipschitz * step.squaredNorm() - slack;
      const bool armijo =
          along <= 0.0 || f_next >= fy + opts.sufficient_increase * along - slack;
      if (majorized && armijo) {
        accepted = true;
        break;
      }
      lipschitz /= opts.step_shrink;  // halve the step
      backtracked = true;
    }
    if (!accepted) break;  // step underflow; best iterate stands

    if (f_next >= fx) {
      const double gain = f_next - fx;
      x = std::move(x_next);
      fx = f_next;
      z = std::move(z_next);
      theta = theta * (std::sqrt(theta * theta + 4.0) - theta) / 2.0;
      // Let the step recover when no backtracking was needed, within bounds.
      if (!backtracked) lipschitz = std::max(lipschitz * 0.9, 1e-10);
      if (gain <= opts.rel_tolerance * std::max(1.0, std::abs(fx))) {
        ++stall;
      } else {
        stall = 0;
      }
    } else {
      // Non-monotone accelerated step: restart momentum at the best point.
      z = x;
      theta = 1.0;
      ++stall;
    }
    if (stall >= opts.stall_iters) {
      // Stalled. Accept only if stationary; otherwise restart and grind on,
      // up to a patience cap for genuinely flat regions.
      const double pg = (project(x + gradient(x)) - x).norm();
      if (pg <= opts.grad_tolerance || ++stall_checks >= 30) break;
      stall = 0;
      z = x;
      theta = 1.0;
    }
  }

  res.x = std::move(x);
  res.value = fx;
  res.iterations = iter;
  const Rvector g_final = gradient(res.x);
  res.pg_residual = (project(res.x + g_final) - res.x).norm();
  res.converged = stall >= opts.stall_iters || res.pg_residual <= opts.grad_tolerance;
  return res;
}

}  // namespace fidelimax

#endif  // FIDELIMAX_APG_HPP
