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

#include <catch2/catch_amalgamated.hpp>
#include <cmath>

#include "fidelimax/risk.hpp"
#include "fidelimax/saddle.hpp"
#include "fidelimax/schemes.hpp"

using namespace fidelimax;
using Catch::Approx;

namespace {

MeasurementPlan toy_plan(std::int64_t reps = 100) {
  const DensityMatrix rho = basis_state(2, 1);  // |1><1|
  PovmSetting z;
  z.label = "Z";
  z.repetitions = reps;
  z.effects.emplace_back(basis_state(2, 0).mat());  // outcome 0
  z.effects.emplace_back(basis_state(2, 1).mat());  // outcome 1
  return MeasurementPlan(rho, 0.05, {z});
}

MeasurementPlan random_plan(Eigen::Index d, int n_settings, std::int64_t reps,
                            std::uint64_t seed) {
  const DensityMatrix rho = random_pure_state(d, seed);
  std::vector<PovmSetting> settings;
  for (int l = 0; l < n_settings; ++l) {
    auto s = random_povm(d, 2 + (l % 2), seed + 100 + static_cast<std::uint64_t>(l));
    s.label = "random-" + std::to_string(l);
    s.repetitions = reps;
    settings.push_back(std::move(s));
  }
  return MeasurementPlan(rho, 0.05, std::move(settings));
}

// Inner objective evaluated through the public pieces, for finite differences.
double inner_objective(const MeasurementPlan& plan, double alpha,
                       const DensityMatrix& chi1, const DensityMatrix& chi2) {
  return fidelity_pure(plan.target, chi1) - fidelity_pure(plan.target, chi2) +
         2.0 * alpha * std::log(hellinger_affinity(plan, chi1, chi2));
}

// Grid oracle over the (a1, a2) parametrization chi_i = a_i rho +
// (1 - a_i)(I - rho)/(d - 1) for a two-outcome plan in span{rho, I - rho}.
double grid_inner_maximum(const MeasurementPlan& plan, double alpha, int steps) {
  const Eigen::Index d = plan.dim;
  const Cmatrix rho = plan.target.mat();
  const Cmatrix perp = (Cmatrix::Identity(d, d) - rho) / static_cast<double>(d - 1);
  double best = -1e300;
  for (int i = 0; i <= steps; ++i) {
    const double a1 = static_cast<double>(i) / steps;
    const DensityMatrix chi1 = DensityMatrix::trusted(a1 * rho + (1.0 - a1) * perp);
    for (int j = 0; j <= steps; ++j) {
      const double a2 = static_cast<double>(j) / steps;
      const DensityMatrix chi2 = DensityMatrix::trusted(a2 * rho + (1.0 - a2) * perp);
      best = std::max(best, inner_objective(plan, alpha, chi1, chi2));
    }
  }
  return best;
}

DensityMatrix random_mixed(Eigen::Index d, std::uint64_t seed) {
  const double w = 0.35;
  return DensityMatrix(hermitize(w * random_pure_state(d, seed).mat() +
                                 (1.0 - w) * maximally_mixed(d).mat()));
}

}  // namespace

TEST_CASE("eval_phi with zero coefficients", "[saddle]") {
  const MeasurementPlan plan = toy_plan();
  const DensityMatrix rho = plan.target;
  const std::vector<std::vector<double>> zero_phi = {{0.0, 0.0}};
  for (double alpha : {0.01, 1.0, 50.0}) {
    CHECK(eval_phi(plan, rho, rho, zero_phi, alpha) ==
          Approx(2.0 * alpha * std::log(2.0 / 0.05)).margin(1e-10));
  }
  const DensityMatrix mixed = random_mixed(2, 4);
  CHECK(eval_phi(plan, mixed, mixed, zero_phi, 0.3) ==
        Approx(2.0 * 0.3 * std::log(40.0)).margin(1e-10));
  CHECK_THROWS_AS(eval_phi(plan, rho, rho, zero_phi, 0.0), invalid_input_error);
}

TEST_CASE("inner gradient without measurements", "[saddle]") {
  const DensityMatrix rho = random_pure_state(4, 5);
  MeasurementPlan empty(rho, 0.05, {});
  const auto [g1, g2] = inner_gradient(empty, 0.7, random_mixed(4, 6), random_mixed(4, 7));
  CHECK((g1.mat() - rho.mat()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((g2.mat() + rho.mat()).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("inner gradient matches finite differences", "[saddle]") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const MeasurementPlan plan = random_plan(4, 2, 40, seed);
    const double alpha = 0.05 + 0.1 * static_cast<double>(seed);
    const DensityMatrix chi1 = random_mixed(4, seed + 10);
    const DensityMatrix chi2 = random_mixed(4, seed + 20);
    const auto [g1, g2] = inner_gradient(plan, alpha, chi1, chi2);
    CHECK(is_hermitian(g1.mat(), 1e-12));
    CHECK(is_hermitian(g2.mat(), 1e-12));

    SplitMix64 rng(seed + 30);
    for (int dir = 0; dir < 3; ++dir) {
      Cmatrix g(4, 4);
      for (Eigen::Index i = 0; i < 4; ++i)
        for (Eigen::Index j = 0; j < 4; ++j)
          g(i, j) = Complex(rng.next_gaussian(), rng.next_gaussian());
      Cmatrix h = hermitize(g);
      h -= (h.trace() / 4.0) * Cmatrix::Identity(4, 4);  // keep the trace fixed
      h /= h.norm();

      const double step = 1e-6;
      const auto shift = [&](const DensityMatrix& base, double t) {
        return DensityMatrix(hermitize(base.mat() + t * h));
      };
      const double d1 = (inner_objective(plan, alpha, shift(chi1, step), chi2) -
                         inner_objective(plan, alpha, shift(chi1, -step), chi2)) /
                        (2.0 * step);
      const double d2 = (inner_objective(plan, alpha, chi1, shift(chi2, step)) -
                         inner_objective(plan, alpha, chi1, shift(chi2, -step))) /
                        (2.0 * step);
      const double a1 = trace_product(g1.mat(), h);
      const double a2 = trace_product(g2.mat(), h);
      CHECK(d1 == Approx(a1).epsilon(1e-5).margin(1e-8));
      CHECK(d2 == Approx(a2).epsilon(1e-5).margin(1e-8));
    }
  }
}

TEST_CASE("inner gradient flags the unsmoothed singularity", "[saddle]") {
  MeasurementPlan plan = toy_plan();
  plan.epsilon_o = 0.0;  // |1><1| gives a hard zero on outcome 0
  CHECK_THROWS_AS(inner_gradient(plan, 0.1, plan.target, plan.target),
                  singularity_error);
}

TEST_CASE("inner maximization without settings reaches the orthogonal pair", "[saddle]") {
  const DensityMatrix rho = random_pure_state(4, 31);
  MeasurementPlan empty(rho, 0.05, {});
  const InnerSolve sol = inner_maximize(empty, 0.5);
  CHECK(sol.value == Approx(1.0).margin(1e-4));
  CHECK(fidelity_pure(rho, sol.chi1) == Approx(1.0).margin(1e-4));
  CHECK(fidelity_pure(rho, sol.chi2) == Approx(0.0).margin(1e-4));
}

TEST_CASE("inner maximization matches the two-variable grid oracle", "[saddle]") {
  const MeasurementPlan plan = toy_plan();
  for (double alpha : {0.005, 0.0174, 0.1}) {
    const InnerSolve sol = inner_maximize(plan, alpha);
    REQUIRE(sol.converged);
    CHECK(sol.pg_residual <= 1e-4);
    const double grid = grid_inner_maximum(plan, alpha, 400);
    CHECK(sol.value >= grid - 1e-4);        // solver at least as good as the grid
    CHECK(sol.value <= grid + 2e-3);        // and not above the true optimum by much
  }
}

TEST_CASE("large alpha drives the maximizers together", "[saddle]") {
  const MeasurementPlan plan = toy_plan();
  const InnerSolve sol = inner_maximize(plan, 50.0);
  CHECK(sol.value < 0.05);
  CHECK((sol.chi1.mat() - sol.chi2.mat()).norm() < 0.05);
}

TEST_CASE("toy saddle point and estimator", "[saddle]") {
  const MeasurementPlan plan = toy_plan();
  const SaddlePoint sp = outer_minimize(plan);
  REQUIRE(sp.converged);
  CHECK_FALSE(sp.boundary_warning);
  CHECK(0.5 * sp.saddle_value == Approx(risk_lower_bound(100, 0.05)).margin(2e-3));

  const AffineEstimator est = extract_estimator(sp, plan);
  CHECK(est.constant == Approx(0.5).margin(1e-3));
  CHECK(est.coefficients[0][0] == Approx(-0.00476).margin(2e-4));
  CHECK(est.coefficients[0][1] == Approx(+0.00476).margin(2e-4));
  CHECK(est.risk == Approx(0.5 * sp.saddle_value + sp.precision).margin(1e-12));
}

TEST_CASE("an uninformative Pauli-X plan carries full risk", "[saddle]") {
  const DensityMatrix rho = basis_state(2, 1);
  const MeasurementPlan plan(rho, 0.05,
                             {pauli_povm(PauliString::parse("X"), PovmMode::subspace, 100)});
  const SaddlePoint sp = outer_minimize(plan);
  CHECK(0.5 * sp.saddle_value == Approx(0.5).margin(1e-3));
  CHECK(sp.boundary_warning);  // the alpha minimum sits at the lower bracket edge
}

TEST_CASE("solver matches the closed form for the optimal POVM", "[saddle]") {
  for (Eigen::Index d : {2, 4}) {
    for (std::int64_t reps : {50, 500}) {
      const DensityMatrix rho = random_pure_state(d, static_cast<std::uint64_t>(d) * 7 + 1);
      const MeasurementPlan plan(rho, 0.05, {optimal_povm(rho, reps)});
      const SaddlePoint sp = outer_minimize(plan);
      CHECK(0.5 * sp.saddle_value ==
            Approx(risk_lower_bound(reps, 0.05)).margin(2e-3));
    }
  }
}

TEST_CASE("duality gap at the extracted saddle components", "[saddle]") {
  for (const MeasurementPlan& plan : {toy_plan(), random_plan(2, 2, 60, 9)}) {
    const SolverConfig config;
    const SaddlePoint sp = outer_minimize(plan, config);
    REQUIRE(sp.converged);
    const AffineEstimator est = extract_estimator(sp, plan);
    const double phi_value =
        eval_phi(plan, sp.chi1_star, sp.chi2_star, est.coefficients, sp.alpha_star);
    CHECK(std::abs(phi_value - sp.saddle_value) <=
          2.0 * (config.reported_precision + config.inner_tolerance));
  }
}

TEST_CASE("affinity constraint is active at the saddle", "[saddle]") {
  // Two-outcome plans with R above the threshold: AffH(chi1*, chi2*) = eps/2.
  for (std::int64_t reps : {100, 500}) {
    const MeasurementPlan plan = toy_plan(reps);
    const SaddlePoint sp = outer_minimize(plan);
    CHECK(hellinger_affinity(plan, sp.chi1_star, sp.chi2_star) ==
          Approx(0.025).margin(1e-3));
  }
}

TEST_CASE("saddle value respects the global risk bounds", "[saddle]") {
  for (std::uint64_t seed : {11u, 12u}) {
    const MeasurementPlan plan = random_plan(4, 2, 30, seed);
    const SaddlePoint sp = outer_minimize(plan);
    CHECK(sp.saddle_value >= -1e-9);
    CHECK(sp.saddle_value <= 1.0 + 2.0 * sp.precision);
    CHECK(0.5 * sp.saddle_value <= 0.5 + sp.precision);
  }
}

TEST_CASE("risk is monotone under plan refinement", "[saddle]") {
  const MeasurementPlan base = random_plan(4, 1, 30, 21);
  const double base_risk = 0.5 * outer_minimize(base).saddle_value;

  MeasurementPlan more_shots = base;
  more_shots.settings[0].repetitions = 90;
  const double shots_risk = 0.5 * outer_minimize(more_shots).saddle_value;
  CHECK(shots_risk <= base_risk + 1e-3);

  MeasurementPlan extra = base;
  auto s = random_povm(4, 2, 999);
  s.label = "extra";
  s.repetitions = 30;
  extra.settings.push_back(std::move(s));
  const double extra_risk = 0.5 * outer_minimize(extra).saddle_value;
  CHECK(extra_risk <= base_risk + 1e-3);
}

TEST_CASE("reduced two-outcome solver", "[saddle]") {
  const DensityMatrix rho = random_pure_state(4, 3);

  SECTION("optimal POVM closed form") {
    const MeasurementPlan plan(rho, 0.05, {optimal_povm(rho, 100)});
    const SaddlePoint sp = solve_reduced_two_outcome(plan);
    REQUIRE(sp.converged);
    CHECK(0.5 * sp.saddle_value == Approx(risk_lower_bound(100, 0.05)).margin(1e-4));
  }

  SECTION("stabilizer weights at the reference shot count") {
    const EffectivePovm povm = EffectivePovm::from_weights(rho, 1.0, 1.0 / 3.0);
    const MeasurementPlan plan(rho, 0.05, {povm.setting("stab", 1657)});
    const SaddlePoint sp = solve_reduced_two_outcome(plan);
    const double padded = 0.5 * sp.saddle_value + sp.precision;
    CHECK(padded <= 0.0501);
    CHECK(padded > 0.045);
  }

  SECTION("agrees with the full solver") {
    const EffectivePovm povm = EffectivePovm::from_weights(rho, 0.9, 0.2);
    const MeasurementPlan plan(rho, 0.05, {povm.setting("generic", 120)});
    const double full = 0.5 * outer_minimize(plan).saddle_value;
    const double reduced = 0.5 * solve_reduced_two_outcome(plan).saddle_value;
    CHECK(reduced == Approx(full).margin(2e-3));
  }

  SECTION("rejects a swapped or non-span POVM") {
    MeasurementPlan swapped(rho, 0.05, {optimal_povm(rho, 100)});
    std::swap(swapped.settings[0].effects[0], swapped.settings[0].effects[1]);
    CHECK_THROWS_AS(solve_reduced_two_outcome(swapped), invalid_input_error);

    const MeasurementPlan off_span(rho, 0.05, {random_povm(4, 2, 5)});
    CHECK_THROWS_AS(solve_reduced_two_outcome(off_span), invalid_input_error);
  }
}

TEST_CASE("solver matches the closed form across the shot threshold", "[saddle]") {
  // omega = (0.8, 0.3) has threshold R_o ~ 25.25: the risk saturates at 0.5
  // below it and drops along the closed-form curve above it.
  const DensityMatrix rho = random_pure_state(2, 77);
  const EffectivePovm povm = EffectivePovm::from_weights(rho, 0.8, 0.3);
  for (std::int64_t reps : {20, 26, 40, 120}) {
    const MeasurementPlan plan(rho, 0.05, {povm.setting("weak", reps)});
    const double solver_risk = 0.5 * outer_minimize(plan).saddle_value;
    const double formula = risk_two_outcome(TwoOutcomeModel(0.8, 0.3, reps, 0.05));
    CHECK(solver_risk == Approx(formula).margin(2e-3));
  }
}

TEST_CASE("saddle value is a certified achievable risk on random plans", "[saddle]") {
  // Independent certificate for unstructured plans: the saddle maximizers
  // must be feasible for the affinity-constrained program, attain the saddle
  // value as their fidelity gap, and no random feasible pair may beat them.
  for (std::uint64_t seed : {3u, 8u}) {
    const DensityMatrix rho = random_pure_state(2, seed);
    std::vector<PovmSetting> settings = {random_povm(2, 3, seed + 1),
                                         random_povm(2, 2, seed + 2)};
    settings[0].label = "a";
    settings[0].repetitions = 12;
    settings[1].label = "b";
    settings[1].repetitions = 20;
    const MeasurementPlan plan(rho, 0.05, settings);
    const SaddlePoint sp = outer_minimize(plan);
    REQUIRE(sp.converged);

    const double gap = fidelity_pure(rho, sp.chi1_star) - fidelity_pure(rho, sp.chi2_star);
    CHECK(sp.saddle_value == Approx(gap).margin(2e-3));
    CHECK(hellinger_affinity(plan, sp.chi1_star, sp.chi2_star) >= 0.025 - 1e-3);

    // Random search over feasible pairs never exceeds the saddle value.
    SplitMix64 rng(seed + 9);
    const auto random_state = [&] {
      Cvector v(2);
      v << Complex(rng.next_gaussian(), rng.next_gaussian()),
          Complex(rng.next_gaussian(), rng.next_gaussian());
      v /= v.norm();
      const double mix = rng.next_double();
      return DensityMatrix(hermitize(mix * (v * v.adjoint()) +
                                     (1.0 - mix) * maximally_mixed(2).mat()));
    };
    double best = 0.0;
    for (int trial = 0; trial < 20000; ++trial) {
      const DensityMatrix c1 = random_state();
      const DensityMatrix c2 = random_state();
      if (hellinger_affinity(plan, c1, c2) < 0.025) continue;
      best = std::max(best, fidelity_pure(rho, c1) - fidelity_pure(rho, c2));
    }
    CHECK(best <= sp.saddle_value + 2e-3);
  }
}

TEST_CASE("golden section agrees with a dense alpha scan", "[saddle]") {
  const MeasurementPlan plan = toy_plan(60);
  const SolverConfig config;
  const detail::PlanCache cache(plan);
  const SaddlePoint sp = outer_minimize(plan, config);

  double grid_min = std::numeric_limits<double>::infinity();
  std::optional<std::pair<Cmatrix, Cmatrix>> warm;
  for (int i = 0; i <= 120; ++i) {
    const double alpha = std::pow(10.0, -6.0 + 5.0 * i / 120.0);
    const InnerSolve inner = detail::solve_inner(cache, plan, alpha, config, warm);
    warm = std::make_pair(inner.chi1.mat(), inner.chi2.mat());
    grid_min = std::min(grid_min,
                        2.0 * alpha * std::log(2.0 / plan.epsilon) + inner.value);
  }
  CHECK(sp.saddle_value <= grid_min + 1e-3);
  CHECK(sp.saddle_value >= grid_min - 1e-3);
}

TEST_CASE("degenerate saddle components give the constant estimator", "[saddle]") {
  const MeasurementPlan plan = toy_plan();
  const DensityMatrix mixed = maximally_mixed(2);
  SaddlePoint sp(mixed, mixed);
  sp.alpha_star = 0.02;
  sp.saddle_value = 0.0;
  sp.precision = 1e-4;
  sp.converged = true;
  const AffineEstimator est = extract_estimator(sp, plan);
  CHECK(est.coefficients[0][0] == Approx(0.0).margin(1e-15));
  CHECK(est.coefficients[0][1] == Approx(0.0).margin(1e-15));
  CHECK(est.constant == Approx(0.5).margin(1e-12));

  SaddlePoint unconverged(mixed, mixed);
  unconverged.converged = false;
  CHECK_THROWS_AS(extract_estimator(unconverged, plan), invalid_input_error);
}
