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
#include <map>

#include "fidelimax/risk.hpp"
#include "fidelimax/saddle.hpp"
#include "fidelimax/schemes.hpp"
#include "fidelimax/simulator.hpp"

using namespace fidelimax;
using Catch::Approx;

TEST_CASE("optimal POVM structure", "[schemes]") {
  const PovmSetting s = optimal_povm(basis_state(2, 0), 100);
  CHECK((s.effects[0].mat() - basis_state(2, 0).mat()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((s.effects[1].mat() - basis_state(2, 1).mat()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(s.validation_errors().empty());
  CHECK_THROWS_AS(optimal_povm(maximally_mixed(2)), invalid_input_error);
}

TEST_CASE("stabilizer scheme for one qubit collapses to the target basis", "[schemes]") {
  const StabilizerScheme scheme =
      stabilizer_scheme(StabilizerGroup::from_strings({"Z"}), 50, 1);
  CHECK(scheme.povm.omega2 == Approx(0.0).margin(1e-15));
  CHECK((scheme.povm.theta.mat() - basis_state(2, 0).mat()).cwiseAbs().maxCoeff() < 1e-12);
  for (const auto& p : scheme.sampled) CHECK(p.str() == "Z");
}

TEST_CASE("stabilizer scheme for the Bell group", "[schemes]") {
  const auto group = StabilizerGroup::from_strings({"XX", "ZZ"});
  const DensityMatrix bell = stabilizer_state(group);
  const StabilizerScheme scheme = stabilizer_scheme(group, 10000, 7);

  // Theta = rho + (1/3)(I - rho) at d = 4.
  const Cmatrix expected =
      bell.mat() + (1.0 / 3.0) * (Cmatrix::Identity(4, 4) - bell.mat());
  CHECK((scheme.povm.theta.mat() - expected).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(scheme.povm.omega1 == Approx(1.0));
  CHECK(scheme.povm.omega2 == Approx(1.0 / 3.0));

  // Uniform sampling over the three non-identity elements, within 5 sigma.
  std::map<std::string, int> histogram;
  for (const auto& p : scheme.sampled) ++histogram[p.str()];
  CHECK(histogram.size() == 3);
  const double expect = 10000.0 / 3.0;
  const double sigma = std::sqrt(10000.0 * (1.0 / 3.0) * (2.0 / 3.0));
  for (const auto& [word, count] : histogram) {
    CHECK(std::abs(count - expect) < 5.0 * sigma);
  }

  // Determinism.
  const StabilizerScheme again = stabilizer_scheme(group, 10000, 7);
  CHECK(again.sampled[123].str() == scheme.sampled[123].str());
}

TEST_CASE("randomized Pauli scheme weights and effective POVM", "[schemes]") {
  SECTION("single qubit |0><0|: everything sits on Z") {
    const PauliScheme scheme = pauli_scheme(basis_state(2, 0), 20, 3);
    CHECK(scheme.spec.norm_n == Approx(1.0).margin(1e-12));
    CHECK(scheme.spec.probabilities[2] == Approx(1.0).margin(1e-12));  // Z
    CHECK(scheme.povm.omega1 == Approx(1.0).margin(1e-12));
    CHECK(scheme.povm.omega2 == Approx(0.0).margin(1e-12));
    for (const auto& p : scheme.sampled) CHECK(p.str() == "Z");
  }

  SECTION("Bell target: uniform over XX, YY, ZZ with the YY sign flipped") {
    const DensityMatrix bell = ghz_state(2);
    const PauliScheme scheme = pauli_scheme(bell, 3000, 11);
    CHECK(scheme.spec.norm_n == Approx(3.0).margin(1e-10));
    std::map<std::string, int> histogram;
    for (const auto& p : scheme.sampled) ++histogram[p.str()];
    REQUIRE(histogram.size() == 3);
    CHECK(histogram.count("XX") == 1);
    CHECK(histogram.count("-YY") == 1);
    CHECK(histogram.count("ZZ") == 1);

    // A stabilizer target reproduces the stabilizer-scheme POVM: N = d - 1.
    CHECK(scheme.povm.omega1 == Approx(1.0).margin(1e-10));
    CHECK(scheme.povm.omega2 == Approx((4.0 / 2.0 - 1.0) / (4.0 - 1.0)).margin(1e-10));
  }
}

TEST_CASE("pauli POVM modes", "[schemes]") {
  SECTION("Z subspace") {
    const PovmSetting s = pauli_povm(PauliString::parse("Z"), PovmMode::subspace);
    CHECK((s.effects[0].mat() - basis_state(2, 0).mat()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((s.effects[1].mat() - basis_state(2, 1).mat()).cwiseAbs().maxCoeff() < 1e-14);
  }

  SECTION("XX subspace projectors have rank 2") {
    const PovmSetting s = pauli_povm(PauliString::parse("XX"), PovmMode::subspace);
    CHECK(s.effects[0].mat().trace().real() == Approx(2.0));
    CHECK(s.effects[1].mat().trace().real() == Approx(2.0));
    const Cmatrix w = pauli_matrix(PauliString::parse("XX")).mat();
    CHECK((s.effects[0].mat() - 0.5 * (Cmatrix::Identity(4, 4) + w)).cwiseAbs().maxCoeff() <
          1e-14);
  }

  SECTION("XX eigenbasis is the |+->(x)|+-> family") {
    const PovmSetting s = pauli_povm(PauliString::parse("XX"), PovmMode::eigenbasis);
    REQUIRE(s.effects.size() == 4);
    Cvector plus(2), minus(2);
    plus << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
    minus << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0);
    const std::vector<Cvector> expect = {plus, minus};
    for (int b = 0; b < 4; ++b) {
      Cvector v(4);
      const Cvector& first = expect[static_cast<std::size_t>((b >> 1) & 1)];
      const Cvector& second = expect[static_cast<std::size_t>(b & 1)];
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) v[2 * i + j] = first[i] * second[j];
      CHECK((s.effects[static_cast<std::size_t>(b)].mat() - v * v.adjoint())
                .cwiseAbs()
                .maxCoeff() < 1e-14);
    }
    CHECK(s.validation_errors().empty());
  }

  SECTION("outcome eigenvalues match tr(W E_b) for rank-one effects") {
    const PauliString word = PauliString::parse("-YZ");
    const PovmSetting s = pauli_povm(word, PovmMode::eigenbasis);
    const auto eig = pauli_povm_eigenvalues(word, PovmMode::eigenbasis);
    const Cmatrix w = pauli_matrix(word).mat();
    for (std::size_t b = 0; b < s.effects.size(); ++b) {
      CHECK(trace_product(w, s.effects[b].mat()) ==
            Approx(static_cast<double>(eig[b])).margin(1e-12));
    }
  }

  CHECK_THROWS_AS(pauli_povm(PauliString::parse("II"), PovmMode::subspace),
                  invalid_input_error);
}

TEST_CASE("insufficient generators saturate the risk", "[schemes]") {
  // Bell target measured through a single generator (subspace projections):
  // two orthogonal stabilizer states explain the statistics, so no shot count
  // can distinguish them.
  const DensityMatrix bell = ghz_state(2);
  for (std::int64_t reps : {100, 1000}) {
    const MeasurementPlan plan(
        bell, 0.05, {pauli_povm(PauliString::parse("XX"), PovmMode::subspace, reps)});
    const SaddlePoint sp = outer_minimize(plan);
    CHECK(0.5 * sp.saddle_value == Approx(0.5).margin(1e-3));
  }
}

TEST_CASE("scheme risks are consistent with the closed forms", "[schemes]") {
  SECTION("stabilizer effective POVM at d = 2 and d = 4") {
    for (int n : {1, 2}) {
      const auto group = StabilizerGroup::ghz(n);
      const DensityMatrix rho = stabilizer_state(group);
      const StabilizerScheme scheme = stabilizer_scheme(group, 200, 5);
      const MeasurementPlan plan(rho, 0.05, {scheme.povm.setting("stab", 200)});
      const double solver_risk = 0.5 * solve_reduced_two_outcome(plan).saddle_value;
      const double formula =
          risk_stabilizer(static_cast<double>(rho.dim()), 200, 0.05);
      CHECK(solver_risk == Approx(formula).margin(2e-3));
    }
  }

  SECTION("pauli scheme effective POVM matches the two-outcome formula") {
    const DensityMatrix target = random_pure_state(4, 40);
    const PauliScheme scheme = pauli_scheme(target, 300, 6);
    const MeasurementPlan plan(target, 0.05, {scheme.povm.setting("pauli", 300)});
    const double solver_risk = 0.5 * solve_reduced_two_outcome(plan).saddle_value;
    const double formula = risk_two_outcome(
        TwoOutcomeModel(scheme.povm.omega1, scheme.povm.omega2, 300, 0.05));
    CHECK(solver_risk == Approx(formula).margin(2e-3));
  }
}

TEST_CASE("DFE scheme bookkeeping and noiseless estimates", "[schemes]") {
  const DensityMatrix bell = ghz_state(2);
  const DfeScheme scheme = dfe_scheme(bell, 0.1, 0.1, 9);
  CHECK(scheme.total_samples == 8000);  // ceil(1/((risk/2)^2 (eps/2)))

  // Sampling weights: identity carries 1/d, the rest (d-1)/d in total.
  const Rvector weights = pauli_expectations(bell, 2);
  double non_identity = 0.0;
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    non_identity += weights[i] * weights[i] / 4.0;
  }
  CHECK(non_identity == Approx(3.0 / 4.0).margin(1e-10));

  for (PovmMode mode : {PovmMode::subspace, PovmMode::eigenbasis}) {
    MeasurementPlan plan = scheme.plan(bell, mode, 0.0);
    plan.validate();
    const Dataset data = sample_outcomes(plan, bell, 123);
    CHECK(dfe_estimate(scheme, mode, data) == Approx(1.0).margin(1e-9));
  }

  // Determinism.
  const DfeScheme again = dfe_scheme(bell, 0.1, 0.1, 9);
  CHECK(again.identity_samples == scheme.identity_samples);
  REQUIRE(again.entries.size() == scheme.entries.size());
  for (std::size_t i = 0; i < again.entries.size(); ++i) {
    CHECK(again.entries[i].pauli.str() == scheme.entries[i].pauli.str());
    CHECK(again.entries[i].multiplicity == scheme.entries[i].multiplicity);
  }
}

TEST_CASE("generated plans validate", "[schemes]") {
  const DensityMatrix target = random_pure_state(4, 50);
  const PauliScheme ps = pauli_scheme(target, 64, 2);
  MeasurementPlan pauli_plan(target, 0.05, {ps.povm.setting("pauli", 64)});
  CHECK(pauli_plan.validation_errors().empty());

  const DfeScheme dfe = dfe_scheme(target, 0.2, 0.2, 2);
  CHECK(dfe.plan(target, PovmMode::subspace).validation_errors().empty());
  CHECK(dfe.plan(target, PovmMode::eigenbasis).validation_errors().empty());
}
