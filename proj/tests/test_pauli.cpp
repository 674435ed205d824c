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

#include "fidelimax/pauli.hpp"
#include "fidelimax/risk.hpp"

using namespace fidelimax;
using Catch::Approx;

namespace {

// Independent 2x2 Pauli matrices and Kronecker product for oracle checks.
Cmatrix oracle_single(char c) {
  Cmatrix m(2, 2);
  const Complex i(0, 1);
  switch (c) {
    case 'I': m << 1, 0, 0, 1; break;
    case 'X': m << 0, 1, 1, 0; break;
    case 'Y': m << 0, -i, i, 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

Cmatrix oracle_kron(const Cmatrix& a, const Cmatrix& b) {
  Cmatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Cmatrix oracle_word(const std::string& word) {
  Cmatrix m = oracle_single(word[0]);
  for (std::size_t q = 1; q < word.size(); ++q) m = oracle_kron(m, oracle_single(word[q]));
  return m;
}

// The Bell projector written out by hand.
Cmatrix oracle_bell() {
  Cmatrix b = Cmatrix::Zero(4, 4);
  b(0, 0) = b(0, 3) = b(3, 0) = b(3, 3) = 0.5;
  return b;
}

}  // namespace

TEST_CASE("pauli matrices match the hand-built Kronecker products", "[pauli]") {
  CHECK((pauli_matrix(PauliString::parse("Z")).mat() - oracle_word("Z")).cwiseAbs().maxCoeff() == 0.0);
  CHECK((pauli_matrix(PauliString::parse("-XX")).mat() + oracle_word("XX")).cwiseAbs().maxCoeff() == 0.0);
  CHECK((pauli_matrix(PauliString::parse("XYZ")).mat() - oracle_word("XYZ")).cwiseAbs().maxCoeff() < 1e-15);

  // Involution and tracelessness.
  const Cmatrix w = pauli_matrix(PauliString::parse("-YZ")).mat();
  CHECK((w * w - Cmatrix::Identity(4, 4)).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(std::abs(w.trace()) < 1e-15);
  CHECK(std::abs(pauli_matrix(PauliString::parse("II")).mat().trace() - 4.0) < 1e-15);
}

TEST_CASE("pauli string products carry the right signs", "[pauli]") {
  const auto xx = PauliString::parse("XX");
  const auto zz = PauliString::parse("ZZ");
  const auto prod = multiply(xx, zz);
  CHECK(prod.str() == "-YY");
  // Oracle: the matrix product agrees.
  CHECK((pauli_matrix(prod).mat() - oracle_word("XX") * oracle_word("ZZ")).cwiseAbs().maxCoeff() < 1e-15);

  CHECK(xx.commutes_with(zz));
  CHECK_FALSE(PauliString::parse("XI").commutes_with(PauliString::parse("ZI")));
  CHECK_THROWS_AS(multiply(PauliString::parse("X"), PauliString::parse("Z")),
                  invalid_input_error);
}

TEST_CASE("pauli expectations of basis, mixed, and Bell states", "[pauli]") {
  const Rvector zero_state = pauli_expectations(basis_state(2, 0), 1);
  // Order: X, Y, Z.
  CHECK(zero_state[0] == Approx(0.0).margin(1e-14));
  CHECK(zero_state[1] == Approx(0.0).margin(1e-14));
  CHECK(zero_state[2] == Approx(1.0).margin(1e-14));

  CHECK(pauli_expectations(maximally_mixed(4), 2).cwiseAbs().maxCoeff() < 1e-14);

  // Bell state against the hand-built projector: XX = +1, YY = -1, ZZ = +1.
  const DensityMatrix bell{oracle_bell()};
  const Rvector e = pauli_expectations(bell, 2);
  int nonzero = 0;
  for (std::uint64_t i = 1; i < 16; ++i) {
    const PauliString w = pauli_from_index(2, i);
    const double oracle = (oracle_word(w.str()) * bell.mat()).trace().real();
    CHECK(e[static_cast<Eigen::Index>(i - 1)] == Approx(oracle).margin(1e-12));
    if (std::abs(oracle) > 0.5) {
      ++nonzero;
      CHECK(std::abs(std::abs(oracle) - 1.0) < 1e-12);
    }
  }
  CHECK(nonzero == 3);

  CHECK_THROWS_AS(pauli_expectations(maximally_mixed(4), 1), invalid_input_error);
}

TEST_CASE("pure states satisfy the Pauli weight identities", "[pauli]") {
  for (int n = 1; n <= 3; ++n) {
    const auto d = static_cast<double>(Eigen::Index{1} << n);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const DensityMatrix rho = random_pure_state(Eigen::Index{1} << n, seed);
      const Rvector x = pauli_expectations(rho, n);
      CHECK(x.squaredNorm() == Approx(d - 1.0).margin(1e-8));
      CHECK(x.cwiseAbs().sum() <= pauli_norm_bound(static_cast<std::int64_t>(d)) + 1e-8);
    }
  }
}

TEST_CASE("stabilizer groups enumerate correctly", "[pauli]") {
  const auto z = enumerate_group(StabilizerGroup::from_strings({"Z"}));
  REQUIRE(z.size() == 2);
  CHECK(z[0].str() == "I");
  CHECK(z[1].str() == "Z");

  const auto bell = enumerate_group(StabilizerGroup::from_strings({"XX", "ZZ"}));
  REQUIRE(bell.size() == 4);
  std::vector<std::string> words;
  for (const auto& p : bell) words.push_back(p.str());
  CHECK(std::count(words.begin(), words.end(), "II") == 1);
  CHECK(std::count(words.begin(), words.end(), "XX") == 1);
  CHECK(std::count(words.begin(), words.end(), "ZZ") == 1);
  CHECK(std::count(words.begin(), words.end(), "-YY") == 1);

  // Closure under multiplication.
  for (const auto& a : bell) {
    for (const auto& b : bell) {
      const auto ab = multiply(a, b).str();
      CHECK(std::count(words.begin(), words.end(), ab) == 1);
    }
  }

  CHECK_THROWS_AS(enumerate_group(StabilizerGroup::from_strings({"XX", "ZI"})),
                  invalid_input_error);
  CHECK_THROWS_AS(enumerate_group(StabilizerGroup::from_strings({"XX", "XX"})),
                  invalid_input_error);
  CHECK_THROWS_AS(enumerate_group(StabilizerGroup::ghz(13)), resource_limit_error);
}

TEST_CASE("stabilizer states from groups", "[pauli]") {
  const DensityMatrix zero = stabilizer_state(StabilizerGroup::from_strings({"Z"}));
  CHECK((zero.mat() - basis_state(2, 0).mat()).cwiseAbs().maxCoeff() < 1e-14);

  const DensityMatrix bell = stabilizer_state(StabilizerGroup::from_strings({"XX", "ZZ"}));
  CHECK((bell.mat() - oracle_bell()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(bell.is_pure(1e-12));

  for (const auto& s : enumerate_group(StabilizerGroup::from_strings({"XX", "ZZ"}))) {
    CHECK(trace_product(pauli_matrix(s).mat(), bell.mat()) == Approx(1.0).margin(1e-12));
  }

  const DensityMatrix ghz3 = stabilizer_state(StabilizerGroup::ghz(3));
  CHECK((ghz3.mat() - ghz_state(3).mat()).cwiseAbs().maxCoeff() < 1e-12);
}
