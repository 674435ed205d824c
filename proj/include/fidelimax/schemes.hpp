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

#ifndef FIDELIMAX_SCHEMES_HPP
#define FIDELIMAX_SCHEMES_HPP

// Measurement scheme generators: the optimal target-basis POVM, uniform
// stabilizer sampling, the randomized Pauli scheme, Pauli subspace/eigenbasis
// POVM builders, and the DFE benchmark prescription.

#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "fidelimax/errors.hpp"
#include "fidelimax/estimator.hpp"
#include "fidelimax/operators.hpp"
#include "fidelimax/pauli.hpp"
#include "fidelimax/rng.hpp"

namespace fidelimax {

/// Two-outcome POVM lying in span{rho, I - rho}: Theta = w1 rho + w2 (I - rho).
struct EffectivePovm {
  HermitianOperator theta;
  HermitianOperator delta_theta;
  double omega1 = 1.0;
  double omega2 = 0.0;

  static EffectivePovm from_weights(const DensityMatrix& target, double w1, double w2) {
    if (!target.is_pure()) {
      throw invalid_input_error("EffectivePovm: target must be pure");
    }
    if (w1 < -1e-12 || w1 > 1.0 + 1e-12 || w2 < -1e-12 || w2 > 1.0 + 1e-12) {
      throw invalid_input_error("EffectivePovm: weights must lie in [0, 1]");
    }
    const Eigen::Index d = target.dim();
    const Cmatrix delta_rho = Cmatrix::Identity(d, d) - target.mat();
    Cmatrix theta = w1 * target.mat() + w2 * delta_rho;
    Cmatrix rest = Cmatrix::Identity(d, d) - theta;
    return EffectivePovm{HermitianOperator(std::move(theta)),
                         HermitianOperator(std::move(rest)), w1, w2};
  }

  PovmSetting setting(const std::string& label, std::int64_t repetitions) const {
    PovmSetting s;
    s.label = label;
    s.repetitions = repetitions;
    s.effects = {theta, delta_theta};
    return s;
  }
};

/// The risk-optimal measurement for a pure target: the POVM {rho, I - rho}.
inline PovmSetting optimal_povm(const DensityMatrix& target,
                                std::int64_t repetitions = 1) {
  if (!target.is_pure()) {
    throw invalid_input_error("optimal_povm: target must be pure");
  }
  const Eigen::Index d = target.dim();
  PovmSetting s;
  s.label = "target-basis";
  s.repetitions = repetitions;
  s.effects.emplace_back(target.mat());
  s.effects.emplace_back(Cmatrix::Identity(d, d) - target.mat());
  return s;
}

/// Uniform sampling of non-identity stabilizer elements, with replacement,
/// plus the two-outcome effective POVM that reproduces its statistics:
/// Theta = rho + ((d/2 - 1)/(d - 1)) (I - rho).
struct StabilizerScheme {
  std::vector<PauliString> sampled;
  EffectivePovm povm;
  std::int64_t repetitions = 0;
};

inline StabilizerScheme stabilizer_scheme(const StabilizerGroup& group,
                                          std::int64_t repetitions, std::uint64_t seed) {
  const auto elements = enumerate_group(group);  // identity-first, guards n <= 12
  const DensityMatrix rho = stabilizer_state(group);
  const auto d = static_cast<double>(rho.dim());
  const double w2 = (d / 2.0 - 1.0) / (d - 1.0);

  SplitMix64 rng(seed);
  std::vector<PauliString> sampled;
  sampled.reserve(static_cast<std::size_t>(repetitions));
  const std::uint64_t non_identity = elements.size() - 1;
  for (std::int64_t r = 0; r < repetitions; ++r) {
    sampled.push_back(elements[1 + rng.next_below(non_identity)]);
  }
  return StabilizerScheme{std::move(sampled), EffectivePovm::from_weights(rho, 1.0, w2),
                          repetitions};
}

/// Sampling weights of the randomized Pauli scheme: p_i proportional to
/// |tr(W_i rho)| over the non-identity Pauli words, plus the weight norm
/// N = sum_i |tr(W_i rho)| and the signs to fold into the measured operators.
struct PauliSchemeSpec {
  std::vector<double> probabilities;  // indexed like pauli_expectations
  std::vector<int> signs;
  double norm_n = 0.0;
};

struct PauliScheme {
  PauliSchemeSpec spec;
  std::vector<PauliString> sampled;  // signed
  EffectivePovm povm;
  std::int64_t repetitions = 0;
};

inline PauliScheme pauli_scheme(const DensityMatrix& target, std::int64_t repetitions,
                                std::uint64_t seed) {
  if (!target.is_pure()) {
    throw invalid_input_error("pauli_scheme: target must be pure");
  }
  int n_qubits = 0;
  while ((Eigen::Index{1} << n_qubits) < target.dim()) ++n_qubits;
  if ((Eigen::Index{1} << n_qubits) != target.dim()) {
    throw invalid_input_error("pauli_scheme: dimension is not 2^n");
  }
  const Rvector weights = pauli_expectations(target, n_qubits);

  PauliSchemeSpec spec;
  spec.probabilities.resize(static_cast<std::size_t>(weights.size()));
  spec.signs.resize(static_cast<std::size_t>(weights.size()));
  spec.norm_n = weights.cwiseAbs().sum();
  if (!(spec.norm_n > 1e-12)) {
    throw std::logic_error("pauli_scheme: zero Pauli weight norm for a pure state");
  }
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    spec.probabilities[static_cast<std::size_t>(i)] = std::abs(weights[i]) / spec.norm_n;
    spec.signs[static_cast<std::size_t>(i)] = weights[i] < 0.0 ? -1 : +1;
  }

  SplitMix64 rng(seed);
  std::vector<PauliString> sampled;
  sampled.reserve(static_cast<std::size_t>(repetitions));
  for (std::int64_t r = 0; r < repetitions; ++r) {
    const std::size_t i = rng.next_categorical(spec.probabilities);
    PauliString w = pauli_from_index(n_qubits, static_cast<std::uint64_t>(i) + 1);
    w.sign = spec.signs[i];
    sampled.push_back(std::move(w));
  }

  const auto d = static_cast<double>(target.dim());
  const double n = spec.norm_n;
  const double w1 = (d + n - 1.0) / (2.0 * n);
  const double w2 = (n - 1.0) / (2.0 * n);
  return PauliScheme{std::move(spec), std::move(sampled),
                     EffectivePovm::from_weights(target, w1, w2), repetitions};
}

enum class PovmMode { subspace, eigenbasis };

inline PovmMode povm_mode_from_string(const std::string& s) {
  if (s == "subspace") return PovmMode::subspace;
  if (s == "eigenbasis") return PovmMode::eigenbasis;
  throw invalid_input_error("unknown POVM mode '" + s + "'");
}

namespace detail {

// Canonical single-qubit eigenvectors, +1 first: Z -> |0>,|1>; X -> |+>,|->;
// Y -> |+i>,|-i>; I reuses the Z basis (both eigenvalues +1).
inline std::pair<Cvector, Cvector> letter_eigenbasis(PauliLetter l) {
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  Cvector plus(2), minus(2);
  switch (l) {
    case PauliLetter::X:
      plus << inv_sqrt2, inv_sqrt2;
      minus << inv_sqrt2, -inv_sqrt2;
      break;
    case PauliLetter::Y:
      plus << inv_sqrt2, Complex(0.0, inv_sqrt2);
      minus << inv_sqrt2, Complex(0.0, -inv_sqrt2);
      break;
    default:
      plus << 1.0, 0.0;
      minus << 0.0, 1.0;
      break;
  }
  return {plus, minus};
}

}  // namespace detail

/// POVM realizing a Pauli measurement. Subspace mode has the two projectors
/// (I +- W)/2 of the signed operator; eigenbasis mode has d rank-one
/// projectors built from the canonical tensor-product eigenbasis (bit b_q of
/// the outcome index selects the -1 eigenvector of qubit q's letter).
inline PovmSetting pauli_povm(const PauliString& p, PovmMode mode,
                              std::int64_t repetitions = 1) {
  if (p.is_identity()) {
    throw invalid_input_error("pauli_povm: identity has no measurement");
  }
  PovmSetting s;
  s.label = p.str();
  s.repetitions = repetitions;
  if (mode == PovmMode::subspace) {
    const Cmatrix w = pauli_matrix(p).mat();
    const Eigen::Index d = w.rows();
    s.effects.emplace_back(hermitize(0.5 * (Cmatrix::Identity(d, d) + w)));
    s.effects.emplace_back(hermitize(0.5 * (Cmatrix::Identity(d, d) - w)));
    return s;
  }
  const int n = p.n_qubits();
  const Eigen::Index d = Eigen::Index{1} << n;
  for (Eigen::Index b = 0; b < d; ++b) {
    Cvector v(1);
    v << 1.0;
    for (int q = 0; q < n; ++q) {
      const auto [plus, minus] = detail::letter_eigenbasis(p.letters[static_cast<std::size_t>(q)]);
      const Cvector& pick = (b >> (n - 1 - q)) & 1 ? minus : plus;
      Cvector grown(v.size() * 2);
      for (Eigen::Index i = 0; i < v.size(); ++i) {
        grown[2 * i] = v[i] * pick[0];
        grown[2 * i + 1] = v[i] * pick[1];
      }
      v = std::move(grown);
    }
    s.effects.emplace_back(v * v.adjoint());
  }
  return s;
}

/// Eigenvalue of the signed Pauli word for each outcome of pauli_povm.
inline std::vector<int> pauli_povm_eigenvalues(const PauliString& p, PovmMode mode) {
  if (mode == PovmMode::subspace) return {+1, -1};
  const int n = p.n_qubits();
  const Eigen::Index d = Eigen::Index{1} << n;
  std::vector<int> eig(static_cast<std::size_t>(d), p.sign);
  for (Eigen::Index b = 0; b < d; ++b) {
    for (int q = 0; q < n; ++q) {
      if (p.letters[static_cast<std::size_t>(q)] == PauliLetter::I) continue;
      if ((b >> (n - 1 - q)) & 1) eig[static_cast<std::size_t>(b)] *= -1;
    }
  }
  return eig;
}

/// One sampled Pauli of a DFE prescription, merged over repeated draws.
struct DfeEntry {
  PauliString pauli;        // unsigned word
  double weight = 0.0;      // tr(W rho)
  std::int64_t multiplicity = 0;
  std::int64_t shots_per_sample = 0;  // m_i
};

/// DFE benchmark prescription: importance-sampled Pauli words with per-word
/// shot counts. Constants follow the standard direct fidelity estimation
/// recipe (Flammia & Liu), with the additive-error and failure budgets split
/// evenly between the sampling and measurement stages so the overall estimate
/// meets `risk` at confidence 1 - eps: l = ceil(1/((risk/2)^2 (eps/2)))
/// sampled words with Pr(i) = tr(W_i rho)^2 / d, and m_i =
/// ceil(2 ln(4/eps) / (l tr(W_i rho)^2 (risk/2)^2)) shots per sample.
/// Identity draws contribute exactly 1/1.
struct DfeScheme {
  std::int64_t total_samples = 0;     // l
  std::int64_t identity_samples = 0;  // draws that hit the identity word
  std::vector<DfeEntry> entries;
  double risk = 0.0;
  double epsilon = 0.0;

  std::int64_t total_shots() const {
    std::int64_t total = 0;
    for (const auto& e : entries) total += e.multiplicity * e.shots_per_sample;
    return total;
  }

  std::vector<PovmSetting> settings(PovmMode mode) const {
    std::vector<PovmSetting> out;
    out.reserve(entries.size());
    for (const auto& e : entries) {
      out.push_back(pauli_povm(e.pauli, mode, e.multiplicity * e.shots_per_sample));
    }
    return out;
  }

  MeasurementPlan plan(const DensityMatrix& target, PovmMode mode,
                       double epsilon_o = 1e-5) const {
    return MeasurementPlan(target, epsilon, settings(mode), epsilon_o);
  }
};

inline DfeScheme dfe_scheme(const DensityMatrix& target, double risk, double epsilon,
                            std::uint64_t seed) {
  if (!target.is_pure()) throw invalid_input_error("dfe_scheme: target must be pure");
  if (!(risk > 0.0 && risk < 0.5)) {
    throw invalid_input_error("dfe_scheme: risk must lie in (0, 0.5)");
  }
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw invalid_input_error("dfe_scheme: epsilon must lie in (0, 1)");
  }
  int n_qubits = 0;
  while ((Eigen::Index{1} << n_qubits) < target.dim()) ++n_qubits;
  if ((Eigen::Index{1} << n_qubits) != target.dim()) {
    throw invalid_input_error("dfe_scheme: dimension is not 2^n");
  }
  const auto d = static_cast<double>(target.dim());
  const Rvector weights = pauli_expectations(target, n_qubits);

  // Pr over all 4^n words, identity (index 0) included: tr(W rho)^2 / d.
  std::vector<double> pr(static_cast<std::size_t>(weights.size()) + 1);
  pr[0] = 1.0 / d;
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    pr[static_cast<std::size_t>(i) + 1] = weights[i] * weights[i] / d;
  }

  DfeScheme scheme;
  scheme.risk = risk;
  scheme.epsilon = epsilon;
  const double half_risk = risk / 2.0;
  const double half_eps = epsilon / 2.0;
  scheme.total_samples = static_cast<std::int64_t>(
      std::ceil(1.0 / (half_risk * half_risk * half_eps)));

  SplitMix64 rng(seed);
  std::map<std::uint64_t, std::int64_t> multiplicity;
  for (std::int64_t s = 0; s < scheme.total_samples; ++s) {
    const std::size_t i = rng.next_categorical(pr);
    if (i == 0) {
      ++scheme.identity_samples;
    } else {
      ++multiplicity[static_cast<std::uint64_t>(i)];
    }
  }

  const double lsamples = static_cast<double>(scheme.total_samples);
  for (const auto& [index, mult] : multiplicity) {
    DfeEntry e;
    e.pauli = pauli_from_index(n_qubits, index);
    e.weight = weights[static_cast<Eigen::Index>(index) - 1];
    e.multiplicity = mult;
    e.shots_per_sample = static_cast<std::int64_t>(
        std::ceil(2.0 * std::log(2.0 / half_eps) /
                  (lsamples * e.weight * e.weight * half_risk * half_risk)));
    scheme.entries.push_back(std::move(e));
  }
  return scheme;
}

/// DFE's own estimator: the importance-weighted mean of the per-word
/// expectation estimates, X_i = (mean outcome eigenvalue)/tr(W_i rho).
inline double dfe_estimate(const DfeScheme& scheme, PovmMode mode, const Dataset& data) {
  if (data.n_settings() != scheme.entries.size()) {
    throw invalid_input_error("dfe_estimate: dataset does not match scheme");
  }
  double acc = static_cast<double>(scheme.identity_samples);
  for (std::size_t l = 0; l < scheme.entries.size(); ++l) {
    const auto& e = scheme.entries[l];
    const auto eig = pauli_povm_eigenvalues(e.pauli, mode);
    if (eig.size() != data.counts[l].size()) {
      throw invalid_input_error("dfe_estimate: outcome count mismatch in setting " +
                                std::to_string(l));
    }
    double mean_eig = 0.0;
    for (std::size_t k = 0; k < eig.size(); ++k) {
      mean_eig += static_cast<double>(eig[k]) * static_cast<double>(data.counts[l][k]);
    }
    mean_eig /= static_cast<double>(data.shots(l));
    acc += static_cast<double>(e.multiplicity) * mean_eig / e.weight;
  }
  return acc / static_cast<double>(scheme.total_samples);
}

}  // namespace fidelimax

#endif  // FIDELIMAX_SCHEMES_HPP
