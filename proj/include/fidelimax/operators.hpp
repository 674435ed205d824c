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

#ifndef FIDELIMAX_OPERATORS_HPP
#define FIDELIMAX_OPERATORS_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fidelimax/errors.hpp"
#include "fidelimax/linalg.hpp"
#include "fidelimax/rng.hpp"

namespace fidelimax {

inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kEigenvalueTol = 1e-10;
inline constexpr double kTraceTol = 1e-10;
inline constexpr double kPurityTol = 1e-8;

/// Dense complex Hermitian matrix. Construction symmetrizes the input and
/// rejects anything further than 1e-12 (entrywise) from Hermitian.
class HermitianOperator {
 public:
  explicit HermitianOperator(Cmatrix m) {
    if (m.rows() != m.cols() || m.rows() == 0) {
      throw invalid_input_error("HermitianOperator: matrix must be square");
    }
    const double dev = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (dev > kHermitianTol) {
      throw invalid_input_error(
          "HermitianOperator: entries deviate from Hermitian symmetry by " +
          std::to_string(dev));
    }
    m_ = hermitize(std::move(m));
  }

  Eigen::Index dim() const { return m_.rows(); }
  const Cmatrix& mat() const { return m_; }

  double min_eigenvalue() const { return eigh(m_).values.minCoeff(); }

 private:
  Cmatrix m_;
};

/// Density matrix: Hermitian, positive semidefinite (eigenvalues >= -1e-10),
/// unit trace (within 1e-10).
class DensityMatrix {
 public:
  explicit DensityMatrix(HermitianOperator op) : op_(std::move(op)) {
    const double tr = op_.mat().trace().real();
    if (std::abs(tr - 1.0) > kTraceTol) {
      throw invalid_input_error("DensityMatrix: trace is " +
                                std::to_string(tr) + ", expected 1");
    }
    const double lam_min = op_.min_eigenvalue();
    if (lam_min < -kEigenvalueTol) {
      throw invalid_input_error("DensityMatrix: negative eigenvalue " +
                                std::to_string(lam_min));
    }
  }

  explicit DensityMatrix(Cmatrix m) : DensityMatrix(HermitianOperator(std::move(m))) {}

  /// Wraps a matrix that is valid by construction (e.g. the output of a
  /// simplex projection), skipping the O(d^3) eigenvalue check.
  static DensityMatrix trusted(Cmatrix m) { return DensityMatrix(Tag{}, std::move(m)); }

  Eigen::Index dim() const { return op_.dim(); }
  const Cmatrix& mat() const { return op_.mat(); }

  double purity() const { return trace_product(mat(), mat()); }
  bool is_pure(double tol = kPurityTol) const { return std::abs(purity() - 1.0) <= tol; }

 private:
  struct Tag {};
  DensityMatrix(Tag, Cmatrix m) : op_(trusted_op(std::move(m))) {}
  static HermitianOperator trusted_op(Cmatrix m) {
    return HermitianOperator(hermitize(std::move(m)));
  }

  HermitianOperator op_;
};

/// One measurement setting: a POVM (PSD effects summing to identity) and the
/// number of shots allotted to it.
struct PovmSetting {
  std::string label;
  std::vector<HermitianOperator> effects;
  std::int64_t repetitions = 1;

  Eigen::Index dim() const { return effects.empty() ? 0 : effects.front().dim(); }
  std::size_t outcomes() const { return effects.size(); }

  std::vector<std::string> validation_errors() const {
    std::vector<std::string> errs;
    if (effects.size() < 2) {
      errs.push_back("setting '" + label + "': needs at least 2 effects");
      return errs;
    }
    if (repetitions < 1) {
      errs.push_back("setting '" + label + "': repetitions must be positive");
    }
    const Eigen::Index d = effects.front().dim();
    Cmatrix sum = Cmatrix::Zero(d, d);
    for (std::size_t k = 0; k < effects.size(); ++k) {
      if (effects[k].dim() != d) {
        errs.push_back("setting '" + label + "': effect " + std::to_string(k) +
                       " has mismatched dimension");
        return errs;
      }
      const double lam = effects[k].min_eigenvalue();
      if (lam < -kEigenvalueTol) {
        errs.push_back("setting '" + label + "': effect " + std::to_string(k) +
                       " has negative eigenvalue " + std::to_string(lam));
      }
      sum += effects[k].mat();
    }
    const double dev = (sum - Cmatrix::Identity(d, d)).cwiseAbs().maxCoeff();
    if (dev > kTraceTol) {
      errs.push_back("setting '" + label + "': effects sum deviates from identity by " +
                     std::to_string(dev));
    }
    return errs;
  }
};

/// Complete description of an estimation problem: pure target state,
/// confidence parameter, smoothing parameter, and the measurement settings.
struct MeasurementPlan {
  Eigen::Index dim;
  DensityMatrix target;
  double epsilon;
  double epsilon_o;
  std::vector<PovmSetting> settings;

  MeasurementPlan(DensityMatrix target_state, double eps,
                  std::vector<PovmSetting> povm_settings, double eps_o = 1e-5)
      : dim(target_state.dim()),
        target(std::move(target_state)),
        epsilon(eps),
        epsilon_o(eps_o),
        settings(std::move(povm_settings)) {}

  std::vector<std::string> validation_errors() const {
    std::vector<std::string> errs;
    if (dim < 2) errs.push_back("plan: dimension must be at least 2");
    if (target.dim() != dim) errs.push_back("plan: target dimension mismatch");
    if (!(epsilon > 0.0 && epsilon < 0.25)) {
      errs.push_back("plan: epsilon must lie in (0, 0.25)");
    }
    if (epsilon_o < 0.0) errs.push_back("plan: epsilon_o must be nonnegative");
    if (!target.is_pure()) {
      errs.push_back("plan: target state is not pure (tr(rho^2) = " +
                     std::to_string(target.purity()) + ")");
    }
    for (const auto& s : settings) {
      if (s.dim() != dim) {
        errs.push_back("setting '" + s.label + "': dimension mismatch with plan");
        continue;
      }
      auto sub = s.validation_errors();
      errs.insert(errs.end(), sub.begin(), sub.end());
    }
    return errs;
  }

  void validate() const {
    const auto errs = validation_errors();
    if (!errs.empty()) throw invalid_input_error(errs.front());
  }

  std::int64_t total_shots() const {
    std::int64_t total = 0;
    for (const auto& s : settings) total += s.repetitions;
    return total;
  }
};

/// Smoothed Born probabilities: p(k) = (tr(E_k sigma) + eps_o/N) / (1 + eps_o).
inline Rvector born_probs(const PovmSetting& setting, const DensityMatrix& state,
                          double epsilon_o) {
  if (setting.dim() != state.dim()) {
    throw invalid_input_error("born_probs: dimension mismatch");
  }
  if (epsilon_o < 0.0) {
    throw invalid_input_error("born_probs: epsilon_o must be nonnegative");
  }
  const auto n = static_cast<Eigen::Index>(setting.outcomes());
  const double bias = epsilon_o / static_cast<double>(n);
  Rvector p(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    p[k] = (trace_product(setting.effects[static_cast<std::size_t>(k)].mat(),
                          state.mat()) +
            bias) /
           (1.0 + epsilon_o);
  }
  return p;
}

/// F(rho, sigma) = tr(rho sigma) for a pure target rho.
inline double fidelity_pure(const DensityMatrix& target, const DensityMatrix& state) {
  if (!target.is_pure()) {
    throw invalid_input_error("fidelity_pure: target state is not pure");
  }
  if (target.dim() != state.dim()) {
    throw invalid_input_error("fidelity_pure: dimension mismatch");
  }
  return trace_product(target.mat(), state.mat());
}

/// Classical fidelity (squared Bhattacharyya coefficient) of two outcome
/// distributions.
inline double classical_fidelity(const Rvector& p, const Rvector& q) {
  if (p.size() != q.size()) {
    throw invalid_input_error("classical_fidelity: length mismatch");
  }
  double sum = 0.0;
  for (Eigen::Index k = 0; k < p.size(); ++k) {
    if (p[k] < -1e-12 || q[k] < -1e-12) {
      throw invalid_input_error("classical_fidelity: negative probability");
    }
    sum += std::sqrt(std::max(p[k], 0.0) * std::max(q[k], 0.0));
  }
  if (std::abs(p.sum() - 1.0) > 1e-9 || std::abs(q.sum() - 1.0) > 1e-9) {
    throw invalid_input_error("classical_fidelity: probabilities must sum to 1");
  }
  return sum * sum;
}

/// Hellinger affinity of the full measurement record:
/// prod_l [sum_k sqrt(p1_k p2_k)]^(R_l) with the plan's smoothed probabilities.
inline double hellinger_affinity(const MeasurementPlan& plan, const DensityMatrix& chi1,
                                 const DensityMatrix& chi2) {
  if (chi1.dim() != plan.dim || chi2.dim() != plan.dim) {
    throw invalid_input_error("hellinger_affinity: dimension mismatch");
  }
  double log_aff = 0.0;
  for (const auto& setting : plan.settings) {
    if (setting.repetitions == 0) continue;
    const Rvector p1 = born_probs(setting, chi1, plan.epsilon_o);
    const Rvector p2 = born_probs(setting, chi2, plan.epsilon_o);
    double s = 0.0;
    for (Eigen::Index k = 0; k < p1.size(); ++k) {
      s += std::sqrt(std::max(p1[k], 0.0) * std::max(p2[k], 0.0));
    }
    if (s <= 0.0) return 0.0;
    log_aff += static_cast<double>(setting.repetitions) * std::log(std::min(s, 1.0));
  }
  return std::exp(log_aff);
}

/// Frobenius-nearest density matrix: diagonalize and project the spectrum
/// onto the probability simplex.
inline DensityMatrix project_density(const Cmatrix& h) {
  if (!is_hermitian(h, 1e-9)) {
    throw invalid_input_error("project_density: input is not Hermitian");
  }
  const EigenSystem es = eigh(h);
  const Rvector lam = project_simplex(es.values);
  Cmatrix out = es.vectors * lam.asDiagonal() * es.vectors.adjoint();
  return DensityMatrix::trusted(std::move(out));
}

inline DensityMatrix project_density(const HermitianOperator& h) {
  return project_density(h.mat());
}

/// (1 - p) * state + p * I/d.
inline DensityMatrix depolarize(const DensityMatrix& state, double p) {
  if (p < 0.0 || p > 1.0) {
    throw invalid_input_error("depolarize: p must lie in [0, 1]");
  }
  const auto d = static_cast<double>(state.dim());
  Cmatrix out = (1.0 - p) * state.mat() +
                (p / d) * Cmatrix::Identity(state.dim(), state.dim());
  return DensityMatrix::trusted(std::move(out));
}

/// Computational basis state |k><k|.
inline DensityMatrix basis_state(Eigen::Index d, Eigen::Index k) {
  if (d < 2 || k < 0 || k >= d) throw invalid_input_error("basis_state: bad index");
  Cmatrix m = Cmatrix::Zero(d, d);
  m(k, k) = 1.0;
  return DensityMatrix::trusted(std::move(m));
}

inline DensityMatrix maximally_mixed(Eigen::Index d) {
  if (d < 2) throw invalid_input_error("maximally_mixed: dimension must be >= 2");
  return DensityMatrix::trusted(Cmatrix::Identity(d, d) / static_cast<double>(d));
}

/// n-qubit GHZ state (|0...0> + |1...1>)/sqrt(2); the Bell state for n = 2.
inline DensityMatrix ghz_state(int n_qubits) {
  if (n_qubits < 1) throw invalid_input_error("ghz_state: need at least 1 qubit");
  const Eigen::Index d = Eigen::Index{1} << n_qubits;
  Cvector v = Cvector::Zero(d);
  v[0] = 1.0 / std::sqrt(2.0);
  v[d - 1] = 1.0 / std::sqrt(2.0);
  return DensityMatrix::trusted(v * v.adjoint());
}

/// Haar-uniform pure state of dimension d: normalized vector of independent
/// standard complex Gaussians.
inline DensityMatrix random_pure_state(Eigen::Index d, std::uint64_t seed) {
  if (d < 2) throw invalid_input_error("random_pure_state: dimension must be >= 2");
  SplitMix64 rng(seed);
  Cvector v(d);
  for (Eigen::Index i = 0; i < d; ++i) {
    v[i] = Complex(rng.next_gaussian(), rng.next_gaussian());
  }
  v /= v.norm();
  return DensityMatrix::trusted(v * v.adjoint());
}

/// Random POVM with the requested number of outcomes: Wishart-style PSD
/// blocks G_k G_k^dagger whitened by the inverse square root of their sum.
inline PovmSetting random_povm(Eigen::Index d, int outcomes, std::uint64_t seed,
                               const std::string& label = "random") {
  if (d < 2 || outcomes < 2) {
    throw invalid_input_error("random_povm: need dimension >= 2 and >= 2 outcomes");
  }
  SplitMix64 rng(seed);
  std::vector<Cmatrix> blocks;
  blocks.reserve(static_cast<std::size_t>(outcomes));
  Cmatrix total = Cmatrix::Zero(d, d);
  for (int k = 0; k < outcomes; ++k) {
    Cmatrix g(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
      for (Eigen::Index j = 0; j < d; ++j) {
        g(i, j) = Complex(rng.next_gaussian(), rng.next_gaussian());
      }
    }
    Cmatrix w = g * g.adjoint();
    total += w;
    blocks.push_back(std::move(w));
  }
  const Cmatrix whiten = inverse_sqrt(total);
  PovmSetting setting;
  setting.label = label;
  setting.repetitions = 1;
  for (auto& w : blocks) {
    setting.effects.emplace_back(hermitize(whiten * w * whiten));
  }
  return setting;
}

}  // namespace fidelimax

#endif  // FIDELIMAX_OPERATORS_HPP
