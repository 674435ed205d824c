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

#ifndef FIDELIMAX_LINALG_HPP
#define FIDELIMAX_LINALG_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "fidelimax/errors.hpp"

namespace fidelimax {

using Complex = std::complex<double>;
using Cmatrix = Eigen::MatrixXcd;
using Cvector = Eigen::VectorXcd;
using Rvector = Eigen::VectorXd;

/// (H + H^dagger)/2. Arithmetic on Hermitian matrices goes through this to
/// keep rounding noise out of the imaginary diagonal.
inline Cmatrix hermitize(const Cmatrix& h) {
  return 0.5 * (h + h.adjoint());
}

inline bool is_hermitian(const Cmatrix& h, double tol = 1e-12) {
  if (h.rows() != h.cols()) return false;
  return (h - h.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

/// tr(AB) for Hermitian A, B; always real up to rounding.
inline double trace_product(const Cmatrix& a, const Cmatrix& b) {
  return a.cwiseProduct(b.transpose()).sum().real();
}

inline double frobenius_norm(const Cmatrix& a) { return a.norm(); }

/// Eigendecomposition of a Hermitian matrix: ascending eigenvalues and the
/// matching unitary of eigenvectors.
struct EigenSystem {
  Rvector values;
  Cmatrix vectors;
};

inline EigenSystem eigh(const Cmatrix& h) {
  Eigen::SelfAdjointEigenSolver<Cmatrix> solver(hermitize(h));
  if (solver.info() != Eigen::Success) {
    throw invalid_input_error("eigh: eigendecomposition failed");
  }
  return {solver.eigenvalues(), solver.eigenvectors()};
}

/// Euclidean projection of v onto the probability simplex
/// {x >= 0, sum(x) = 1} by the sorted-threshold rule. The input is first
/// shifted by its maximum (the projection is invariant under uniform shifts),
/// which keeps the threshold well-conditioned for very large inputs.
inline Rvector project_simplex(const Rvector& v_raw) {
  const Eigen::Index n = v_raw.size();
  if (n == 0) throw invalid_input_error("project_simplex: empty vector");
  const Rvector v = v_raw.array() - v_raw.maxCoeff();
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<double>());
  double cumsum = 0.0;
  double tau = 0.0;
  for (Eigen::Index j = 0; j < n; ++j) {
    cumsum += u[static_cast<std::size_t>(j)];
    const double t = (cumsum - 1.0) / static_cast<double>(j + 1);
    if (u[static_cast<std::size_t>(j)] - t > 0.0) tau = t;
  }
  Rvector out(n);
  for (Eigen::Index i = 0; i < n; ++i) out[i] = std::max(v[i] - tau, 0.0);
  return out;
}

/// M^(-1/2) for a positive definite Hermitian M.
inline Cmatrix inverse_sqrt(const Cmatrix& m, double floor = 1e-14) {
  const EigenSystem es = eigh(m);
  Rvector inv(es.values.size());
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    const double lam = std::max(es.values[i], floor);
    inv[i] = 1.0 / std::sqrt(lam);
  }
  return es.vectors * inv.asDiagonal() * es.vectors.adjoint();
}

/// Isometric embedding of a d x d Hermitian matrix into R^(d^2): diagonal
/// entries followed by sqrt(2)-scaled real and imaginary parts of the upper
/// triangle. Satisfies <embed(A), embed(B)> = tr(AB).
inline Rvector embed_hermitian(const Cmatrix& h) {
  const Eigen::Index d = h.rows();
  Rvector out(d * d);
  Eigen::Index pos = 0;
  for (Eigen::Index i = 0; i < d; ++i) out[pos++] = h(i, i).real();
  const double s = std::sqrt(2.0);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      out[pos++] = s * h(i, j).real();
      out[pos++] = s * h(i, j).imag();
    }
  }
  return out;
}

inline Cmatrix unembed_hermitian(const Rvector& v, Eigen::Index d) {
  if (v.size() != d * d) {
    throw invalid_input_error("unembed_hermitian: size mismatch");
  }
  Cmatrix h(d, d);
  Eigen::Index pos = 0;
  for (Eigen::Index i = 0; i < d; ++i) h(i, i) = v[pos++];
  const double s = 1.0 / std::sqrt(2.0);
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      const double re = v[pos++] * s;
      const double im = v[pos++] * s;
      h(i, j) = Complex(re, im);
      h(j, i) = Complex(re, -im);
    }
  }
  return h;
}

}  // namespace fidelimax

#endif  // FIDELIMAX_LINALG_HPP
