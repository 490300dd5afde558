// Copyright 2026 The qvbench authors
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

#pragma once

#include <cmath>

#include "qvbench/error.hpp"
#include "qvbench/linalg.hpp"
#include "qvbench/rng.hpp"

namespace qvb {

/// Entry-variance scale of the Hermitian ensemble relative to (G + G†)/2
/// with standard complex Gaussian G. With this scale the ensemble has unit
/// variance per entry (diagonal included), which is the normalization the
/// doubled-channel average f(alpha) in analytic.hpp is calibrated against.
/// See tests/test_noise.cpp for the Monte-Carlo cross-check.
inline const double kGueEntryScale = std::sqrt(2.0);

/// Complex Ginibre matrix: i.i.d. entries with unit total variance.
inline CMatrix sample_ginibre(int dim, RngStream& rng) {
  if (dim < 1) throw Error(ErrorCode::invalid_argument, "invalid-dimension");
  const double s = 1.0 / std::sqrt(2.0);
  CMatrix g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j)
      g(i, j) = Complex(rng.gaussian() * s, rng.gaussian() * s);
  return g;
}

/// Haar-distributed unitary via QR of a Ginibre matrix with the R diagonal
/// phases absorbed into Q. The phase fix is what makes the distribution
/// exactly Haar rather than merely unitary.
inline CMatrix sample_haar_unitary(int dim, RngStream& rng) {
  if (dim < 1) throw Error(ErrorCode::invalid_argument, "invalid-dimension");
  CMatrix g = sample_ginibre(dim, rng);
  Eigen::HouseholderQR<CMatrix> qr(g);
  CMatrix q = qr.householderQ();
  CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < dim; ++j) {
    Complex rjj = r(j, j);
    double a = std::abs(rjj);
    Complex phase = a > 0.0 ? rjj / a : Complex(1.0, 0.0);
    q.col(j) *= phase;
  }
  return q;
}

/// Hermitian sample from the Gaussian unitary ensemble, unit entry variance.
inline CMatrix sample_gue(int dim, RngStream& rng) {
  CMatrix g = sample_ginibre(dim, rng);
  CMatrix h = kGueEntryScale * 0.5 * (g + g.adjoint());
  // Kill the O(eps) imaginary dust on the diagonal so H = H† holds exactly.
  for (int i = 0; i < dim; ++i) h(i, i) = Complex(h(i, i).real(), 0.0);
  return h;
}

/// e^{i alpha H} through the eigendecomposition of Hermitian H, so the
/// result is unitary to solver accuracy at every alpha.
inline CMatrix matrix_exp_unitary(const CMatrix& h, double alpha) {
  if (!is_hermitian(h, 1e-9))
    throw Error(ErrorCode::invalid_argument, "matrix is not Hermitian");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  if (es.info() != Eigen::Success)
    throw Error(ErrorCode::numeric, "numerical-failure: eigensolver did not converge");
  const auto& vals = es.eigenvalues();
  const CMatrix& vecs = es.eigenvectors();
  CVector phases(h.rows());
  for (Eigen::Index k = 0; k < h.rows(); ++k) {
    phases(k) = Complex(std::cos(alpha * vals(k)), std::sin(alpha * vals(k)));
  }
  return vecs * phases.asDiagonal() * vecs.adjoint();
}

/// Two-qubit gate that conserves bit parity: an independent Haar U(2) on the
/// even block {|00>,|11>} and on the odd block {|01>,|10>}. The eight
/// cross-block entries are exactly zero.
inline CMatrix sample_parity_gate(RngStream& rng) {
  CMatrix even = sample_haar_unitary(2, rng);
  CMatrix odd = sample_haar_unitary(2, rng);
  CMatrix u = CMatrix::Zero(4, 4);
  u(0, 0) = even(0, 0);
  u(0, 3) = even(0, 1);
  u(3, 0) = even(1, 0);
  u(3, 3) = even(1, 1);
  u(1, 1) = odd(0, 0);
  u(1, 2) = odd(0, 1);
  u(2, 1) = odd(1, 0);
  u(2, 2) = odd(1, 1);
  return u;
}

/// e^{i a Z⊗Z} = diag(e^{ia}, e^{-ia}, e^{-ia}, e^{ia}).
inline CMatrix diagonal_zz_gate(double a) {
  CMatrix u = CMatrix::Zero(4, 4);
  const Complex plus(std::cos(a), std::sin(a));
  const Complex minus(std::cos(a), -std::sin(a));
  u(0, 0) = plus;
  u(1, 1) = minus;
  u(2, 2) = minus;
  u(3, 3) = plus;
  return u;
}

inline CMatrix swap_gate() {
  CMatrix s = CMatrix::Zero(4, 4);
  s(0, 0) = 1.0;
  s(1, 2) = 1.0;
  s(2, 1) = 1.0;
  s(3, 3) = 1.0;
  return s;
}

/// Fractional swap S^beta: the +1 eigenspace of SWAP is fixed and the
/// singlet picks up e^{i pi beta}. Satisfies S^b1 S^b2 = S^(b1+b2) and has
/// period 2 in beta.
inline CMatrix fractional_swap(double beta) {
  const Complex w = Complex(std::cos(M_PI * beta), std::sin(M_PI * beta)) - 1.0;
  CMatrix u = CMatrix::Identity(4, 4);
  // Singlet projector entries: 1/2 on (1,1),(2,2); -1/2 on (1,2),(2,1).
  u(1, 1) += 0.5 * w;
  u(2, 2) += 0.5 * w;
  u(1, 2) -= 0.5 * w;
  u(2, 1) -= 0.5 * w;
  return u;
}

inline CMatrix pauli_x() {
  CMatrix x = CMatrix::Zero(2, 2);
  x(0, 1) = 1.0;
  x(1, 0) = 1.0;
  return x;
}

}  // namespace qvb
