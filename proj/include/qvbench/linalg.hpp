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

#include <Eigen/Dense>
#include <complex>

namespace qvb {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr double kUnitaryTol = 1e-10;
inline constexpr double kHermitianTol = 1e-12;

inline double max_abs(const CMatrix& m) {
  return m.cwiseAbs().maxCoeff();
}

/// Max-norm of U U† − I.
inline double unitarity_defect(const CMatrix& u) {
  CMatrix d = u * u.adjoint();
  d -= CMatrix::Identity(u.rows(), u.cols());
  return max_abs(d);
}

inline bool is_unitary(const CMatrix& u, double tol = kUnitaryTol) {
  return u.rows() == u.cols() && unitarity_defect(u) < tol;
}

inline double hermiticity_defect(const CMatrix& h) {
  return max_abs(CMatrix(h - h.adjoint()));
}

inline bool is_hermitian(const CMatrix& h, double tol = kHermitianTol) {
  return h.rows() == h.cols() && hermiticity_defect(h) < tol;
}

/// Kronecker product, row-major index convention: (a ⊗ b) acts on index
/// i_a * dim_b + i_b.
inline CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

}  // namespace qvb
