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

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "qvbench/error.hpp"
#include "qvbench/linalg.hpp"

namespace qvb {

/// Pure state of n qubits. Qubit 0 is the least significant bit of the
/// basis index throughout the library, including serialization.
struct StateVector {
  int n_qubits = 0;
  CVector amps;

  static StateVector zero(int n) {
    StateVector s;
    s.n_qubits = n;
    s.amps = CVector::Zero(std::int64_t(1) << n);
    s.amps(0) = 1.0;
    return s;
  }

  std::int64_t dim() const { return amps.size(); }

  double norm_sq() const { return amps.squaredNorm(); }
};

inline bool is_permutation(std::span<const int> perm) {
  std::vector<char> seen(perm.size(), 0);
  for (int p : perm) {
    if (p < 0 || p >= static_cast<int>(perm.size()) || seen[p]) return false;
    seen[p] = 1;
  }
  return true;
}

/// Apply a 4x4 gate to qubits (q1, q2). q1 indexes the low bit of the gate
/// matrix, q2 the high bit.
inline void apply_gate(StateVector& s, const CMatrix& gate, int q1, int q2) {
  const int n = s.n_qubits;
  if (q1 == q2 || q1 < 0 || q2 < 0 || q1 >= n || q2 >= n)
    throw Error(ErrorCode::invalid_argument, "invalid-target");
  if (gate.rows() != 4 || gate.cols() != 4)
    throw Error(ErrorCode::invalid_argument, "invalid-dimension: expected 4x4 gate");

  std::array<Complex, 16> u;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) u[r * 4 + c] = gate(r, c);

  const std::int64_t m1 = std::int64_t(1) << q1;
  const std::int64_t m2 = std::int64_t(1) << q2;
  const int lo = q1 < q2 ? q1 : q2;
  const int hi = q1 < q2 ? q2 : q1;
  const std::int64_t lo_mask = (std::int64_t(1) << lo) - 1;
  const std::int64_t mid_mask = (std::int64_t(1) << (hi - 1)) - 1 - lo_mask;
  const std::int64_t count = s.dim() >> 2;

  Complex* a = s.amps.data();
  for (std::int64_t k = 0; k < count; ++k) {
    const std::int64_t base = (k & lo_mask) | ((k & mid_mask) << 1) |
                              ((k & ~(lo_mask | mid_mask)) << 2);
    const std::int64_t i0 = base;
    const std::int64_t i1 = base | m1;
    const std::int64_t i2 = base | m2;
    const std::int64_t i3 = base | m1 | m2;
    const Complex a0 = a[i0], a1 = a[i1], a2 = a[i2], a3 = a[i3];
    a[i0] = u[0] * a0 + u[1] * a1 + u[2] * a2 + u[3] * a3;
    a[i1] = u[4] * a0 + u[5] * a1 + u[6] * a2 + u[7] * a3;
    a[i2] = u[8] * a0 + u[9] * a1 + u[10] * a2 + u[11] * a3;
    a[i3] = u[12] * a0 + u[13] * a1 + u[14] * a2 + u[15] * a3;
  }
}

inline void apply_single(StateVector& s, const CMatrix& gate, int q) {
  const int n = s.n_qubits;
  if (q < 0 || q >= n)
    throw Error(ErrorCode::invalid_argument, "invalid-target");
  if (gate.rows() != 2 || gate.cols() != 2)
    throw Error(ErrorCode::invalid_argument, "invalid-dimension: expected 2x2 gate");

  const Complex u00 = gate(0, 0), u01 = gate(0, 1);
  const Complex u10 = gate(1, 0), u11 = gate(1, 1);
  const std::int64_t m = std::int64_t(1) << q;
  const std::int64_t lo_mask = m - 1;
  const std::int64_t count = s.dim() >> 1;

  Complex* a = s.amps.data();
  for (std::int64_t k = 0; k < count; ++k) {
    const std::int64_t i0 = (k & lo_mask) | ((k & ~lo_mask) << 1);
    const std::int64_t i1 = i0 | m;
    const Complex a0 = a[i0], a1 = a[i1];
    a[i0] = u00 * a0 + u01 * a1;
    a[i1] = u10 * a0 + u11 * a1;
  }
}

/// Relocate qubit i to position perm[i] for every i: the bit at position
/// perm[i] of the new basis index is the bit at position i of the old one.
/// A pure index shuffle; amplitudes are moved, never combined.
inline void apply_permutation(StateVector& s, std::span<const int> perm) {
  const int n = s.n_qubits;
  if (static_cast<int>(perm.size()) != n || !is_permutation(perm))
    throw Error(ErrorCode::invalid_argument, "invalid-permutation");
  bool identity = true;
  for (int i = 0; i < n; ++i) {
    if (perm[i] != i) {
      identity = false;
      break;
    }
  }
  if (identity) return;

  const std::int64_t dim = s.dim();
  CVector out(dim);
  for (std::int64_t idx = 0; idx < dim; ++idx) {
    std::int64_t nidx = 0;
    for (int i = 0; i < n; ++i) nidx |= ((idx >> i) & 1) << perm[i];
    out(nidx) = s.amps(idx);
  }
  s.amps.swap(out);
}

/// Composition helper: the permutation equivalent to applying `first` then
/// `second`.
inline std::vector<int> compose_permutations(std::span<const int> first,
                                             std::span<const int> second) {
  std::vector<int> out(first.size());
  for (std::size_t i = 0; i < first.size(); ++i) out[i] = second[first[i]];
  return out;
}

}  // namespace qvb
