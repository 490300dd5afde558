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

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qvbench/error.hpp"
#include "qvbench/randmat.hpp"
#include "qvbench/statevector.hpp"

namespace qvb {

enum class GateTag { generic, parity, diagonal_zz, single, pauli_x };

enum class CircuitKind { standard, parity, double_parity, hidden_parity, m_parity };

inline std::string to_string(CircuitKind k) {
  switch (k) {
    case CircuitKind::standard: return "standard";
    case CircuitKind::parity: return "parity";
    case CircuitKind::double_parity: return "double-parity";
    case CircuitKind::hidden_parity: return "hidden-parity";
    case CircuitKind::m_parity: return "m-parity";
  }
  return "?";
}

inline std::string to_string(GateTag t) {
  switch (t) {
    case GateTag::generic: return "generic";
    case GateTag::parity: return "parity";
    case GateTag::diagonal_zz: return "diagonal-zz";
    case GateTag::single: return "single";
    case GateTag::pauli_x: return "pauli-x";
  }
  return "?";
}

/// One placed gate. Pair gates use (q1, q2) with q1 the low bit of the gate
/// matrix index; single-qubit gates use q1 only and q2 = -1.
struct GatePlacement {
  int q1 = 0;
  int q2 = -1;
  CMatrix gate;
  GateTag tag = GateTag::generic;

  bool is_pair() const { return q2 >= 0; }
};

/// One circuit layer: a qubit permutation followed by gates on disjoint
/// qubits.
struct Layer {
  std::vector<int> perm;
  std::vector<GatePlacement> placements;
};

struct CircuitMetadata {
  // double-parity: colors[t][q] in {0,1}; t = 0 is the initial split, and
  // colors[t] is the coloring in force for layer t's gates (after that
  // layer's permutation).
  std::vector<std::vector<int>> colors;
  int parity_a = 0;
  int parity_b = 0;
  // m-parity: subsets[t] is the sorted tracked subset after layer t's
  // permutation (subsets[0] before the circuit); p0 is the parity of the
  // initial X insertions.
  std::vector<std::vector<int>> subsets;
  int p0 = 0;
  std::vector<int> initial_x;
  // parity / hidden-parity: target global parity (X insertions flip it).
  int global_parity = 0;
  // hidden-parity: which structured kind the dressing hides.
  CircuitKind base_kind = CircuitKind::parity;
};

struct Circuit {
  int n_qubits = 0;
  int n_layers = 0;
  CircuitKind kind = CircuitKind::standard;
  std::uint64_t seed = 0;
  std::vector<Layer> layers;
  CircuitMetadata meta;
};

// ---------------------------------------------------------------------------
// Heavy output subspace predicates
// ---------------------------------------------------------------------------

class HeavySubspace {
 public:
  enum class Variant { explicit_set, global_parity, double_parity, subset_parity };

  static HeavySubspace make_explicit(int n, std::vector<std::uint8_t> member) {
    HeavySubspace h;
    h.variant_ = Variant::explicit_set;
    h.n_ = n;
    h.member_ = std::move(member);
    return h;
  }

  static HeavySubspace make_global_parity(int n, int parity) {
    HeavySubspace h;
    h.variant_ = Variant::global_parity;
    h.n_ = n;
    h.parity_ = parity & 1;
    return h;
  }

  static HeavySubspace make_double_parity(int n, std::uint64_t mask_a, int pa, int pb) {
    HeavySubspace h;
    h.variant_ = Variant::double_parity;
    h.n_ = n;
    h.mask_ = mask_a;
    h.parity_ = pa & 1;
    h.parity_b_ = pb & 1;
    return h;
  }

  static HeavySubspace make_subset_parity(int n, std::uint64_t mask, int p0) {
    HeavySubspace h;
    h.variant_ = Variant::subset_parity;
    h.n_ = n;
    h.mask_ = mask;
    h.parity_ = p0 & 1;
    return h;
  }

  Variant variant() const { return variant_; }
  int n_qubits() const { return n_; }

  bool contains(std::uint64_t x) const {
    switch (variant_) {
      case Variant::explicit_set:
        return member_[x] != 0;
      case Variant::global_parity:
        return (__builtin_popcountll(x) & 1) == parity_;
      case Variant::double_parity: {
        const std::uint64_t all = (std::uint64_t(1) << n_) - 1;
        const int pa = __builtin_popcountll(x & mask_) & 1;
        const int pb = __builtin_popcountll(x & (all & ~mask_)) & 1;
        return pa == parity_ && pb == parity_b_;
      }
      case Variant::subset_parity:
        return (__builtin_popcountll(x & mask_) & 1) == parity_;
    }
    return false;
  }

  std::uint64_t count_members() const {
    std::uint64_t c = 0;
    for (std::uint64_t x = 0; x < (std::uint64_t(1) << n_); ++x)
      if (contains(x)) ++c;
    return c;
  }

 private:
  Variant variant_ = Variant::global_parity;
  int n_ = 0;
  std::vector<std::uint8_t> member_;
  std::uint64_t mask_ = 0;
  int parity_ = 0;
  int parity_b_ = 0;
};

/// Median split of ideal output probabilities: a string is heavy when its
/// probability is at or above the mean of the two middle order statistics.
/// Ties keep every tied string heavy, so the set can exceed half the space.
inline HeavySubspace median_heavy_set(int n, std::span<const double> probs) {
  const std::size_t dim = std::size_t(1) << n;
  if (probs.size() != dim)
    throw Error(ErrorCode::invalid_argument, "probability vector size mismatch");
  std::vector<double> sorted(probs.begin(), probs.end());
  std::sort(sorted.begin(), sorted.end());
  const double median = 0.5 * (sorted[dim / 2 - 1] + sorted[dim / 2]);
  std::vector<std::uint8_t> member(dim, 0);
  for (std::size_t x = 0; x < dim; ++x) member[x] = probs[x] >= median ? 1 : 0;
  return HeavySubspace::make_explicit(n, std::move(member));
}

inline double heavy_mass(std::span<const double> probs, const HeavySubspace& hs) {
  double m = 0.0;
  for (std::size_t x = 0; x < probs.size(); ++x)
    if (hs.contains(x)) m += probs[x];
  return m;
}

// ---------------------------------------------------------------------------
// Tracking helpers
// ---------------------------------------------------------------------------

/// Coloring after a permutation: the qubit at position i moves to perm[i].
inline std::vector<int> advance_colors(std::span<const int> colors,
                                       std::span<const int> perm) {
  std::vector<int> out(colors.size());
  for (std::size_t i = 0; i < colors.size(); ++i) out[perm[i]] = colors[i];
  return out;
}

inline std::vector<int> advance_subset(std::span<const int> subset,
                                       std::span<const int> perm) {
  std::vector<int> out;
  out.reserve(subset.size());
  for (int q : subset) out.push_back(perm[q]);
  std::sort(out.begin(), out.end());
  return out;
}

inline std::uint64_t subset_mask(std::span<const int> subset) {
  std::uint64_t m = 0;
  for (int q : subset) m |= std::uint64_t(1) << q;
  return m;
}

/// Recompute the per-layer color sequence from the stored permutations.
inline std::vector<std::vector<int>> recompute_colors(const Circuit& c) {
  if (c.meta.colors.empty())
    throw Error(ErrorCode::invalid_argument, "circuit has no color metadata");
  std::vector<std::vector<int>> colors;
  colors.push_back(c.meta.colors.front());
  for (const Layer& layer : c.layers)
    colors.push_back(advance_colors(colors.back(), layer.perm));
  return colors;
}

inline std::vector<std::vector<int>> recompute_subsets(const Circuit& c) {
  if (c.meta.subsets.empty())
    throw Error(ErrorCode::invalid_argument, "circuit has no subset metadata");
  std::vector<std::vector<int>> subsets;
  subsets.push_back(c.meta.subsets.front());
  for (const Layer& layer : c.layers)
    subsets.push_back(advance_subset(subsets.back(), layer.perm));
  return subsets;
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

inline std::vector<int> sample_permutation(int n, RngStream& rng) {
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.uniform_index(std::uint64_t(i) + 1));
    std::swap(perm[i], perm[j]);
  }
  return perm;
}

namespace detail {

inline void require_size(bool ok, const char* what) {
  if (!ok) throw Error(ErrorCode::invalid_argument, what);
}

/// Block gate controlled on one slot of the pair: |0><0| ⊗ A + |1><1| ⊗ B
/// with Haar A, B acting on the other slot. `control_low` selects whether
/// the controlling qubit is the low bit of the gate index.
inline CMatrix sample_controlled_mix(bool control_low, RngStream& rng) {
  CMatrix a = sample_haar_unitary(2, rng);
  CMatrix b = sample_haar_unitary(2, rng);
  CMatrix u = CMatrix::Zero(4, 4);
  for (int v = 0; v < 2; ++v) {
    const CMatrix& blk = v == 0 ? a : b;
    for (int r = 0; r < 2; ++r)
      for (int s = 0; s < 2; ++s) {
        if (control_low) {
          u((r << 1) | v, (s << 1) | v) = blk(r, s);
        } else {
          u((v << 1) | r, (v << 1) | s) = blk(r, s);
        }
      }
  }
  return u;
}

inline CMatrix sample_diagonal_single(RngStream& rng) {
  CMatrix u = CMatrix::Zero(2, 2);
  const double t0 = rng.uniform(0.0, 2.0 * M_PI);
  const double t1 = rng.uniform(0.0, 2.0 * M_PI);
  u(0, 0) = Complex(std::cos(t0), std::sin(t0));
  u(1, 1) = Complex(std::cos(t1), std::sin(t1));
  return u;
}

}  // namespace detail

/// Square-style random circuit: each layer is a uniform permutation followed
/// by Haar 4x4 gates on adjacent index pairs. An odd trailing qubit idles.
inline Circuit generate_standard(int n, int t, RngStream& rng) {
  detail::require_size(n >= 2, "invalid-size: need at least 2 qubits");
  detail::require_size(t >= 0, "invalid-size: negative layer count");
  Circuit c;
  c.n_qubits = n;
  c.n_layers = t;
  c.kind = CircuitKind::standard;
  for (int layer = 0; layer < t; ++layer) {
    Layer l;
    l.perm = sample_permutation(n, rng);
    for (int k = 0; k + 1 < n; k += 2) {
      GatePlacement g;
      g.q1 = k;
      g.q2 = k + 1;
      g.gate = sample_haar_unitary(4, rng);
      g.tag = GateTag::generic;
      l.placements.push_back(std::move(g));
    }
    c.layers.push_back(std::move(l));
  }
  return c;
}

/// As generate_standard but with parity-conserving pair gates, so the heavy
/// subspace is the even-parity half of the basis, known without simulation.
inline Circuit generate_parity(int n, int t, RngStream& rng) {
  detail::require_size(n >= 2, "invalid-size: need at least 2 qubits");
  detail::require_size(t >= 0, "invalid-size: negative layer count");
  Circuit c;
  c.n_qubits = n;
  c.n_layers = t;
  c.kind = CircuitKind::parity;
  for (int layer = 0; layer < t; ++layer) {
    Layer l;
    l.perm = sample_permutation(n, rng);
    for (int k = 0; k + 1 < n; k += 2) {
      GatePlacement g;
      g.q1 = k;
      g.q2 = k + 1;
      g.gate = sample_parity_gate(rng);
      g.tag = GateTag::parity;
      l.placements.push_back(std::move(g));
    }
    c.layers.push_back(std::move(l));
  }
  return c;
}

/// Circuit conserving parity separately on two tracked qubit subsets of size
/// n/2. Same-color pairs interact through parity gates; cross-color pairs
/// only through diagonal ZZ phases, which cannot move weight between the
/// subset-parity sectors.
inline Circuit generate_double_parity(int n, int t, RngStream& rng) {
  detail::require_size(n >= 4 && n % 2 == 0, "invalid-size: need even n >= 4");
  detail::require_size(t >= 0, "invalid-size: negative layer count");
  Circuit c;
  c.n_qubits = n;
  c.n_layers = t;
  c.kind = CircuitKind::double_parity;

  std::vector<int> order = sample_permutation(n, rng);
  std::vector<int> colors(n, 1);
  for (int i = 0; i < n / 2; ++i) colors[order[i]] = 0;
  c.meta.colors.push_back(colors);

  for (int layer = 0; layer < t; ++layer) {
    Layer l;
    l.perm = sample_permutation(n, rng);
    colors = advance_colors(colors, l.perm);
    c.meta.colors.push_back(colors);
    for (int k = 0; k + 1 < n; k += 2) {
      GatePlacement g;
      g.q1 = k;
      g.q2 = k + 1;
      if (colors[k] == colors[k + 1]) {
        g.gate = sample_parity_gate(rng);
        g.tag = GateTag::parity;
      } else {
        g.gate = diagonal_zz_gate(rng.uniform(0.0, 2.0 * M_PI));
        g.tag = GateTag::diagonal_zz;
      }
      l.placements.push_back(std::move(g));
    }
    c.layers.push_back(std::move(l));
  }
  return c;
}

/// Deterministic-structure variant of generate_m_parity: the tracked subset,
/// X insertions and permutations are supplied, only the gates are drawn.
inline Circuit build_m_parity(int n, int t, std::vector<int> subset0,
                              std::vector<int> x_qubits,
                              std::vector<std::vector<int>> perms,
                              RngStream& rng) {
  detail::require_size(n >= 1, "invalid-size");
  detail::require_size(static_cast<int>(perms.size()) == t,
                       "invalid-size: permutation count != layer count");
  const int m = static_cast<int>(subset0.size());
  detail::require_size(m >= 1 && m <= n, "invalid-size: m out of range");

  Circuit c;
  c.n_qubits = n;
  c.n_layers = t;
  c.kind = CircuitKind::m_parity;
  std::sort(subset0.begin(), subset0.end());
  c.meta.subsets.push_back(subset0);
  c.meta.initial_x = x_qubits;
  c.meta.p0 = static_cast<int>(x_qubits.size()) & 1;

  std::vector<int> subset = subset0;
  for (int layer = 0; layer < t; ++layer) {
    Layer l;
    l.perm = perms[layer];
    if (static_cast<int>(l.perm.size()) != n || !is_permutation(l.perm))
      throw Error(ErrorCode::invalid_argument, "invalid-permutation");
    subset = advance_subset(subset, l.perm);
    c.meta.subsets.push_back(subset);
    const std::uint64_t mask = subset_mask(subset);

    for (int k = 0; k + 1 < n; k += 2) {
      const bool in1 = (mask >> k) & 1;
      const bool in2 = (mask >> (k + 1)) & 1;
      GatePlacement g;
      g.q1 = k;
      g.q2 = k + 1;
      if (in1 && in2) {
        g.gate = sample_parity_gate(rng);
        g.tag = GateTag::parity;
      } else if (in1 != in2) {
        g.gate = detail::sample_controlled_mix(/*control_low=*/in1, rng);
        g.tag = GateTag::generic;
      } else {
        g.gate = sample_haar_unitary(4, rng);
        g.tag = GateTag::generic;
      }
      l.placements.push_back(std::move(g));
    }
    if (n % 2 == 1) {
      GatePlacement g;
      g.q1 = n - 1;
      g.q2 = -1;
      g.tag = GateTag::single;
      if ((mask >> (n - 1)) & 1) {
        g.gate = detail::sample_diagonal_single(rng);
      } else {
        g.gate = sample_haar_unitary(2, rng);
      }
      l.placements.push_back(std::move(g));
    }
    c.layers.push_back(std::move(l));
  }
  return c;
}

/// Circuit conserving parity on a tracked subset of m qubits, used by the
/// heavy-output estimators. X gates are inserted up front on tracked qubits
/// (each with probability 1/2) and their count parity fixes the heavy
/// sector.
inline Circuit generate_m_parity(int n, int t, int m, RngStream& rng) {
  detail::require_size(n >= 2, "invalid-size: need at least 2 qubits");
  detail::require_size(m >= 1 && m <= n, "invalid-size: m out of range");
  std::vector<int> order = sample_permutation(n, rng);
  std::vector<int> subset0(order.begin(), order.begin() + m);
  std::sort(subset0.begin(), subset0.end());
  std::vector<int> x_qubits;
  for (int q : subset0)
    if (rng.bernoulli(0.5)) x_qubits.push_back(q);
  std::vector<std::vector<int>> perms;
  perms.reserve(t);
  for (int layer = 0; layer < t; ++layer)
    perms.push_back(sample_permutation(n, rng));
  return build_m_parity(n, t, std::move(subset0), std::move(x_qubits),
                        std::move(perms), rng);
}

/// Rewrites a parity or double-parity circuit so that no individual gate is
/// parity-preserving while the whole circuit still is. Every pair gate gains
/// fresh single-qubit dressings whose inverses are folded into the next gate
/// that touches the same wire; final-layer dressings cancel on the spot.
/// With insert_x, each dressed wire may also pick up a Pauli X (probability
/// 1/2), and the accumulated flips are recorded in the heavy predicate.
inline Circuit dress_hidden_parity(const Circuit& c, RngStream& rng,
                                   bool insert_x = false) {
  if (c.kind != CircuitKind::parity && c.kind != CircuitKind::double_parity)
    throw Error(ErrorCode::invalid_argument,
                "invalid-kind: can only dress parity or double-parity circuits");
  Circuit out = c;
  out.kind = CircuitKind::hidden_parity;
  out.meta.base_kind = c.kind;

  const int n = c.n_qubits;
  const CMatrix id2 = CMatrix::Identity(2, 2);
  const CMatrix x2 = pauli_x();
  std::vector<CMatrix> pending(n, id2);
  std::vector<char> has_pending(n, 0);
  int flips_a = 0;
  int flips_b = 0;

  for (int t = 0; t < c.n_layers; ++t) {
    Layer& layer = out.layers[t];
    // Wires move first; pending post-gates ride along.
    std::vector<CMatrix> moved(n, id2);
    std::vector<char> moved_has(n, 0);
    for (int i = 0; i < n; ++i) {
      moved[layer.perm[i]] = std::move(pending[i]);
      moved_has[layer.perm[i]] = has_pending[i];
    }
    pending = std::move(moved);
    has_pending = std::move(moved_has);

    const bool last = t == c.n_layers - 1;
    for (GatePlacement& g : layer.placements) {
      if (!g.is_pair()) {
        // single-qubit placements absorb any pending cancellation
        if (has_pending[g.q1]) {
          g.gate = g.gate * pending[g.q1].adjoint();
          pending[g.q1] = id2;
          has_pending[g.q1] = 0;
        }
        continue;
      }
      CMatrix pre1 = has_pending[g.q1] ? CMatrix(pending[g.q1].adjoint()) : id2;
      CMatrix pre2 = has_pending[g.q2] ? CMatrix(pending[g.q2].adjoint()) : id2;
      pending[g.q1] = id2;
      pending[g.q2] = id2;
      has_pending[g.q1] = 0;
      has_pending[g.q2] = 0;

      CMatrix post1 = last ? id2 : sample_haar_unitary(2, rng);
      CMatrix post2 = last ? id2 : sample_haar_unitary(2, rng);
      if (!last) {
        pending[g.q1] = post1;
        pending[g.q2] = post2;
        has_pending[g.q1] = 1;
        has_pending[g.q2] = 1;
      }

      if (insert_x) {
        // The flip sits between the gate and its dressing: downstream the
        // dressing inverse still cancels and a bare X survives on the wire.
        for (int slot = 0; slot < 2; ++slot) {
          if (!rng.bernoulli(0.5)) continue;
          const int wire = slot == 0 ? g.q1 : g.q2;
          if (slot == 0) {
            post1 = post1 * x2;
          } else {
            post2 = post2 * x2;
          }
          if (c.kind == CircuitKind::parity) {
            flips_a ^= 1;
          } else {
            // colors[t + 1] is the coloring in force for this layer.
            if (c.meta.colors[t + 1][wire] == 0) {
              flips_a ^= 1;
            } else {
              flips_b ^= 1;
            }
          }
        }
      }

      g.gate = kron(post2, post1) * g.gate * kron(pre2, pre1);
      g.tag = GateTag::generic;
    }
    // Wires idle in the final layer still owe their cancellation.
    if (last) {
      for (int q = 0; q < n; ++q) {
        if (!has_pending[q]) continue;
        GatePlacement g;
        g.q1 = q;
        g.q2 = -1;
        g.gate = pending[q].adjoint();
        g.tag = GateTag::single;
        layer.placements.push_back(std::move(g));
        has_pending[q] = 0;
      }
    }
  }

  if (c.kind == CircuitKind::parity) {
    out.meta.global_parity = (c.meta.global_parity + flips_a) & 1;
  } else {
    out.meta.parity_a = (c.meta.parity_a + flips_a) & 1;
    out.meta.parity_b = (c.meta.parity_b + flips_b) & 1;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Heavy predicate dispatch
// ---------------------------------------------------------------------------

inline HeavySubspace structural_heavy_predicate(const Circuit& c) {
  const CircuitKind kind =
      c.kind == CircuitKind::hidden_parity ? c.meta.base_kind : c.kind;
  switch (kind) {
    case CircuitKind::parity:
      return HeavySubspace::make_global_parity(c.n_qubits, c.meta.global_parity);
    case CircuitKind::double_parity: {
      const std::vector<int>& final_colors = c.meta.colors.back();
      std::uint64_t mask_a = 0;
      for (int q = 0; q < c.n_qubits; ++q)
        if (final_colors[q] == 0) mask_a |= std::uint64_t(1) << q;
      return HeavySubspace::make_double_parity(c.n_qubits, mask_a,
                                               c.meta.parity_a, c.meta.parity_b);
    }
    case CircuitKind::m_parity:
      return HeavySubspace::make_subset_parity(
          c.n_qubits, subset_mask(c.meta.subsets.back()), c.meta.p0);
    default:
      throw Error(ErrorCode::invalid_argument,
                  "missing-input: standard circuits need ideal probabilities");
  }
}

/// Heavy predicate of a circuit. Standard circuits require the ideal output
/// distribution (median rule); every structured kind is decided from tracked
/// metadata alone.
inline HeavySubspace heavy_predicate(
    const Circuit& c, std::optional<std::span<const double>> ideal_probs = {}) {
  if (c.kind == CircuitKind::standard) {
    if (!ideal_probs)
      throw Error(ErrorCode::invalid_argument,
                  "missing-input: standard circuits need ideal probabilities");
    return median_heavy_set(c.n_qubits, *ideal_probs);
  }
  return structural_heavy_predicate(c);
}

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

inline void validate_circuit(const Circuit& c, double unitary_tol = 1e-8) {
  if (c.n_qubits < 1) throw Error(ErrorCode::parse, "invalid qubit count");
  if (static_cast<int>(c.layers.size()) != c.n_layers)
    throw Error(ErrorCode::parse, "layer count mismatch");
  for (const Layer& l : c.layers) {
    if (static_cast<int>(l.perm.size()) != c.n_qubits || !is_permutation(l.perm))
      throw Error(ErrorCode::parse, "invalid-permutation");
    std::vector<char> used(c.n_qubits, 0);
    for (const GatePlacement& g : l.placements) {
      const int arity = g.is_pair() ? 2 : 1;
      const int expected = arity == 2 ? 4 : 2;
      if (g.gate.rows() != expected || g.gate.cols() != expected)
        throw Error(ErrorCode::parse, "gate dimension does not match arity");
      if (g.q1 < 0 || g.q1 >= c.n_qubits || (g.is_pair() && g.q2 >= c.n_qubits))
        throw Error(ErrorCode::parse, "invalid-target");
      if (used[g.q1] || (g.is_pair() && used[g.q2]))
        throw Error(ErrorCode::parse, "placements overlap on a qubit");
      used[g.q1] = 1;
      if (g.is_pair()) used[g.q2] = 1;
      if (unitarity_defect(g.gate) > unitary_tol)
        throw Error(ErrorCode::parse, "unitarity-violation");
      if (g.tag == GateTag::parity) {
        static const int zero_positions[8][2] = {{0, 1}, {0, 2}, {1, 0}, {1, 3},
                                                 {2, 0}, {2, 3}, {3, 1}, {3, 2}};
        for (const auto& rc : zero_positions)
          if (std::abs(g.gate(rc[0], rc[1])) > 1e-12)
            throw Error(ErrorCode::parse, "parity tag on non-block gate");
      }
    }
  }
  if (c.kind == CircuitKind::parity) {
    for (const Layer& l : c.layers)
      for (const GatePlacement& g : l.placements)
        if (g.tag != GateTag::parity)
          throw Error(ErrorCode::parse, "parity circuit with non-parity gate tag");
  }
  if (c.kind == CircuitKind::double_parity ||
      (c.kind == CircuitKind::hidden_parity &&
       c.meta.base_kind == CircuitKind::double_parity)) {
    if (c.meta.colors.size() != c.layers.size() + 1)
      throw Error(ErrorCode::parse, "color metadata missing or truncated");
    if (recompute_colors(c) != c.meta.colors)
      throw Error(ErrorCode::parse, "color metadata inconsistent with permutations");
    if (c.kind == CircuitKind::double_parity) {
      for (std::size_t t = 0; t < c.layers.size(); ++t) {
        const std::vector<int>& colors = c.meta.colors[t + 1];
        for (const GatePlacement& g : c.layers[t].placements) {
          if (!g.is_pair()) continue;
          const bool cross = colors[g.q1] != colors[g.q2];
          if (cross && g.tag != GateTag::diagonal_zz)
            throw Error(ErrorCode::parse, "cross-color gate is not diagonal");
          if (!cross && g.tag != GateTag::parity)
            throw Error(ErrorCode::parse, "same-color gate is not parity tagged");
        }
      }
    }
  }
  if (c.kind == CircuitKind::m_parity) {
    if (c.meta.subsets.size() != c.layers.size() + 1)
      throw Error(ErrorCode::parse, "subset metadata missing or truncated");
    if (recompute_subsets(c) != c.meta.subsets)
      throw Error(ErrorCode::parse, "subset metadata inconsistent with permutations");
  }
}

}  // namespace qvb
