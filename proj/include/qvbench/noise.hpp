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
#include <utility>
#include <variant>
#include <vector>

#include "qvbench/analytic.hpp"
#include "qvbench/circuit.hpp"
#include "qvbench/error.hpp"
#include "qvbench/randmat.hpp"

namespace qvb {

// ---------------------------------------------------------------------------
// Noise model specifications
// ---------------------------------------------------------------------------

/// Coherent kick e^{i alpha H} after every two-qubit gate, H drawn fresh from
/// the 4-dimensional Gaussian unitary ensemble.
struct GueTwoQubit {
  double alpha = 0.0;
};

/// Same kick but acting jointly on the gate pair and a private env_dim-state
/// environment which is discarded afterwards.
struct DissipativeGue {
  double alpha = 0.0;
  int env_dim = 1;
};

/// Every adjacent swap in the routed permutation becomes S^beta with
/// beta ~ Normal(1, sigma^2).
struct FaultySwap {
  double sigma = 0.0;
};

/// Channel-equivalent form of FaultySwap: each routed swap is dropped with
/// probability p.
struct SwapOmission {
  double p = 0.0;
};

/// Per qubit, per layer: replace the marginal by the maximally mixed state
/// with probability epsilon (realized as a uniform Pauli with prob 3eps/4).
struct Depolarizing {
  double epsilon = 0.0;
};

/// diag(1, e^{i lambda}) on every qubit after the first layer only.
struct Dephasing {
  double lambda = 0.0;
};

/// Classical readout errors: independent per-bit flip probabilities. A
/// single entry broadcasts to all bits.
struct MeasurementFlip {
  std::vector<double> flip_probs;
};

struct NoiseSpec;

struct Composite {
  std::vector<NoiseSpec> parts;
};

/// Multiplies every rate-like parameter of the wrapped spec (alpha, sigma,
/// p, epsilon, dephasing phase, flip probabilities) by a common factor.
struct Scale {
  double factor = 1.0;
  std::vector<NoiseSpec> inner;  // exactly one element
};

struct NoiseSpec {
  std::variant<std::monostate, GueTwoQubit, DissipativeGue, FaultySwap,
               SwapOmission, Depolarizing, Dephasing, MeasurementFlip,
               Composite, Scale>
      v;

  static NoiseSpec ideal() { return {}; }
  static NoiseSpec gue(double alpha) { return {GueTwoQubit{alpha}}; }
  static NoiseSpec dissipative(double alpha, int env_dim) {
    return {DissipativeGue{alpha, env_dim}};
  }
  static NoiseSpec faulty_swap(double sigma) { return {FaultySwap{sigma}}; }
  static NoiseSpec swap_omission(double p) { return {SwapOmission{p}}; }
  static NoiseSpec depolarizing(double eps) { return {Depolarizing{eps}}; }
  static NoiseSpec dephasing(double lambda) { return {Dephasing{lambda}}; }
  static NoiseSpec measurement_flip(double q) {
    return {MeasurementFlip{{q}}};
  }
  static NoiseSpec composite(std::vector<NoiseSpec> parts) {
    Composite c;
    c.parts = std::move(parts);
    return {std::move(c)};
  }
  static NoiseSpec scaled(double factor, NoiseSpec inner) {
    Scale s;
    s.factor = factor;
    s.inner.push_back(std::move(inner));
    return {std::move(s)};
  }
};

/// Flattened view of a spec tree with all scale factors applied. At most one
/// entry per noise family; duplicates are rejected.
struct ResolvedNoise {
  double alpha = 0.0;
  int env_dim = 1;
  enum class SwapModel { none, faulty, omission };
  SwapModel swap_model = SwapModel::none;
  double sigma = 0.0;
  double omit_p = 0.0;
  double epsilon = 0.0;
  bool has_dephasing = false;
  double dephase_lambda = 0.0;
  std::vector<double> meas_flip;

  bool has_gate_noise() const { return alpha > 0.0; }
  bool has_swap_noise() const {
    return (swap_model == SwapModel::faulty && sigma > 0.0) ||
           (swap_model == SwapModel::omission && omit_p > 0.0);
  }
  bool ideal() const {
    return !has_gate_noise() && !has_swap_noise() && epsilon == 0.0 &&
           (!has_dephasing || dephase_lambda == 0.0) && meas_flip.empty();
  }
};

namespace detail {

inline void require_prob(double p, const char* what) {
  if (!(p >= 0.0 && p <= 1.0))
    throw Error(ErrorCode::invalid_argument, std::string(what) + " outside [0,1]");
}

inline void resolve_into(const NoiseSpec& spec, double factor, ResolvedNoise& out,
                         bool& seen_gue, bool& seen_swap, bool& seen_depol,
                         bool& seen_deph, bool& seen_meas) {
  if (factor < 0.0)
    throw Error(ErrorCode::invalid_argument, "scale factor must be non-negative");
  std::visit(
      [&](const auto& node) {
        using T = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
        } else if constexpr (std::is_same_v<T, GueTwoQubit>) {
          if (seen_gue)
            throw Error(ErrorCode::invalid_argument,
                        "invalid-combination: two gate-noise entries");
          seen_gue = true;
          if (node.alpha < 0.0)
            throw Error(ErrorCode::invalid_argument, "alpha must be non-negative");
          out.alpha = node.alpha * factor;
          out.env_dim = 1;
        } else if constexpr (std::is_same_v<T, DissipativeGue>) {
          if (seen_gue)
            throw Error(ErrorCode::invalid_argument,
                        "invalid-combination: two gate-noise entries");
          seen_gue = true;
          if (node.alpha < 0.0)
            throw Error(ErrorCode::invalid_argument, "alpha must be non-negative");
          if (node.env_dim < 1)
            throw Error(ErrorCode::invalid_argument, "environment dimension < 1");
          out.alpha = node.alpha * factor;
          out.env_dim = node.env_dim;
        } else if constexpr (std::is_same_v<T, FaultySwap>) {
          if (seen_swap)
            throw Error(ErrorCode::invalid_argument,
                        "invalid-combination: two swap-noise entries");
          seen_swap = true;
          if (node.sigma < 0.0)
            throw Error(ErrorCode::invalid_argument, "sigma must be non-negative");
          out.swap_model = ResolvedNoise::SwapModel::faulty;
          out.sigma = node.sigma * factor;
        } else if constexpr (std::is_same_v<T, SwapOmission>) {
          if (seen_swap)
            throw Error(ErrorCode::invalid_argument,
                        "invalid-combination: two swap-noise entries");
          seen_swap = true;
          require_prob(node.p, "swap omission probability");
          out.swap_model = ResolvedNoise::SwapModel::omission;
          out.omit_p = node.p * factor;
          require_prob(out.omit_p, "scaled swap omission probability");
        } else if constexpr (std::is_same_v<T, Depolarizing>) {
          if (seen_depol)
            throw Error(ErrorCode::invalid_argument,
                        "invalid-combination: two depolarizing entries");
          seen_depol = true;
          require_prob(node.epsilon, "depolarizing rate");
          out.epsilon = node.epsilon * factor;
          require_prob(out.epsilon, "scaled depolarizing rate");
        } else if constexpr (std::is_same_v<T, Dephasing>) {
          if (seen_deph)
            throw Error(ErrorCode::invalid_argument,
                        "invalid-combination: two dephasing entries");
          seen_deph = true;
          out.has_dephasing = true;
          out.dephase_lambda = node.lambda * factor;
        } else if constexpr (std::is_same_v<T, MeasurementFlip>) {
          if (seen_meas)
            throw Error(ErrorCode::invalid_argument,
                        "invalid-combination: two measurement entries");
          seen_meas = true;
          out.meas_flip = node.flip_probs;
          for (double& q : out.meas_flip) {
            require_prob(q, "flip probability");
            q *= factor;
            require_prob(q, "scaled flip probability");
          }
        } else if constexpr (std::is_same_v<T, Composite>) {
          for (const NoiseSpec& part : node.parts)
            resolve_into(part, factor, out, seen_gue, seen_swap, seen_depol,
                         seen_deph, seen_meas);
        } else if constexpr (std::is_same_v<T, Scale>) {
          if (node.inner.size() != 1)
            throw Error(ErrorCode::invalid_argument,
                        "scale wraps exactly one spec");
          resolve_into(node.inner.front(), factor * node.factor, out, seen_gue,
                       seen_swap, seen_depol, seen_deph, seen_meas);
        }
      },
      spec.v);
}

}  // namespace detail

inline ResolvedNoise resolve(const NoiseSpec& spec) {
  ResolvedNoise out;
  bool a = false, b = false, c = false, d = false, e = false;
  detail::resolve_into(spec, 1.0, out, a, b, c, d, e);
  return out;
}

// ---------------------------------------------------------------------------
// Permutation routing
// ---------------------------------------------------------------------------

using SwapSequence = std::vector<std::pair<int, int>>;

/// Adjacent-transposition realization of a permutation on a line via
/// odd-even transposition sort. Applying the returned swaps in order moves
/// the qubit at position i to position perm[i]; the sequence length equals
/// the inversion count of perm (at most n(n-1)/2).
inline SwapSequence decompose_permutation(std::span<const int> perm) {
  if (!is_permutation(perm))
    throw Error(ErrorCode::invalid_argument, "invalid-permutation");
  const int n = static_cast<int>(perm.size());
  std::vector<int> dest(perm.begin(), perm.end());
  SwapSequence swaps;
  bool moved = true;
  for (int pass = 0; pass < n && moved; ++pass) {
    moved = false;
    for (int parity = 0; parity < 2; ++parity) {
      for (int j = parity; j + 1 < n; j += 2) {
        if (dest[j] > dest[j + 1]) {
          std::swap(dest[j], dest[j + 1]);
          swaps.emplace_back(j, j + 1);
          moved = true;
        }
      }
    }
  }
  return swaps;
}

/// Permutation realized by applying `swaps` in order.
inline std::vector<int> permutation_of_swaps(int n, const SwapSequence& swaps) {
  // occupant[pos] = original position of the content now at pos
  std::vector<int> occupant(n);
  for (int i = 0; i < n; ++i) occupant[i] = i;
  for (const auto& [j, k] : swaps) std::swap(occupant[j], occupant[k]);
  std::vector<int> perm(n);
  for (int pos = 0; pos < n; ++pos) perm[occupant[pos]] = pos;
  return perm;
}

inline double sigma_to_p(double sigma) {
  if (sigma < 0.0)
    throw Error(ErrorCode::invalid_argument, "sigma must be non-negative");
  return 0.5 * (1.0 - std::exp(-0.5 * M_PI * M_PI * sigma * sigma));
}

// ---------------------------------------------------------------------------
// Trajectory realization
// ---------------------------------------------------------------------------

struct NoisyOp {
  enum class Kind { permute, gate2, gate1, dissipative };
  Kind kind = Kind::gate2;
  int q1 = 0;
  int q2 = -1;
  int env_dim = 1;
  int env_state = 0;
  CMatrix matrix;          // gate2: 4x4, gate1: 2x2, dissipative: 4*env_dim
  std::vector<int> perm;   // permute only
};

/// One concrete noise realization of a circuit: a flat op list plus the
/// readout flip probabilities, ready for statevector playback.
struct NoisyInstance {
  int n_qubits = 0;
  std::vector<NoisyOp> ops;
  std::vector<double> meas_flip;  // empty, one broadcast entry, or per qubit
};

inline NoisyInstance realize_trajectory(const Circuit& c, const NoiseSpec& spec,
                                        RngStream& rng) {
  const ResolvedNoise noise = resolve(spec);
  if (!noise.meas_flip.empty() && noise.meas_flip.size() != 1 &&
      noise.meas_flip.size() != static_cast<std::size_t>(c.n_qubits))
    throw Error(ErrorCode::invalid_argument,
                "invalid-combination: flip vector does not match qubit count");

  NoisyInstance inst;
  inst.n_qubits = c.n_qubits;
  inst.meas_flip = noise.meas_flip;

  const CMatrix x2 = pauli_x();
  CMatrix y2 = CMatrix::Zero(2, 2);
  y2(0, 1) = Complex(0.0, -1.0);
  y2(1, 0) = Complex(0.0, 1.0);
  CMatrix z2 = CMatrix::Identity(2, 2);
  z2(1, 1) = -1.0;

  for (int q : c.meta.initial_x) {
    NoisyOp op;
    op.kind = NoisyOp::Kind::gate1;
    op.q1 = q;
    op.matrix = x2;
    inst.ops.push_back(std::move(op));
  }

  for (int t = 0; t < c.n_layers; ++t) {
    const Layer& layer = c.layers[t];

    const bool faulty = noise.swap_model == ResolvedNoise::SwapModel::faulty &&
                        noise.sigma > 0.0;
    const bool omission =
        noise.swap_model == ResolvedNoise::SwapModel::omission && noise.omit_p > 0.0;
    if (faulty) {
      for (const auto& [j, k] : decompose_permutation(layer.perm)) {
        NoisyOp op;
        op.kind = NoisyOp::Kind::gate2;
        op.q1 = j;
        op.q2 = k;
        op.matrix = fractional_swap(rng.gaussian(1.0, noise.sigma));
        inst.ops.push_back(std::move(op));
      }
    } else if (omission) {
      // Kept swaps are exact, so the realized layer shuffle is itself a
      // permutation; compose it instead of emitting individual swaps.
      std::vector<int> occupant(c.n_qubits);
      for (int i = 0; i < c.n_qubits; ++i) occupant[i] = i;
      for (const auto& [j, k] : decompose_permutation(layer.perm))
        if (!rng.bernoulli(noise.omit_p)) std::swap(occupant[j], occupant[k]);
      NoisyOp op;
      op.kind = NoisyOp::Kind::permute;
      op.perm.resize(c.n_qubits);
      for (int pos = 0; pos < c.n_qubits; ++pos) op.perm[occupant[pos]] = pos;
      inst.ops.push_back(std::move(op));
    } else {
      NoisyOp op;
      op.kind = NoisyOp::Kind::permute;
      op.perm = layer.perm;
      inst.ops.push_back(std::move(op));
    }

    for (const GatePlacement& g : layer.placements) {
      NoisyOp op;
      op.kind = g.is_pair() ? NoisyOp::Kind::gate2 : NoisyOp::Kind::gate1;
      op.q1 = g.q1;
      op.q2 = g.q2;
      op.matrix = g.gate;
      inst.ops.push_back(std::move(op));

      if (g.is_pair() && noise.has_gate_noise()) {
        if (noise.env_dim > 1) {
          NoisyOp kick;
          kick.kind = NoisyOp::Kind::dissipative;
          kick.q1 = g.q1;
          kick.q2 = g.q2;
          kick.env_dim = noise.env_dim;
          kick.env_state = static_cast<int>(rng.uniform_index(noise.env_dim));
          kick.matrix =
              matrix_exp_unitary(sample_gue(4 * noise.env_dim, rng), noise.alpha);
          inst.ops.push_back(std::move(kick));
        } else {
          NoisyOp kick;
          kick.kind = NoisyOp::Kind::gate2;
          kick.q1 = g.q1;
          kick.q2 = g.q2;
          kick.matrix = matrix_exp_unitary(sample_gue(4, rng), noise.alpha);
          inst.ops.push_back(std::move(kick));
        }
      }
    }

    if (noise.has_dephasing && noise.dephase_lambda != 0.0 && t == 0) {
      CMatrix zl = CMatrix::Identity(2, 2);
      zl(1, 1) = Complex(std::cos(noise.dephase_lambda),
                         std::sin(noise.dephase_lambda));
      for (int q = 0; q < c.n_qubits; ++q) {
        NoisyOp op;
        op.kind = NoisyOp::Kind::gate1;
        op.q1 = q;
        op.matrix = zl;
        inst.ops.push_back(std::move(op));
      }
    }

    if (noise.epsilon > 0.0) {
      for (int q = 0; q < c.n_qubits; ++q) {
        if (!rng.bernoulli(0.75 * noise.epsilon)) continue;
        NoisyOp op;
        op.kind = NoisyOp::Kind::gate1;
        op.q1 = q;
        switch (rng.uniform_index(3)) {
          case 0: op.matrix = x2; break;
          case 1: op.matrix = y2; break;
          default: op.matrix = z2; break;
        }
        inst.ops.push_back(std::move(op));
      }
    }
  }
  return inst;
}

// ---------------------------------------------------------------------------
// Doubled-space channel averages (Monte Carlo) and their closed forms
// ---------------------------------------------------------------------------

struct ChannelAverage {
  CMatrix mean;             // Monte-Carlo estimate of E[U ⊗ U*]
  Eigen::MatrixXd stderr_;  // per-element standard error
};

namespace detail {

template <typename Sampler>
ChannelAverage average_doubled_channel(int dim, int n_samples, Sampler&& sample) {
  if (n_samples < 1)
    throw Error(ErrorCode::invalid_argument, "need at least one sample");
  const int d2 = dim * dim;
  CMatrix sum = CMatrix::Zero(d2, d2);
  Eigen::MatrixXd sum_sq = Eigen::MatrixXd::Zero(d2, d2);
  for (int s = 0; s < n_samples; ++s) {
    CMatrix u = sample();
    CMatrix doubled = kron(u, u.conjugate());
    sum += doubled;
    sum_sq += doubled.cwiseAbs2();
  }
  ChannelAverage out;
  out.mean = sum / double(n_samples);
  Eigen::MatrixXd var = sum_sq / double(n_samples) - out.mean.cwiseAbs2();
  out.stderr_ = (var.cwiseMax(0.0) / double(n_samples)).cwiseSqrt();
  return out;
}

}  // namespace detail

inline ChannelAverage average_gue_channel_stats(double alpha, int n_samples,
                                                RngStream& rng) {
  return detail::average_doubled_channel(4, n_samples, [&] {
    return matrix_exp_unitary(sample_gue(4, rng), alpha);
  });
}

inline CMatrix average_gue_channel(double alpha, int n_samples, RngStream& rng) {
  return average_gue_channel_stats(alpha, n_samples, rng).mean;
}

inline ChannelAverage average_faulty_swap_channel_stats(double sigma,
                                                        int n_samples,
                                                        RngStream& rng) {
  return detail::average_doubled_channel(4, n_samples, [&] {
    return fractional_swap(rng.gaussian(1.0, sigma));
  });
}

inline CMatrix average_faulty_swap_channel(double sigma, int n_samples,
                                           RngStream& rng) {
  return average_faulty_swap_channel_stats(sigma, n_samples, rng).mean;
}

/// Closed form a·I + b·|+><+| of the doubled-space average E[U ⊗ U*] of the
/// Gaussian kick on the gate pair, |+> the unnormalized maximally entangled
/// state. With env_dim > 1 this is the environment-traced channel, still a
/// 16x16 operator on the doubled pair space.
inline CMatrix gue_channel_theory(double alpha, int env_dim = 1) {
  CMatrix out = CMatrix::Identity(16, 16) * gue_channel_a(alpha, env_dim);
  CVector plus = CVector::Zero(16);
  for (int i = 0; i < 4; ++i) plus(i * 4 + i) = 1.0;
  out += gue_channel_b(alpha, env_dim) * plus * plus.adjoint();
  return out;
}

/// Closed form (1-p)·S⊗S + p·I of the beta-averaged fractional swap, with
/// p = sigma_to_p(sigma). Provable from the ±1 spectrum of SWAP.
inline CMatrix faulty_swap_channel_theory(double sigma) {
  const double p = sigma_to_p(sigma);
  const CMatrix s = swap_gate();
  return (1.0 - p) * kron(s, s) + p * CMatrix::Identity(16, 16);
}

}  // namespace qvb
