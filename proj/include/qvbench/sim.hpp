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
#include <cstdint>
#include <span>
#include <vector>

#include "qvbench/analytic.hpp"
#include "qvbench/circuit.hpp"
#include "qvbench/error.hpp"
#include "qvbench/noise.hpp"
#include "qvbench/statevector.hpp"

namespace qvb {

inline constexpr int kDefaultNCap = 14;

// ---------------------------------------------------------------------------
// Ideal simulation
// ---------------------------------------------------------------------------

inline StateVector simulate_ideal_state(const Circuit& c,
                                        int n_cap = kDefaultNCap) {
  if (c.n_qubits > n_cap)
    throw Error(ErrorCode::resource_limit,
                "resource-limit: circuit width exceeds the statevector cap");
  StateVector s = StateVector::zero(c.n_qubits);
  const CMatrix x2 = pauli_x();
  for (int q : c.meta.initial_x) apply_single(s, x2, q);
  for (const Layer& layer : c.layers) {
    apply_permutation(s, layer.perm);
    for (const GatePlacement& g : layer.placements) {
      if (g.is_pair()) {
        apply_gate(s, g.gate, g.q1, g.q2);
      } else {
        apply_single(s, g.gate, g.q1);
      }
    }
  }
  return s;
}

/// Exact ideal output distribution |<x|U|0...0>|^2.
inline std::vector<double> simulate_ideal(const Circuit& c,
                                          int n_cap = kDefaultNCap) {
  StateVector s = simulate_ideal_state(c, n_cap);
  std::vector<double> probs(s.dim());
  for (std::int64_t x = 0; x < s.dim(); ++x) probs[x] = std::norm(s.amps(x));
  return probs;
}

inline double total_variation(std::span<const double> a,
                              std::span<const double> b) {
  if (a.size() != b.size())
    throw Error(ErrorCode::invalid_argument, "distribution size mismatch");
  double tv = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) tv += std::abs(a[i] - b[i]);
  return 0.5 * tv;
}

// ---------------------------------------------------------------------------
// Trajectory playback
// ---------------------------------------------------------------------------

namespace detail {

/// Joint unitary on the gate pair and a fresh env_dim environment, followed
/// by a projective environment readout. The readout branch is Born-sampled,
/// which is the one renormalization point a trajectory is allowed.
inline void apply_dissipative(StateVector& s, const NoisyOp& op, RngStream& rng) {
  const std::int64_t dim = s.dim();
  const int env = op.env_dim;
  const std::int64_t m1 = std::int64_t(1) << op.q1;
  const std::int64_t m2 = std::int64_t(1) << op.q2;
  const int lo = op.q1 < op.q2 ? op.q1 : op.q2;
  const int hi = op.q1 < op.q2 ? op.q2 : op.q1;
  const std::int64_t lo_mask = (std::int64_t(1) << lo) - 1;
  const std::int64_t mid_mask = (std::int64_t(1) << (hi - 1)) - 1 - lo_mask;
  const std::int64_t count = dim >> 2;

  std::vector<Complex> extended(static_cast<std::size_t>(dim) * env,
                                Complex(0.0, 0.0));
  const std::int64_t offsets[4] = {0, m1, m2, m1 | m2};
  for (std::int64_t k = 0; k < count; ++k) {
    const std::int64_t base = (k & lo_mask) | ((k & mid_mask) << 1) |
                              ((k & ~(lo_mask | mid_mask)) << 2);
    for (int g_in = 0; g_in < 4; ++g_in) {
      const Complex amp = s.amps(base | offsets[g_in]);
      if (amp == Complex(0.0, 0.0)) continue;
      const int col = op.env_state * 4 + g_in;
      for (int e_out = 0; e_out < env; ++e_out) {
        for (int g_out = 0; g_out < 4; ++g_out) {
          const Complex u = op.matrix(e_out * 4 + g_out, col);
          if (u != Complex(0.0, 0.0))
            extended[std::size_t(e_out) * dim + (base | offsets[g_out])] +=
                u * amp;
        }
      }
    }
  }

  std::vector<double> weights(env, 0.0);
  for (int e = 0; e < env; ++e)
    for (std::int64_t x = 0; x < dim; ++x)
      weights[e] += std::norm(extended[std::size_t(e) * dim + x]);

  double u = rng.uniform();
  int picked = env - 1;
  double acc = 0.0;
  for (int e = 0; e < env; ++e) {
    acc += weights[e];
    if (u < acc) {
      picked = e;
      break;
    }
  }
  const double norm = std::sqrt(weights[picked]);
  for (std::int64_t x = 0; x < dim; ++x)
    s.amps(x) = extended[std::size_t(picked) * dim + x] / norm;
}

}  // namespace detail

/// Play back one noise realization. The final state is normalized to 1e-9
/// by construction; anything worse signals a non-unitary op.
inline StateVector simulate_instance(const NoisyInstance& inst, RngStream& rng) {
  StateVector s = StateVector::zero(inst.n_qubits);
  for (const NoisyOp& op : inst.ops) {
    switch (op.kind) {
      case NoisyOp::Kind::permute:
        apply_permutation(s, op.perm);
        break;
      case NoisyOp::Kind::gate2:
        apply_gate(s, op.matrix, op.q1, op.q2);
        break;
      case NoisyOp::Kind::gate1:
        apply_single(s, op.matrix, op.q1);
        break;
      case NoisyOp::Kind::dissipative:
        detail::apply_dissipative(s, op, rng);
        break;
    }
  }
  if (std::abs(s.norm_sq() - 1.0) > 1e-9)
    throw Error(ErrorCode::numeric, "trajectory lost normalization");
  return s;
}

// ---------------------------------------------------------------------------
// Outcome sampling
// ---------------------------------------------------------------------------

struct OutcomeHistogram {
  int n_qubits = 0;
  std::uint64_t n_shots = 0;
  std::vector<std::uint32_t> counts;  // indexed by basis string
};

enum class TrajectoryPolicy {
  per_shot,  // fresh noise realization for every shot
  shared,    // one realization reused for all shots
};

namespace detail {

inline std::uint64_t sample_index(std::span<const double> probs, RngStream& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  for (std::size_t x = 0; x < probs.size(); ++x) {
    acc += probs[x];
    if (u < acc) return x;
  }
  return probs.size() - 1;
}

inline std::uint64_t sample_index(const StateVector& s, RngStream& rng) {
  const double u = rng.uniform();
  double acc = 0.0;
  for (std::int64_t x = 0; x < s.dim(); ++x) {
    acc += std::norm(s.amps(x));
    if (u < acc) return x;
  }
  return s.dim() - 1;
}

inline std::uint64_t apply_readout_flips(std::uint64_t x, int n,
                                         std::span<const double> flip,
                                         RngStream& rng) {
  if (flip.empty()) return x;
  for (int q = 0; q < n; ++q) {
    const double p = flip.size() == 1 ? flip[0] : flip[q];
    if (p > 0.0 && rng.bernoulli(p)) x ^= std::uint64_t(1) << q;
  }
  return x;
}

}  // namespace detail

/// Histogram of measured bitstrings: one fresh noise trajectory per shot by
/// default, so shot noise and realization noise stay coupled exactly as in
/// hardware runs.
inline OutcomeHistogram sample_outcomes(const Circuit& c, const NoiseSpec& spec,
                                        int n_shots, RngStream& rng,
                                        TrajectoryPolicy policy =
                                            TrajectoryPolicy::per_shot,
                                        int n_cap = kDefaultNCap) {
  if (n_shots < 1)
    throw Error(ErrorCode::invalid_argument, "need at least one shot");
  if (c.n_qubits > n_cap)
    throw Error(ErrorCode::resource_limit,
                "resource-limit: circuit width exceeds the statevector cap");

  OutcomeHistogram hist;
  hist.n_qubits = c.n_qubits;
  hist.n_shots = static_cast<std::uint64_t>(n_shots);
  hist.counts.assign(std::size_t(1) << c.n_qubits, 0);

  const ResolvedNoise noise = resolve(spec);
  const bool deterministic_state = noise.alpha == 0.0 &&
                                   !noise.has_swap_noise() &&
                                   noise.epsilon == 0.0;

  if (deterministic_state) {
    // Every trajectory is the same instance; only the readout is stochastic.
    const NoisyInstance inst = realize_trajectory(c, spec, rng);
    const StateVector s = simulate_instance(inst, rng);
    std::vector<double> probs(s.dim());
    for (std::int64_t x = 0; x < s.dim(); ++x) probs[x] = std::norm(s.amps(x));
    for (int shot = 0; shot < n_shots; ++shot) {
      std::uint64_t x = detail::sample_index(probs, rng);
      x = detail::apply_readout_flips(x, c.n_qubits, inst.meas_flip, rng);
      ++hist.counts[x];
    }
    return hist;
  }

  if (policy == TrajectoryPolicy::shared) {
    const NoisyInstance inst = realize_trajectory(c, spec, rng);
    const StateVector s = simulate_instance(inst, rng);
    for (int shot = 0; shot < n_shots; ++shot) {
      std::uint64_t x = detail::sample_index(s, rng);
      x = detail::apply_readout_flips(x, c.n_qubits, inst.meas_flip, rng);
      ++hist.counts[x];
    }
    return hist;
  }

  for (int shot = 0; shot < n_shots; ++shot) {
    const NoisyInstance inst = realize_trajectory(c, spec, rng);
    const StateVector s = simulate_instance(inst, rng);
    std::uint64_t x = detail::sample_index(s, rng);
    x = detail::apply_readout_flips(x, c.n_qubits, inst.meas_flip, rng);
    ++hist.counts[x];
  }
  return hist;
}

// ---------------------------------------------------------------------------
// Heavy-output statistics and the pass decision
// ---------------------------------------------------------------------------

struct RunResult {
  double h_estimate = 0.0;
  double stderr_ = 0.0;
  std::uint64_t n_shots = 0;
  int n_circuits = 1;
  CircuitKind kind = CircuitKind::standard;
};

inline RunResult heavy_output_frequency(const OutcomeHistogram& hist,
                                        const HeavySubspace& hs) {
  if (hist.n_shots == 0)
    throw Error(ErrorCode::invalid_argument, "empty-input: histogram has no shots");
  if (hist.n_qubits != hs.n_qubits())
    throw Error(ErrorCode::invalid_argument, "histogram/subspace width mismatch");
  std::uint64_t heavy = 0;
  for (std::uint64_t x = 0; x < hist.counts.size(); ++x)
    if (hist.counts[x] != 0 && hs.contains(x)) heavy += hist.counts[x];
  RunResult r;
  r.n_shots = hist.n_shots;
  r.h_estimate = double(heavy) / double(hist.n_shots);
  r.stderr_ =
      std::sqrt(r.h_estimate * (1.0 - r.h_estimate) / double(hist.n_shots));
  return r;
}

inline double heavy_threshold(CircuitKind kind) {
  return kind == CircuitKind::double_parity ? kDoubleParityThreshold
                                            : kHeavyThreshold;
}

struct QvDecision {
  int n = 0;
  double mean_h = 0.0;
  double stderr_ = 0.0;
  double threshold = 0.0;
  bool pass = false;        // two-standard-deviation rule
  bool pass_mean_only = false;
};

/// Pass rule over a circuit ensemble: the mean heavy-output frequency must
/// clear the kind's threshold by two standard errors of the circuit spread.
inline QvDecision qv_decision(std::span<const double> per_circuit_h,
                              CircuitKind kind) {
  if (per_circuit_h.size() < 2)
    throw Error(ErrorCode::invalid_argument,
                "insufficient-data: need at least 2 circuits");
  QvDecision d;
  const double n = double(per_circuit_h.size());
  double mean = 0.0;
  for (double h : per_circuit_h) mean += h;
  mean /= n;
  double var = 0.0;
  for (double h : per_circuit_h) var += (h - mean) * (h - mean);
  var /= (n - 1.0);
  d.mean_h = mean;
  d.stderr_ = std::sqrt(var / n);
  const CircuitKind structural =
      kind == CircuitKind::hidden_parity ? CircuitKind::parity : kind;
  d.threshold = heavy_threshold(structural);
  d.pass = d.mean_h - 2.0 * d.stderr_ > d.threshold;
  d.pass_mean_only = d.mean_h > d.threshold;
  return d;
}

/// Heavy-output frequency of one circuit under a noise model: predicate from
/// tracked structure (or the median rule for standard circuits), then
/// counted over sampled shots.
inline RunResult circuit_heavy_frequency(const Circuit& c, const NoiseSpec& spec,
                                         int n_shots, RngStream& rng,
                                         int n_cap = kDefaultNCap) {
  HeavySubspace hs = c.kind == CircuitKind::standard
                         ? [&] {
                             const std::vector<double> probs =
                                 simulate_ideal(c, n_cap);
                             return heavy_predicate(
                                 c, std::span<const double>(probs));
                           }()
                         : heavy_predicate(c);
  const OutcomeHistogram hist =
      sample_outcomes(c, spec, n_shots, rng, TrajectoryPolicy::per_shot, n_cap);
  RunResult r = heavy_output_frequency(hist, hs);
  r.kind = c.kind;
  return r;
}

}  // namespace qvb
