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
#include <map>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qvbench/error.hpp"
#include "qvbench/rng.hpp"

namespace qvb {

/// Ensemble-average heavy output probability of an ideal random circuit,
/// (1 + ln 2) / 2. Kept at full precision; thresholds are sensitive.
inline const double kPStar = 0.5 * (1.0 + std::log(2.0));

/// Heavy-output pass threshold for the standard, parity and m-parity tests.
inline const double kHeavyThreshold = 2.0 / 3.0;

/// Rescaled threshold for the double-parity test, whose frequency decays to
/// 1/4 instead of 1/2: (1 + ln 2) / (4 ln 2).
inline const double kDoubleParityThreshold =
    (1.0 + std::log(2.0)) / (4.0 * std::log(2.0));

inline double binom(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * double(n - k + i) / double(i);
  return r;
}

// ---------------------------------------------------------------------------
// Doubled-channel average of the Gaussian-ensemble kick
// ---------------------------------------------------------------------------

/// Spectral-form-factor function controlling the average of
/// e^{i a H} ⊗ e^{-i a H*} for 4-dimensional unit-variance GUE. Exact
/// degree-10 polynomial times a Gaussian.
inline double f_alpha(double alpha) {
  const double a2 = alpha * alpha;
  const double a4 = a2 * a2;
  const double a6 = a4 * a2;
  const double a8 = a4 * a4;
  const double a10 = a8 * a2;
  const double poly =
      -a10 + 12.5 * a8 - 64.0 * a6 + 138.0 * a4 - 144.0 * a2 + 36.0;
  return std::exp(-a2) * poly / 36.0;
}

/// Exponential approximation e^{-(d+1) a^2}, used for ensemble dimensions
/// where no exact polynomial is tabulated.
inline double f_general(double alpha, int d) {
  return std::exp(-double(d + 1) * alpha * alpha);
}

/// Identity-component weight of the doubled-channel average for a two-qubit
/// gate coupled to an env_dim-dimensional environment (env_dim = 1 is the
/// purely unitary kick). The companion weight of |+><+| is
/// env_dim (1 - f) / (4 env_dim + 1); a + 4 b = 1 always.
inline double gue_channel_a(double alpha, int env_dim = 1) {
  const double f =
      env_dim == 1 ? f_alpha(alpha) : f_general(alpha, 4 * env_dim);
  return (4.0 * env_dim * f + 1.0) / (4.0 * env_dim + 1.0);
}

inline double gue_channel_b(double alpha, int env_dim = 1) {
  const double f =
      env_dim == 1 ? f_alpha(alpha) : f_general(alpha, 4 * env_dim);
  return env_dim * (1.0 - f) / (4.0 * env_dim + 1.0);
}

// ---------------------------------------------------------------------------
// Decay predictions
// ---------------------------------------------------------------------------

struct ParityPrediction {
  double exact = 1.0;
  double approx = 1.0;
};

/// Heavy output frequency of a parity circuit of n qubits and t layers under
/// per-gate Gaussian kicks of strength alpha (optionally dissipative with an
/// env_dim-dimensional environment per gate).
inline ParityPrediction predict_parity(int n, int t, double alpha,
                                       int env_dim = 1) {
  ParityPrediction out;
  const double a = gue_channel_a(alpha, env_dim);
  out.exact = 0.5 * (1.0 + std::pow(a, 0.5 * n * t));
  out.approx = 0.5 * (1.0 + std::exp(-2.0 * env_dim * alpha * alpha * n * t));
  return out;
}

/// Probability that a random half/half coloring of n qubits paired at random
/// yields exactly K mixed-color pairs. Support: 0 <= K <= n/2 with
/// n/2 - K even.
inline std::map<int, double> pair_mixing_distribution(int n) {
  if (n < 4 || n % 2 != 0)
    throw Error(ErrorCode::invalid_argument, "invalid-size: need even n >= 4");
  const int half = n / 2;
  std::map<int, double> pk;
  const double norm = binom(n, half);
  for (int k = half % 2; k <= half; k += 2) {
    const int rest = (half - k) / 2;
    pk[k] = binom(half, k) * binom(half - k, rest) * std::pow(2.0, k) / norm;
  }
  return pk;
}

/// Mixed-pair average <a^{(n/2+K)/2}>_K as the finite P(K)-weighted sum.
inline double g_exact(double a_coeff, int n) {
  double g = 0.0;
  for (const auto& [k, p] : pair_mixing_distribution(n))
    g += p * std::pow(a_coeff, 0.5 * (0.5 * n + k));
  return g;
}

/// n (n - 2/3) / (n - 1): the layer-normalization factor of the mixed-pair
/// decay exponent.
inline double q_factor(int n) {
  return n * (n - 2.0 / 3.0) / (n - 1.0);
}

inline double g_approx(double alpha, int n) {
  return std::exp(-1.5 * alpha * alpha * q_factor(n));
}

/// Mean adjacent-transposition count of a uniform permutation routed on a
/// line, n (n - 1) / 4.
inline double w_line(int n) {
  if (n < 2) throw Error(ErrorCode::invalid_argument, "invalid-size");
  return 0.25 * double(n) * double(n - 1);
}

struct DoubleParityPrediction {
  double exact = 1.0;
  double approx = 1.0;
  double swap_only = 1.0;
};

/// Heavy output frequency of a double-parity circuit under Gaussian gate
/// kicks (alpha) and swap omission (p) with w expected swaps per layer.
/// With swap_layers_t_minus_one the swap exponent counts t - 1 layers:
/// omissions in the first permutation act on the reference state and are
/// undetectable.
inline DoubleParityPrediction predict_double_parity(
    int n, int t, double alpha, double p, double w, int env_dim = 1,
    bool swap_layers_t_minus_one = false) {
  DoubleParityPrediction out;
  const double t_swap = swap_layers_t_minus_one ? std::max(0, t - 1) : t;
  const double swap_decay = std::exp(-0.5 * p * w * t_swap);
  const double a = gue_channel_a(alpha, env_dim);
  out.exact = 0.25 * (2.0 * std::pow(g_exact(a, n), t) * swap_decay +
                      std::pow(a, 0.5 * n * t) + 1.0);
  const double de_a2 = env_dim * alpha * alpha;
  out.approx = 0.25 * (2.0 * std::exp(-1.5 * de_a2 * t * q_factor(n)) * swap_decay +
                       std::exp(-2.0 * de_a2 * n * t) + 1.0);
  out.swap_only = 0.5 * (1.0 + swap_decay);
  return out;
}

/// Per-layer transfer weights appearing in the decay derivations; the
/// identities among them (a + 4b = 1, x + y = 1, c + d + 2e = 1,
/// c + d - 2e = a^{n/2}, c - d = g) are checked by layer_transfer_check.
struct NoiseCoefficients {
  double a, b;  // doubled-channel weights of one gate kick
  double A, B;  // parity-sector layer matrix entries
  double x, y;  // permutation block weights
  double c, d, e;  // double-parity layer weights, averaged over pairings
};

inline NoiseCoefficients noise_coefficients(double alpha, int env_dim, int n,
                                            double p, double w) {
  NoiseCoefficients nc{};
  nc.a = gue_channel_a(alpha, env_dim);
  nc.b = gue_channel_b(alpha, env_dim);
  const double an2 = std::pow(nc.a, 0.5 * n);
  nc.A = 0.5 * (1.0 + an2);
  nc.B = 0.5 * (1.0 - an2);
  const double sd = std::exp(-0.5 * p * w);
  nc.x = 0.5 * (1.0 + sd);
  nc.y = 0.5 * (1.0 - sd);
  const double g = g_exact(nc.a, n);
  nc.c = 0.25 * an2 + 0.5 * g + 0.25;
  nc.d = 0.25 * an2 - 0.5 * g + 0.25;
  nc.e = 0.25 * (1.0 - an2);
  return nc;
}

// ---------------------------------------------------------------------------
// Exponent extraction and fitting
// ---------------------------------------------------------------------------

/// Global-parity decay exponent from h = (1 + e^-Q) / 2.
inline double extract_q(double h) {
  if (!(h > 0.5))
    throw Error(ErrorCode::fit, "extraction-undefined: h at or below 1/2");
  return -std::log(2.0 * h - 1.0);
}

/// Swap-only double-parity exponent; same floor and form as extract_q.
inline double extract_w(double h) { return extract_q(h); }

/// Mixed-pair exponent from the full double-parity decay
/// h = (2 e^{-Q'} e^{-W} + e^{-Q} + 1) / 4, with the global exponent Q and
/// swap exponent W estimated from dedicated sweeps.
inline double extract_q_prime(double h, double q_companion, double w_companion) {
  const double x = 4.0 * h - 1.0 - std::exp(-q_companion);
  if (!(x > 0.0))
    throw Error(ErrorCode::fit, "extraction-undefined: h at or below its floor");
  return -std::log(0.5 * x) - w_companion;
}

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double intercept_stderr = 0.0;
};

/// Weighted least-squares line fit. With y_errs the weights are 1/sigma^2
/// and parameter errors come from the weight matrix; without, the fit is
/// unweighted and errors are scaled by the residual variance. Zero or
/// missing errors fall back to the smallest positive error in the set.
inline FitResult fit_linear(std::span<const double> xs,
                            std::span<const double> ys,
                            std::span<const double> y_errs = {}) {
  const std::size_t n = xs.size();
  if (n != ys.size() || (!y_errs.empty() && y_errs.size() != n))
    throw Error(ErrorCode::invalid_argument, "fit input size mismatch");
  if (n < 3) throw Error(ErrorCode::fit, "fit-error: need at least 3 points");

  std::vector<double> w(n, 1.0);
  const bool weighted = !y_errs.empty();
  if (weighted) {
    double min_pos = 0.0;
    for (double e : y_errs)
      if (e > 0.0 && (min_pos == 0.0 || e < min_pos)) min_pos = e;
    if (min_pos == 0.0) min_pos = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = y_errs[i] > 0.0 ? y_errs[i] : min_pos;
      w[i] = 1.0 / (e * e);
    }
  }

  double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sw += w[i];
    swx += w[i] * xs[i];
    swy += w[i] * ys[i];
    swxx += w[i] * xs[i] * xs[i];
    swxy += w[i] * xs[i] * ys[i];
  }
  const double delta = sw * swxx - swx * swx;
  if (!(delta > 0.0) || !(std::abs(delta) > 1e-300 * sw * swxx))
    throw Error(ErrorCode::fit, "singular-fit: degenerate abscissae");

  FitResult r;
  r.slope = (sw * swxy - swx * swy) / delta;
  r.intercept = (swxx * swy - swx * swxy) / delta;

  double var_scale = 1.0;
  if (!weighted) {
    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double res = ys[i] - r.slope * xs[i] - r.intercept;
      rss += res * res;
    }
    var_scale = n > 2 ? rss / double(n - 2) : 0.0;
  }
  r.slope_stderr = std::sqrt(var_scale * sw / delta);
  r.intercept_stderr = std::sqrt(var_scale * swxx / delta);
  return r;
}

// ---------------------------------------------------------------------------
// Heavy-output estimators from layer channel data
// ---------------------------------------------------------------------------

/// Heavy output estimate of the standard test from layer channel data: the
/// close-to-identity weight of each intermediate channel (through its Choi
/// overlap with the identity channel) and the survival probability of a
/// uniformly drawn basis state through the final channel.
inline double estimator_hu(int n, int m_slots, double p0_m,
                           std::span<const double> choi_overlaps) {
  if (p0_m < 0.0 || p0_m > 1.0 + 1e-12)
    throw Error(ErrorCode::invalid_argument, "survival probability outside [0,1]");
  if (static_cast<int>(choi_overlaps.size()) != m_slots - 1)
    throw Error(ErrorCode::invalid_argument,
                "need one Choi overlap per intermediate slot");
  const double dim = std::pow(2.0, n);
  const double dim2 = dim * dim;
  double prod = (dim * p0_m - 1.0) / (dim - 1.0);
  for (double ov : choi_overlaps) {
    if (ov < -1e-9 || ov > dim2 * (1.0 + 1e-12))
      throw Error(ErrorCode::invalid_argument, "Choi overlap outside [0, 4^n]");
    prod *= (ov - 1.0) / (dim2 - 1.0);
  }
  return 0.5 + (kPStar - 0.5) * prod;
}

/// Heavy output estimate for the m-subset parity test: a path sum over the
/// subset parity before and after each layer channel, with the supplied
/// 2x2 transfer blocks t[p_after][p_before].
inline double estimator_hum(int m, int m_slots,
                            std::span<const Eigen::Matrix2d> transfer) {
  if (m < 1) throw Error(ErrorCode::invalid_argument, "invalid-size");
  if (static_cast<int>(transfer.size()) != m_slots)
    throw Error(ErrorCode::invalid_argument, "need one transfer block per slot");
  for (const auto& t : transfer) {
    for (int col = 0; col < 2; ++col) {
      if (t(0, col) < -1e-12 || t(1, col) < -1e-12 ||
          t(0, col) + t(1, col) > 1.0 + 1e-9)
        throw Error(ErrorCode::invalid_argument,
                    "invalid-channel: transfer column exceeds unit mass");
    }
  }
  Eigen::Matrix2d prod = Eigen::Matrix2d::Identity();
  for (const auto& t : transfer) prod = t * prod;
  return 0.5 * prod.trace();
}

/// Closed form of estimator_hum for per-qubit depolarizing noise of rate
/// epsilon applied after each of m_slots layers: (1 + (1-eps)^{m M}) / 2.
inline double estimator_hum_depolarizing(int m, int m_slots, double epsilon) {
  return 0.5 * (1.0 + std::pow(1.0 - epsilon, double(m) * m_slots));
}

/// Recover the basis-state survival probability of a measurement-stage
/// channel from the full m = 1..n sweep of subset-parity heavy frequencies,
/// and the implied standard-test heavy output estimate.
/// The weights are v_m = binom(n, m) / 2^{n-1} - [m = 0], with h^0 = 1.
inline std::pair<double, double> measurement_inversion(
    std::span<const double> hum_values, int n) {
  if (static_cast<int>(hum_values.size()) != n)
    throw Error(ErrorCode::invalid_argument,
                "incomplete-sweep: need h values for m = 1..n");
  const double half_dim = std::pow(2.0, n - 1);
  double p0 = 1.0 / half_dim - 1.0;  // m = 0 term, h^0 = 1
  for (int m = 1; m <= n; ++m)
    p0 += binom(n, m) / half_dim * hum_values[m - 1];
  const double h = estimator_hu(n, 1, std::min(std::max(p0, 0.0), 1.0), {});
  return {p0, h};
}

/// Upper bound on estimator_hu from per-slot survival probabilities alone,
/// including the explicit small-dimension correction term.
inline double upper_bound_hu(std::span<const double> p0_list, int n, int m_slots) {
  if (static_cast<int>(p0_list.size()) != m_slots)
    throw Error(ErrorCode::invalid_argument, "need one survival value per slot");
  if (m_slots > std::pow(2.0, n))
    throw Error(ErrorCode::invalid_argument, "bound requires M <= 2^n");
  const double dim = std::pow(2.0, n);
  const double dim2 = dim * dim;
  double prod = 1.0;
  for (double p : p0_list) prod *= p;
  const double correction = (1.0 + 1.0 / (dim - 1.0)) *
                                std::pow(1.0 + 1.0 / (dim2 - 1.0), m_slots - 1) -
                            1.0;
  return 0.5 + (kPStar - 0.5) * (prod + correction);
}

struct DephasingPrediction {
  double hu = 0.0;   // standard-test estimate, varies with the phase
  double hum = 1.0;  // subset-parity estimate, identically one
};

/// The phase-kick channel diag(1, e^{i lambda}) on every qubit after the
/// first layer: invisible to every subset-parity test yet it moves the
/// standard-test estimate anywhere between ~1/2 and p*.
inline DephasingPrediction dephasing_counterexample(int n, double lambda) {
  DephasingPrediction out;
  const double dim2 = std::pow(4.0, n);
  const double overlap = std::pow(2.0 + 2.0 * std::cos(lambda), n);
  out.hu = 0.5 + (kPStar - 0.5) * (overlap - 1.0) / (dim2 - 1.0);
  out.hum = 1.0;
  return out;
}

/// Fraction of Hamming-distance-d flip patterns that leave the parity of a
/// random m-subset of n bits unchanged.
inline double parity_keep_fraction(int n, int m, int d) {
  double s = 0.0;
  for (int l = 0; l <= m; l += 2) s += binom(d, l) * binom(n - d, m - l);
  return s / binom(n, m);
}

// ---------------------------------------------------------------------------
// Layer channel descriptors for the supported noise families
// ---------------------------------------------------------------------------

/// Data an estimator needs about one layer channel: its Choi overlap with
/// the identity, the Hamming-distance profile of basis-state transitions,
/// and the induced subset-parity transfer blocks.
struct ChannelDescriptor {
  int n_qubits = 0;
  double choi_overlap = 0.0;
  std::vector<double> bitflip_profile;  // P_k, k = 0..n

  double p0() const { return bitflip_profile.empty() ? 0.0 : bitflip_profile[0]; }

  Eigen::Matrix2d parity_transfer(int m) const {
    double keep = 0.0;
    double total = 0.0;
    for (int d = 0; d < static_cast<int>(bitflip_profile.size()); ++d) {
      keep += bitflip_profile[d] * parity_keep_fraction(n_qubits, m, d);
      total += bitflip_profile[d];
    }
    Eigen::Matrix2d t;
    t << keep, total - keep, total - keep, keep;
    return t;
  }

  void validate() const {
    const double dim2 = std::pow(4.0, n_qubits);
    if (choi_overlap < -1e-9 || choi_overlap > dim2 * (1.0 + 1e-12))
      throw Error(ErrorCode::invalid_argument, "Choi overlap outside [0, 4^n]");
    double total = 0.0;
    for (double p : bitflip_profile) {
      if (p < -1e-12)
        throw Error(ErrorCode::invalid_argument, "negative flip probability");
      total += p;
    }
    if (total > 1.0 + 1e-12)
      throw Error(ErrorCode::invalid_argument, "flip profile exceeds unit mass");
  }

  static ChannelDescriptor identity(int n) {
    ChannelDescriptor c;
    c.n_qubits = n;
    c.choi_overlap = std::pow(4.0, n);
    c.bitflip_profile.assign(n + 1, 0.0);
    c.bitflip_profile[0] = 1.0;
    return c;
  }

  static ChannelDescriptor depolarizing(int n, double eps) {
    ChannelDescriptor c;
    c.n_qubits = n;
    c.choi_overlap = std::pow(4.0 - 3.0 * eps, n);
    c.bitflip_profile.assign(n + 1, 0.0);
    for (int d = 0; d <= n; ++d)
      c.bitflip_profile[d] = binom(n, d) * std::pow(0.5 * eps, d) *
                             std::pow(1.0 - 0.5 * eps, n - d);
    return c;
  }

  static ChannelDescriptor dephasing(int n, double lambda) {
    ChannelDescriptor c;
    c.n_qubits = n;
    c.choi_overlap = std::pow(2.0 + 2.0 * std::cos(lambda), n);
    c.bitflip_profile.assign(n + 1, 0.0);
    c.bitflip_profile[0] = 1.0;  // populations are untouched
    return c;
  }

  static ChannelDescriptor measurement_flip(int n, double q) {
    ChannelDescriptor c;
    c.n_qubits = n;
    c.bitflip_profile.assign(n + 1, 0.0);
    for (int d = 0; d <= n; ++d)
      c.bitflip_profile[d] =
          binom(n, d) * std::pow(q, d) * std::pow(1.0 - q, n - d);
    // Measure-and-reprepare channel: overlap is 2^n times the survival rate.
    c.choi_overlap = std::pow(2.0, n) * c.bitflip_profile[0];
    return c;
  }

  /// Brute-force descriptor from a full 2^n x 2^n confusion matrix
  /// w[i][j] = P(read i | prepared j).
  static ChannelDescriptor from_confusion(const Eigen::MatrixXd& w) {
    const auto dim = w.rows();
    int n = 0;
    while ((Eigen::Index(1) << n) < dim) ++n;
    if ((Eigen::Index(1) << n) != dim || w.cols() != dim)
      throw Error(ErrorCode::invalid_argument, "confusion matrix must be 2^n square");
    ChannelDescriptor c;
    c.n_qubits = n;
    c.bitflip_profile.assign(n + 1, 0.0);
    double diag = 0.0;
    for (Eigen::Index j = 0; j < dim; ++j) {
      for (Eigen::Index i = 0; i < dim; ++i) {
        const int d = __builtin_popcountll(std::uint64_t(i) ^ std::uint64_t(j));
        c.bitflip_profile[d] += w(i, j) / double(dim);
      }
      diag += w(j, j);
    }
    c.choi_overlap = diag;  // sum of survival rates
    return c;
  }
};

// ---------------------------------------------------------------------------
// Identity checks
// ---------------------------------------------------------------------------

struct TransferCheckReport {
  bool ok = false;
  double max_matrix_power_dev = 0.0;
  double max_coefficient_dev = 0.0;
};

/// Verifies the 2x2 symmetric-matrix power identity
/// [[A,B],[B,A]]^T = [[(s^T+d^T)/2, (s^T-d^T)/2], ...], s = A+B, d = A-B,
/// against direct repeated multiplication, and the coefficient identities
/// linking the layer weights.
inline TransferCheckReport layer_transfer_check() {
  TransferCheckReport rep;
  RngStream rng(0x7ab1e5ULL, {42});

  for (int trial = 0; trial < 64; ++trial) {
    const double a = rng.uniform(-1.0, 1.0);
    const double b = rng.uniform(-1.0, 1.0);
    const int t = 1 + static_cast<int>(rng.uniform_index(9));
    Eigen::Matrix2d m;
    m << a, b, b, a;
    Eigen::Matrix2d direct = Eigen::Matrix2d::Identity();
    for (int i = 0; i < t; ++i) direct = direct * m;
    const double sp = std::pow(a + b, t);
    const double dp = std::pow(a - b, t);
    Eigen::Matrix2d closed;
    closed << 0.5 * (sp + dp), 0.5 * (sp - dp), 0.5 * (sp - dp), 0.5 * (sp + dp);
    rep.max_matrix_power_dev =
        std::max(rep.max_matrix_power_dev, (direct - closed).cwiseAbs().maxCoeff());
  }

  for (int n : {4, 6, 8, 10}) {
    for (double alpha : {0.0, 0.01, 0.03, 0.05, 0.1}) {
      for (double p : {0.0, 0.005, 0.02}) {
        const NoiseCoefficients nc =
            noise_coefficients(alpha, 1, n, p, w_line(n));
        const double an2 = std::pow(nc.a, 0.5 * n);
        double dev = std::abs(nc.a + 4.0 * nc.b - 1.0);
        dev = std::max(dev, std::abs(nc.A + nc.B - 1.0));
        dev = std::max(dev, std::abs(nc.x + nc.y - 1.0));
        dev = std::max(dev, std::abs(nc.c + nc.d + 2.0 * nc.e - 1.0));
        dev = std::max(dev, std::abs(nc.c + nc.d - 2.0 * nc.e - an2));
        dev = std::max(dev, std::abs(nc.c - nc.d - g_exact(nc.a, n)));
        rep.max_coefficient_dev = std::max(rep.max_coefficient_dev, dev);
      }
    }
  }

  rep.ok = rep.max_matrix_power_dev < 1e-10 && rep.max_coefficient_dev < 1e-12;
  return rep;
}

}  // namespace qvb
