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

#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "qvbench/analytic.hpp"
#include "qvbench/circuit.hpp"
#include "qvbench/config.hpp"
#include "qvbench/report.hpp"
#include "qvbench/sim.hpp"

namespace qvb {

// ---------------------------------------------------------------------------
// Worker pool
// ---------------------------------------------------------------------------

/// Fan-out helper. Tasks are claimed by index from an atomic counter and
/// every task derives its randomness from its own index, so results do not
/// depend on scheduling or worker count.
class WorkerPool {
 public:
  explicit WorkerPool(int workers = 0) {
    if (workers <= 0) {
      const unsigned hw = std::thread::hardware_concurrency();
      workers = hw == 0 ? 1 : static_cast<int>(hw);
    }
    workers_ = workers;
  }

  int size() const { return workers_; }

  void parallel_for(std::size_t count,
                    const std::function<void(std::size_t)>& fn) const {
    if (count == 0) return;
    const int threads = static_cast<int>(
        std::min<std::size_t>(count, static_cast<std::size_t>(workers_)));
    if (threads <= 1) {
      for (std::size_t i = 0; i < count; ++i) fn(i);
      return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
      while (true) {
        const std::size_t i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int w = 0; w < threads; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
  }

 private:
  int workers_ = 1;
};

// ---------------------------------------------------------------------------
// Circuit generation dispatch
// ---------------------------------------------------------------------------

inline Circuit generate_run_circuit(RunKind kind, int n, int t, int m,
                                    bool insert_x, RngStream& rng) {
  switch (kind) {
    case RunKind::standard:
      return generate_standard(n, t, rng);
    case RunKind::parity:
      return generate_parity(n, t, rng);
    case RunKind::double_parity:
      return generate_double_parity(n, t, rng);
    case RunKind::m_parity:
      return generate_m_parity(n, t, m, rng);
    case RunKind::hidden_parity: {
      Circuit base = generate_parity(n, t, rng);
      return dress_hidden_parity(base, rng, insert_x);
    }
    case RunKind::hidden_double_parity: {
      Circuit base = generate_double_parity(n, t, rng);
      return dress_hidden_parity(base, rng, insert_x);
    }
  }
  throw Error(ErrorCode::invalid_argument, "unknown run kind");
}

// ---------------------------------------------------------------------------
// One grid point
// ---------------------------------------------------------------------------

struct PointStats {
  std::vector<double> per_circuit_h;
  double mean = 0.0;
  double stderr_ = 0.0;
};

namespace detail {

// Stream-domain constants; distinct words keep circuit generation and shot
// sampling independent.
inline constexpr std::uint64_t kStreamGenerate = 0x67656eULL;
inline constexpr std::uint64_t kStreamShots = 0x73686fULL;

inline void finalize_stats(PointStats& stats) {
  const double n = double(stats.per_circuit_h.size());
  double mean = 0.0;
  for (double h : stats.per_circuit_h) mean += h;
  mean /= n;
  double var = 0.0;
  for (double h : stats.per_circuit_h) var += (h - mean) * (h - mean);
  var = n > 1 ? var / (n - 1.0) : 0.0;
  stats.mean = mean;
  stats.stderr_ = std::sqrt(var / n);
}

}  // namespace detail

/// Heavy-output statistics of one (kind, n, t, noise) grid point over an
/// ensemble of freshly drawn circuits. Fully deterministic in
/// (seed, point_id) regardless of parallel scheduling.
inline PointStats run_point(std::uint64_t seed, std::uint64_t point_id,
                            RunKind kind, int n, int t, int m,
                            const NoiseSpec& spec, int circuits, int shots,
                            int n_cap, const WorkerPool& pool,
                            bool insert_x = false) {
  PointStats stats;
  stats.per_circuit_h.assign(circuits, 0.0);
  const auto kind_word = static_cast<std::uint64_t>(kind);
  pool.parallel_for(circuits, [&](std::size_t idx) {
    RngStream gen_rng(seed, {detail::kStreamGenerate, kind_word, point_id,
                             std::uint64_t(n), std::uint64_t(t),
                             std::uint64_t(m), idx});
    Circuit c = generate_run_circuit(kind, n, t, m, insert_x, gen_rng);
    RngStream shot_rng(seed, {detail::kStreamShots, kind_word, point_id,
                              std::uint64_t(n), std::uint64_t(t),
                              std::uint64_t(m), idx});
    stats.per_circuit_h[idx] =
        circuit_heavy_frequency(c, spec, shots, shot_rng, n_cap).h_estimate;
  });
  detail::finalize_stats(stats);
  return stats;
}

// ---------------------------------------------------------------------------
// Sweeps (run command)
// ---------------------------------------------------------------------------

struct SweepOutput {
  std::vector<ReportRow> rows;
  std::string raw_ndjson;  // one line per circuit-level h value
};

namespace detail {

inline void fill_noise_columns(ReportRow& row, const ResolvedNoise& noise) {
  row.alpha = noise.alpha;
  row.sigma = noise.swap_model == ResolvedNoise::SwapModel::faulty ? noise.sigma : 0.0;
  row.p = noise.swap_model == ResolvedNoise::SwapModel::omission
              ? noise.omit_p
              : (noise.swap_model == ResolvedNoise::SwapModel::faulty
                     ? sigma_to_p(noise.sigma)
                     : 0.0);
  row.epsilon = noise.epsilon;
  row.lambda = noise.has_dephasing ? noise.dephase_lambda : 0.0;
  row.flip_q = noise.meas_flip.empty() ? 0.0 : noise.meas_flip.front();
}

inline void fill_predictions(ReportRow& row, RunKind kind,
                             const ResolvedNoise& noise) {
  const bool clean = noise.epsilon == 0.0 && !noise.has_dephasing &&
                     noise.meas_flip.empty();
  if (!clean) return;
  if (kind == RunKind::parity) {
    const ParityPrediction pred =
        predict_parity(row.n, row.t, noise.alpha, noise.env_dim);
    row.prediction_exact = pred.exact;
    row.prediction_approx = pred.approx;
  } else if (kind == RunKind::double_parity) {
    const DoubleParityPrediction pred = predict_double_parity(
        row.n, row.t, noise.alpha, row.p, w_line(row.n), noise.env_dim,
        /*swap_layers_t_minus_one=*/true);
    row.prediction_exact = pred.exact;
    row.prediction_approx = pred.approx;
  }
  if (!std::isnan(row.prediction_exact) && row.h_stderr > 0.0)
    row.deviation_sigmas =
        std::abs(row.h_mean - row.prediction_exact) / row.h_stderr;
}

inline void fill_exponents(ReportRow& row, RunKind kind,
                           const ResolvedNoise& noise) {
  const bool above_half = row.h_mean > 0.5 + 3.0 * row.h_stderr;
  if (kind == RunKind::parity && noise.alpha > 0.0 && above_half)
    row.q_exp = extract_q(row.h_mean);
  if (kind == RunKind::double_parity && noise.alpha == 0.0 && row.p > 0.0 &&
      above_half)
    row.w_exp = extract_w(row.h_mean);
}

}  // namespace detail

inline SweepOutput run_sweep(const RunConfig& cfg, const WorkerPool& pool) {
  SweepOutput out;
  const std::vector<NoisePoint> grid = expand_noise_grid(cfg.noise);
  std::uint64_t point_id = 0;
  for (int n : cfg.n_list) {
    const std::vector<int> ts = cfg.square ? std::vector<int>{n} : cfg.t_list;
    for (int t : ts) {
      for (std::size_t g = 0; g < grid.size(); ++g) {
        const NoisePoint& pt = grid[g];
        std::vector<int> ms{cfg.m_subset};
        if (cfg.kind == RunKind::m_parity && cfg.m_subset == 0) {
          ms.clear();
          for (int m = 1; m <= n; ++m) ms.push_back(m);
        }
        for (int m : ms) {
          const PointStats stats =
              run_point(cfg.seed, point_id, cfg.kind, n, t, m, pt.spec,
                        cfg.circuits, cfg.shots, cfg.n_cap, pool, cfg.insert_x);
          ReportRow row;
          row.kind = to_string(cfg.kind);
          row.n = n;
          row.t = t;
          row.m = cfg.kind == RunKind::m_parity ? m : 0;
          const ResolvedNoise noise = resolve(pt.spec);
          detail::fill_noise_columns(row, noise);
          if (auto it = pt.params.find("factor"); it != pt.params.end())
            row.scale = it->second;
          row.circuits = cfg.circuits;
          row.shots = static_cast<long long>(cfg.circuits) * cfg.shots;
          row.h_mean = stats.mean;
          row.h_stderr = stats.stderr_;
          detail::fill_predictions(row, cfg.kind, noise);
          detail::fill_exponents(row, cfg.kind, noise);
          out.rows.push_back(row);

          for (std::size_t i = 0; i < stats.per_circuit_h.size(); ++i) {
            nlohmann::json line;
            line["kind"] = row.kind;
            line["N"] = n;
            line["T"] = t;
            line["m"] = row.m;
            line["point"] = point_id;
            line["circuit"] = i;
            line["h"] = stats.per_circuit_h[i];
            out.raw_ndjson += line.dump();
            out.raw_ndjson += '\n';
          }
          ++point_id;
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Exponent-fit protocol (fit command)
// ---------------------------------------------------------------------------

struct ExponentSeries {
  std::vector<double> xs, ys, errs;
};

enum class FitKind { q, w, q_prime };

inline FitKind fit_kind_from_string(const std::string& s) {
  if (s == "Q" || s == "q") return FitKind::q;
  if (s == "W" || s == "w") return FitKind::w;
  if (s == "Qprime" || s == "qprime" || s == "Q'") return FitKind::q_prime;
  throw Error(ErrorCode::config, "config-error: unknown fit kind \"" + s + "\"");
}

/// Acceptance windows for the normalized fit slopes.
inline std::pair<double, double> fit_slope_window(FitKind kind) {
  switch (kind) {
    case FitKind::q: return {1.9, 2.1};
    case FitKind::w: return {0.42, 0.58};
    case FitKind::q_prime: return {1.40, 1.60};
  }
  return {0.0, 0.0};
}

/// Normalized decay series from report rows for one circuit width.
/// Q: Q/(NT) against alpha^2; W: W/((T-1) w(N)) against p;
/// Q': Q'/(T q(N)) against alpha^2 with companion slopes supplied.
inline ExponentSeries exponent_series(const std::vector<ReportRow>& rows, int n,
                                      FitKind kind, double q_slope = 0.0,
                                      double w_slope = 0.0) {
  ExponentSeries s;
  for (const ReportRow& row : rows) {
    if (row.n != n || row.t < 1) continue;
    const double nt = double(row.n) * row.t;
    switch (kind) {
      case FitKind::q: {
        if (row.alpha == 0.0) {
          // exact noiseless anchor
          s.xs.push_back(0.0);
          s.ys.push_back(0.0);
          s.errs.push_back(0.0);
          continue;
        }
        if (!(row.h_mean > 0.5 + 3.0 * row.h_stderr)) continue;
        const double q = extract_q(row.h_mean);
        s.xs.push_back(row.alpha * row.alpha);
        s.ys.push_back(q / nt);
        s.errs.push_back(2.0 * row.h_stderr / (2.0 * row.h_mean - 1.0) / nt);
        break;
      }
      case FitKind::w: {
        if (row.t < 2 || row.alpha != 0.0) continue;
        const double norm = (row.t - 1.0) * w_line(row.n);
        if (row.p == 0.0) {
          s.xs.push_back(0.0);
          s.ys.push_back(0.0);
          s.errs.push_back(0.0);
          continue;
        }
        if (!(row.h_mean > 0.5 + 3.0 * row.h_stderr)) continue;
        const double w = extract_w(row.h_mean);
        s.xs.push_back(row.p);
        s.ys.push_back(w / norm);
        s.errs.push_back(2.0 * row.h_stderr / (2.0 * row.h_mean - 1.0) / norm);
        break;
      }
      case FitKind::q_prime: {
        const double norm = row.t * q_factor(row.n);
        const double q_comp = q_slope * row.alpha * row.alpha * nt;
        const double w_comp = w_slope * row.p * w_line(row.n) * (row.t - 1.0);
        if (row.alpha == 0.0) {
          s.xs.push_back(0.0);
          s.ys.push_back(0.0);
          s.errs.push_back(0.0);
          continue;
        }
        const double gap = 4.0 * row.h_mean - 1.0 - std::exp(-q_comp);
        if (!(gap > 12.0 * row.h_stderr)) continue;  // 3 sigma above the floor
        const double qp = extract_q_prime(row.h_mean, q_comp, w_comp);
        s.xs.push_back(row.alpha * row.alpha);
        s.ys.push_back(qp / norm);
        s.errs.push_back(4.0 * row.h_stderr / gap / norm);
        break;
      }
    }
  }
  return s;
}

inline FitResult fit_exponent_series(const ExponentSeries& s) {
  if (s.xs.size() < 3)
    throw Error(ErrorCode::fit,
                "fit-error: fewer than 3 usable points above the decay floor");
  return fit_linear(s.xs, s.ys, s.errs);
}

// ---------------------------------------------------------------------------
// Quantum-volume scan (qv command)
// ---------------------------------------------------------------------------

struct QvCurvePoint {
  int t = 0;
  double h_mean = 0.0;
  double h_stderr = 0.0;
};

struct QvCell {
  std::string kind;
  int n = 0;
  double scale = 1.0;
  std::vector<QvCurvePoint> curve;  // h versus depth, T = 1..n+2
  QvDecision square_decision;       // at T = n
  double t_cross = std::nan("");    // interpolated threshold crossing
};

struct QvScanOutput {
  std::vector<QvCell> cells;
  nlohmann::json summary;
};

namespace detail {

inline double interpolate_t_cross(const std::vector<QvCurvePoint>& curve,
                                  double threshold) {
  if (curve.empty() || curve.front().h_mean < threshold) return 0.0;
  for (std::size_t i = 1; i < curve.size(); ++i) {
    const double h0 = curve[i - 1].h_mean;
    const double h1 = curve[i].h_mean;
    if (h1 < threshold && h0 >= threshold) {
      const double frac = (h0 - threshold) / (h0 - h1);
      return curve[i - 1].t + frac * (curve[i].t - curve[i - 1].t);
    }
  }
  return std::nan("");  // never crossed in range
}

}  // namespace detail

/// Depth scans per (kind, scale, n): heavy output against T, the pass
/// decision at the square point T = n, and the depth at which the curve
/// crosses the kind's threshold (linear interpolation between grid points).
inline QvScanOutput run_qv_scan(const RunConfig& cfg, const WorkerPool& pool) {
  QvScanOutput out;
  std::vector<std::string> kinds = cfg.kinds;
  if (kinds.empty()) kinds = {"standard", "parity", "double-parity"};
  std::vector<double> scales = cfg.scale_grid;
  if (scales.empty()) scales = {1.0};
  const std::vector<NoisePoint> grid = expand_noise_grid(cfg.noise);
  if (grid.size() != 1)
    throw Error(ErrorCode::config,
                "config-error: qv scans take a single base noise spec; sweep "
                "via scale_grid");
  const NoiseSpec base = grid.front().spec;

  nlohmann::json summary = nlohmann::json::object();
  std::uint64_t point_id = 0;
  for (const std::string& kind_name : kinds) {
    const RunKind kind = run_kind_from_string(kind_name);
    nlohmann::json per_kind = nlohmann::json::array();
    for (double scale : scales) {
      const NoiseSpec spec = NoiseSpec::scaled(scale, base);
      int largest_pass = 0;
      int largest_pass_mean = 0;
      nlohmann::json per_n = nlohmann::json::array();
      for (int n : cfg.n_list) {
        if (decision_kind(kind) == CircuitKind::double_parity &&
            (n % 2 != 0 || n < 4))
          continue;
        QvCell cell;
        cell.kind = kind_name;
        cell.n = n;
        cell.scale = scale;
        std::vector<double> square_h;
        for (int t = 1; t <= n + 2; ++t) {
          const PointStats stats =
              run_point(cfg.seed, point_id++, kind, n, t, 0, spec, cfg.circuits,
                        cfg.shots, cfg.n_cap, pool, cfg.insert_x);
          cell.curve.push_back({t, stats.mean, stats.stderr_});
          if (t == n) square_h = stats.per_circuit_h;
        }
        cell.square_decision = qv_decision(square_h, decision_kind(kind));
        cell.square_decision.n = n;
        cell.t_cross = detail::interpolate_t_cross(
            cell.curve, heavy_threshold(decision_kind(kind)));
        if (cell.square_decision.pass) largest_pass = std::max(largest_pass, n);
        if (cell.square_decision.pass_mean_only)
          largest_pass_mean = std::max(largest_pass_mean, n);
        nlohmann::json jn;
        jn["N"] = n;
        jn["t_cross"] = std::isnan(cell.t_cross)
                            ? nlohmann::json(nullptr)
                            : nlohmann::json(cell.t_cross);
        jn["t_cross_over_n"] = std::isnan(cell.t_cross)
                                   ? nlohmann::json(nullptr)
                                   : nlohmann::json(cell.t_cross / n);
        jn["h_at_square"] = cell.square_decision.mean_h;
        jn["pass_two_sigma"] = cell.square_decision.pass;
        jn["pass_mean_only"] = cell.square_decision.pass_mean_only;
        per_n.push_back(std::move(jn));
        out.cells.push_back(std::move(cell));
      }
      nlohmann::json js;
      js["scale"] = scale;
      js["largest_passing_n"] = largest_pass;
      js["largest_passing_n_mean_only"] = largest_pass_mean;
      js["log2_qv"] = largest_pass;
      js["per_n"] = std::move(per_n);
      per_kind.push_back(std::move(js));
    }
    summary[kind_name] = std::move(per_kind);
  }
  out.summary = std::move(summary);
  return out;
}

/// Largest width whose square circuits pass under the given noise, plus the
/// full decision vector (contiguity is not assumed).
struct QvMeasurement {
  int largest_passing_n = 0;  // log2 of the reported volume
  std::vector<QvDecision> decisions;
};

inline QvMeasurement measure_quantum_volume(const NoiseSpec& spec, RunKind kind,
                                            int n_max, int circuits, int shots,
                                            std::uint64_t seed, int n_cap,
                                            const WorkerPool& pool) {
  if (n_max < 2)
    throw Error(ErrorCode::invalid_argument, "invalid-size: n_max must be >= 2");
  QvMeasurement out;
  std::uint64_t point_id = 0;
  for (int n = 2; n <= n_max; ++n) {
    if (decision_kind(kind) == CircuitKind::double_parity && (n % 2 != 0 || n < 4))
      continue;
    const PointStats stats = run_point(seed, point_id++, kind, n, n, 0, spec,
                                       circuits, shots, n_cap, pool);
    QvDecision d = qv_decision(stats.per_circuit_h, decision_kind(kind));
    d.n = n;
    if (d.pass) out.largest_passing_n = std::max(out.largest_passing_n, n);
    out.decisions.push_back(d);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Estimator protocol (estimate command)
// ---------------------------------------------------------------------------

struct EstimateOutput {
  int n = 0;
  int t = 0;  // also the channel-slot count M
  std::string family;  // ideal | depolarizing | measurement-flip | dephasing
  double param = 0.0;
  std::vector<double> hum_mean, hum_stderr, hum_prediction;  // m = 1..n
  double p0_inferred = std::nan("");
  double p0_stderr = std::nan("");
  double p0_exact = std::nan("");
  double hu_inferred = std::nan("");
  double hu_formula = std::nan("");
  double hu_direct_mean = std::nan("");
  double hu_direct_stderr = std::nan("");
};

/// m-sweep estimation: run subset-parity circuits for every m, compare with
/// the closed forms of the declared noise family, invert the measurement
/// sweep where applicable, and put the inferred standard-test estimate next
/// to a directly simulated one under the same noise.
inline EstimateOutput run_estimate(const RunConfig& cfg, const WorkerPool& pool) {
  if (cfg.n_list.size() != 1)
    throw Error(ErrorCode::config, "config-error: estimate takes a single n");
  const int n = cfg.n_list.front();
  const int t = cfg.square ? n : cfg.t_list.front();
  const std::vector<NoisePoint> grid = expand_noise_grid(cfg.noise);
  if (grid.size() != 1)
    throw Error(ErrorCode::config, "config-error: estimate takes one noise point");
  const NoiseSpec spec = grid.front().spec;
  const ResolvedNoise noise = resolve(spec);

  EstimateOutput out;
  out.n = n;
  out.t = t;

  const bool meas_only = !noise.meas_flip.empty() && noise.alpha == 0.0 &&
                         !noise.has_swap_noise() && noise.epsilon == 0.0 &&
                         !noise.has_dephasing;
  const bool depol_only = noise.epsilon > 0.0 && noise.alpha == 0.0 &&
                          !noise.has_swap_noise() && noise.meas_flip.empty() &&
                          !noise.has_dephasing;
  const bool dephase_only = noise.has_dephasing && noise.alpha == 0.0 &&
                            !noise.has_swap_noise() && noise.epsilon == 0.0 &&
                            noise.meas_flip.empty();
  if (noise.ideal()) {
    out.family = "ideal";
  } else if (meas_only) {
    if (noise.meas_flip.size() > 1)
      throw Error(ErrorCode::fit,
                  "unsupported-estimation: inversion needs a uniform flip rate");
    out.family = "measurement-flip";
    out.param = noise.meas_flip.front();
  } else if (depol_only) {
    out.family = "depolarizing";
    out.param = noise.epsilon;
  } else if (dephase_only) {
    out.family = "dephasing";
    out.param = noise.dephase_lambda;
  } else {
    throw Error(ErrorCode::fit,
                "unsupported-estimation: estimate supports measurement-flip, "
                "depolarizing, dephasing or ideal noise");
  }

  for (int m = 1; m <= n; ++m) {
    const PointStats stats =
        run_point(cfg.seed, std::uint64_t(m), RunKind::m_parity, n, t, m, spec,
                  cfg.circuits, cfg.shots, cfg.n_cap, pool);
    out.hum_mean.push_back(stats.mean);
    out.hum_stderr.push_back(stats.stderr_);
    if (out.family == "depolarizing") {
      out.hum_prediction.push_back(estimator_hum_depolarizing(m, t, out.param));
    } else if (out.family == "measurement-flip") {
      out.hum_prediction.push_back(
          0.5 * (1.0 + std::pow(1.0 - 2.0 * out.param, m)));
    } else {
      out.hum_prediction.push_back(1.0);
    }
  }

  if (out.family == "measurement-flip" || out.family == "ideal") {
    const auto [p0, hu] = measurement_inversion(out.hum_mean, n);
    out.p0_inferred = p0;
    out.hu_inferred = hu;
    double var = 0.0;
    const double half_dim = std::pow(2.0, n - 1);
    for (int m = 1; m <= n; ++m) {
      const double v = binom(n, m) / half_dim;
      var += v * v * out.hum_stderr[m - 1] * out.hum_stderr[m - 1];
    }
    out.p0_stderr = std::sqrt(var);
    const double q = out.family == "ideal" ? 0.0 : out.param;
    out.p0_exact = std::pow(1.0 - q, n);
    out.hu_formula = estimator_hu(n, 1, out.p0_exact, {});
  } else if (out.family == "depolarizing") {
    const double eps = out.param;
    const double p0 = std::pow(1.0 - 0.5 * eps, n);
    std::vector<double> overlaps(t - 1, std::pow(4.0 - 3.0 * eps, n));
    out.p0_exact = p0;
    out.hu_formula = estimator_hu(n, t, p0, overlaps);
    out.hu_inferred = out.hu_formula;
  } else {  // dephasing
    out.hu_formula = dephasing_counterexample(n, out.param).hu;
  }

  {
    const PointStats direct =
        run_point(cfg.seed, 0xd15ec7ULL, RunKind::standard, n, t, 0, spec,
                  cfg.circuits, cfg.shots, cfg.n_cap, pool);
    out.hu_direct_mean = direct.mean;
    out.hu_direct_stderr = direct.stderr_;
  }
  return out;
}

}  // namespace qvb
