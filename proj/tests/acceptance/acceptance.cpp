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

// Acceptance suite: every release gate runs at its pinned tolerance and
// prints one PASS/FAIL line. Gates 4-6 reproduce the decay-law
// slope fits at reduced (desk-scale) statistics with fixed seeds.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "qvbench/circuit_io.hpp"
#include "qvbench/runner.hpp"

using namespace qvb;

namespace {

constexpr std::uint64_t kSeed = 20260808;

WorkerPool g_pool;

struct Gate {
  bool ok = true;
  std::vector<std::string> notes;

  void require(bool cond, const char* fmt, ...) {
    char buf[512];
    va_list args;
    va_start(args, fmt);
    std::vsnprintf(buf, sizeof(buf), fmt, args);
    va_end(args);
    notes.push_back(std::string(cond ? "    . " : "    ! ") + buf);
    ok = ok && cond;
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// --------------------------------------------------------------------------
// 1. noiseless baselines
// --------------------------------------------------------------------------
Gate criterion_1() {
  Gate g;
  const auto t0 = std::chrono::steady_clock::now();
  for (RunKind kind : {RunKind::parity, RunKind::double_parity}) {
    for (int n : {4, 6, 8}) {
      const PointStats stats =
          run_point(kSeed, 100 + n, kind, n, n, 0, NoiseSpec::ideal(), 100,
                    1000, 14, g_pool);
      int off = 0;
      for (double h : stats.per_circuit_h) off += h != 1.0;
      g.require(off == 0, "%s n=%d: %d of 100 circuits with off-subspace counts",
                to_string(kind).c_str(), n, off);
    }
  }
  {
    double sum = 0.0;
    const int circuits = 100;
    std::vector<double> hs(circuits, 0.0);
    g_pool.parallel_for(circuits, [&](std::size_t i) {
      RngStream rng(kSeed, {0x51dULL, i});
      Circuit c = generate_standard(6, 6, rng);
      const auto probs = simulate_ideal(c);
      hs[i] = heavy_mass(probs, heavy_predicate(c, std::span<const double>(probs)));
    });
    for (double h : hs) sum += h;
    const double mean = sum / circuits;
    g.require(std::abs(mean - kPStar) <= 0.03,
              "standard n=6 ideal ensemble mean %.4f vs %.4f (tol 0.03)", mean,
              kPStar);
  }
  const double elapsed = seconds_since(t0);
  g.require(elapsed < 300.0, "runtime %.1f s (limit 300)", elapsed);
  return g;
}

// --------------------------------------------------------------------------
// 2. gaussian-kick channel oracle
// --------------------------------------------------------------------------
Gate criterion_2() {
  Gate g;
  const auto t0 = std::chrono::steady_clock::now();
  for (double alpha : {0.05, 0.1}) {
    RngStream rng(kSeed, {0x67eULL, std::uint64_t(alpha * 1000)});
    const ChannelAverage avg = average_gue_channel_stats(alpha, 100000, rng);
    const CMatrix theory = gue_channel_theory(alpha);
    double worst = 0.0;
    for (int r = 0; r < 16; ++r)
      for (int c = 0; c < 16; ++c) {
        const double dev = std::abs(avg.mean(r, c) - theory(r, c));
        const double se = std::max(avg.stderr_(r, c), 1e-12);
        worst = std::max(worst, dev / se);
      }
    g.require(worst < 5.0, "alpha=%.2f worst deviation %.2f sigma (limit 5)",
              alpha, worst);
  }
  const double elapsed = seconds_since(t0);
  g.require(elapsed < 120.0, "runtime %.1f s (limit 120)", elapsed);
  return g;
}

// --------------------------------------------------------------------------
// 3. faulty-swap channel equivalence
// --------------------------------------------------------------------------
Gate criterion_3() {
  Gate g;
  for (double sigma : {0.05, 0.1}) {
    RngStream rng(kSeed, {0x5aaULL, std::uint64_t(sigma * 1000)});
    const ChannelAverage avg =
        average_faulty_swap_channel_stats(sigma, 100000, rng);
    const CMatrix theory = faulty_swap_channel_theory(sigma);
    double worst = 0.0;
    for (int r = 0; r < 16; ++r)
      for (int c = 0; c < 16; ++c) {
        const double dev = std::abs(avg.mean(r, c) - theory(r, c));
        const double se = std::max(avg.stderr_(r, c), 1e-12);
        worst = std::max(worst, dev / se);
      }
    g.require(worst < 5.0, "sigma=%.2f worst deviation %.2f sigma (limit 5)",
              sigma, worst);
  }
  return g;
}

// --------------------------------------------------------------------------
// 4. single-parity decay law
// --------------------------------------------------------------------------
const std::vector<double> kAlphaGrid{0.0, 0.01, 0.02, 0.03, 0.04, 0.05};

std::vector<ReportRow> parity_alpha_sweep(int n, int circuits, int shots,
                                          std::uint64_t salt) {
  std::vector<ReportRow> rows;
  for (std::size_t i = 0; i < kAlphaGrid.size(); ++i) {
    const double alpha = kAlphaGrid[i];
    const PointStats stats =
        run_point(kSeed + salt, i, RunKind::parity, n, n, 0,
                  NoiseSpec::gue(alpha), circuits, shots, 14, g_pool);
    ReportRow row;
    row.kind = "parity";
    row.n = n;
    row.t = n;
    row.alpha = alpha;
    row.h_mean = stats.mean;
    row.h_stderr = stats.stderr_;
    row.prediction_exact = predict_parity(n, n, alpha).exact;
    rows.push_back(row);
  }
  return rows;
}

Gate criterion_4(double* q_slope_n6) {
  Gate g;
  const auto t0 = std::chrono::steady_clock::now();
  for (int n : {4, 6}) {
    const std::vector<ReportRow> rows = parity_alpha_sweep(n, 600, 32, 4);
    for (const ReportRow& row : rows) {
      if (row.alpha == 0.0) {
        g.require(row.h_mean == 1.0, "n=%d alpha=0 noiseless anchor h=%.6f", n,
                  row.h_mean);
        continue;
      }
      const double dev = std::abs(row.h_mean - row.prediction_exact);
      g.require(dev <= 2.0 * row.h_stderr,
                "n=%d alpha=%.2f: |h-exact| = %.2f sigma (h=%.5f vs %.5f)", n,
                row.alpha, dev / row.h_stderr, row.h_mean, row.prediction_exact);
    }
    const FitResult fit = fit_exponent_series(exponent_series(rows, n, FitKind::q));
    g.require(fit.slope >= 1.9 && fit.slope <= 2.1,
              "n=%d Q/(NT) slope %.4f +- %.4f (window [1.90, 2.10])", n,
              fit.slope, fit.slope_stderr);
    if (n == 6 && q_slope_n6) *q_slope_n6 = fit.slope;
  }
  const double elapsed = seconds_since(t0);
  g.require(elapsed < 1800.0, "runtime %.1f s (limit 1800)", elapsed);
  return g;
}

// --------------------------------------------------------------------------
// 5. swap-only double parity
// --------------------------------------------------------------------------
const std::vector<double> kPGrid{0.0, 0.001, 0.002, 0.003, 0.004, 0.005};

std::vector<ReportRow> swap_p_sweep(int n, int circuits, int shots) {
  std::vector<ReportRow> rows;
  for (std::size_t i = 0; i < kPGrid.size(); ++i) {
    const double p = kPGrid[i];
    const PointStats stats =
        run_point(kSeed + 5, 100 * n + i, RunKind::double_parity, n, n, 0,
                  NoiseSpec::swap_omission(p), circuits, shots, 14, g_pool);
    ReportRow row;
    row.kind = "double-parity";
    row.n = n;
    row.t = n;
    row.alpha = 0.0;
    row.p = p;
    row.h_mean = stats.mean;
    row.h_stderr = stats.stderr_;
    rows.push_back(row);
  }
  return rows;
}

Gate criterion_5(double* w_slope_n6, double* w_slope_n8) {
  Gate g;
  for (int n : {6, 8}) {
    const std::vector<ReportRow> rows = swap_p_sweep(n, 600, 32);
    const FitResult fit = fit_exponent_series(exponent_series(rows, n, FitKind::w));
    const bool gated = n == 8;
    const bool in_window = fit.slope >= 0.42 && fit.slope <= 0.58;
    if (gated) {
      g.require(in_window, "n=%d W/((T-1)w) slope %.4f +- %.4f (window [0.42, 0.58])",
                n, fit.slope, fit.slope_stderr);
    } else {
      g.notes.push_back("    . n=" + std::to_string(n) + " slope " +
                        std::to_string(fit.slope) + " (reported, not gated)");
    }
    if (n == 6 && w_slope_n6) *w_slope_n6 = fit.slope;
    if (n == 8 && w_slope_n8) *w_slope_n8 = fit.slope;
  }
  return g;
}

// --------------------------------------------------------------------------
// 6. combined double parity
// --------------------------------------------------------------------------
Gate criterion_6(double w_slope_n6, double w_slope_n8) {
  Gate g;
  const auto t0 = std::chrono::steady_clock::now();
  for (int n : {6, 8}) {
    // dedicated global-parity sweep for the companion exponent
    const std::vector<ReportRow> parity_rows = parity_alpha_sweep(n, 600, 32, 6);
    const double q_slope =
        fit_exponent_series(exponent_series(parity_rows, n, FitKind::q)).slope;
    const double w_slope = n == 6 ? w_slope_n6 : w_slope_n8;

    std::vector<ReportRow> rows;
    std::uint64_t point = 0;
    for (double alpha : kAlphaGrid) {
      for (double p : kPGrid) {
        const NoiseSpec spec = NoiseSpec::composite(
            {NoiseSpec::gue(alpha), NoiseSpec::swap_omission(p)});
        const PointStats stats =
            run_point(kSeed + 6, 1000 * n + point++, RunKind::double_parity, n,
                      n, 0, spec, 400, 24, 14, g_pool);
        ReportRow row;
        row.kind = "double-parity";
        row.n = n;
        row.t = n;
        row.alpha = alpha;
        row.p = p;
        row.h_mean = stats.mean;
        row.h_stderr = stats.stderr_;
        rows.push_back(row);
      }
    }
    const FitResult fit = fit_exponent_series(
        exponent_series(rows, n, FitKind::q_prime, q_slope, w_slope));
    g.require(fit.slope >= 1.40 && fit.slope <= 1.60,
              "n=%d Q'/(T q) slope %.4f +- %.4f with companions Q=%.3f W=%.3f "
              "(window [1.40, 1.60])",
              n, fit.slope, fit.slope_stderr, q_slope, w_slope);
  }
  const double elapsed = seconds_since(t0);
  g.require(elapsed < 2700.0, "runtime %.1f s (limit 2700)", elapsed);
  return g;
}

// --------------------------------------------------------------------------
// 7. dissipative rescaling
// --------------------------------------------------------------------------
Gate criterion_7() {
  Gate g;
  const double alpha = 0.03;
  const PointStats diss =
      run_point(kSeed + 7, 0, RunKind::parity, 6, 6, 0,
                NoiseSpec::dissipative(alpha, 2), 400, 24, 14, g_pool);
  const PointStats resc =
      run_point(kSeed + 7, 1, RunKind::parity, 6, 6, 0,
                NoiseSpec::gue(alpha * std::sqrt(2.0)), 400, 24, 14, g_pool);
  const double se = std::sqrt(diss.stderr_ * diss.stderr_ +
                              resc.stderr_ * resc.stderr_);
  g.require(std::abs(diss.mean - resc.mean) <= 2.0 * se,
            "dissipative %.5f vs rescaled %.5f: %.2f sigma (limit 2)", diss.mean,
            resc.mean, std::abs(diss.mean - resc.mean) / se);
  return g;
}

// --------------------------------------------------------------------------
// 8. estimator suite
// --------------------------------------------------------------------------
Gate criterion_8() {
  Gate g;
  const int n = 6;
  const int t = 6;

  // (a) depolarizing closed form per m
  for (double eps : {0.02, 0.05}) {
    for (int m = 1; m <= n; ++m) {
      const PointStats stats = run_point(
          kSeed + 8, std::uint64_t(19000 + m + eps * 1000), RunKind::m_parity, n, t, m,
          NoiseSpec::depolarizing(eps), 400, 24, 14, g_pool);
      const double pred = estimator_hum_depolarizing(m, t, eps);
      const double dev = std::abs(stats.mean - pred);
      g.require(dev <= 2.0 * stats.stderr_,
                "depolarizing eps=%.2f m=%d: %.2f sigma (h=%.4f vs %.4f)", eps,
                m, dev / stats.stderr_, stats.mean, pred);
    }
  }

  // (b) measurement-only inversion
  {
    const double q = 0.02;
    std::vector<double> hum, hum_se;
    for (int m = 1; m <= n; ++m) {
      const PointStats stats =
          run_point(kSeed + 88, m, RunKind::m_parity, n, t, m,
                    NoiseSpec::measurement_flip(q), 400, 24, 14, g_pool);
      hum.push_back(stats.mean);
      hum_se.push_back(stats.stderr_);
    }
    const auto [p0, hu] = measurement_inversion(hum, n);
    double var = 0.0;
    const double half_dim = std::pow(2.0, n - 1);
    for (int m = 1; m <= n; ++m) {
      const double v = binom(n, m) / half_dim;
      var += v * v * hum_se[m - 1] * hum_se[m - 1];
    }
    const double p0_se = std::sqrt(var);
    const double exact = std::pow(1.0 - q, n);
    g.require(std::abs(p0 - exact) <= 2.0 * p0_se,
              "inverted survival %.5f vs (1-q)^n %.5f: %.2f sigma", p0, exact,
              std::abs(p0 - exact) / p0_se);
    (void)hu;

    // brute-force confusion-matrix oracle at n <= 6: the inversion is exact
    for (int nn : {2, 4, 6}) {
      const std::int64_t dim = std::int64_t(1) << nn;
      Eigen::MatrixXd w(dim, dim);
      for (std::int64_t i = 0; i < dim; ++i)
        for (std::int64_t j = 0; j < dim; ++j) {
          const int d = __builtin_popcountll(i ^ j);
          w(i, j) = std::pow(q, d) * std::pow(1.0 - q, nn - d);
        }
      const ChannelDescriptor ch = ChannelDescriptor::from_confusion(w);
      std::vector<double> exact_hum;
      for (int m = 1; m <= nn; ++m) {
        double h = 0.0;
        for (int d = 0; d <= nn; ++d)
          h += ch.bitflip_profile[d] * parity_keep_fraction(nn, m, d);
        exact_hum.push_back(h);
      }
      const auto [p0_bf, hu_bf] = measurement_inversion(exact_hum, nn);
      g.require(std::abs(p0_bf - std::pow(1.0 - q, nn)) < 1e-12,
                "brute-force inversion n=%d residual %.2e", nn,
                std::abs(p0_bf - std::pow(1.0 - q, nn)));
      (void)hu_bf;
    }
  }

  // (c) dephasing counterexample
  {
    const double lambda = M_PI / 2;
    for (int m : {1, 3, 6}) {
      const PointStats stats =
          run_point(kSeed + 888, m, RunKind::m_parity, n, t, m,
                    NoiseSpec::dephasing(lambda), 100, 100, 14, g_pool);
      int off = 0;
      for (double h : stats.per_circuit_h) off += h != 1.0;
      g.require(off == 0, "dephasing m=%d: every shot heavy (%d circuits off)",
                m, off);
    }
    const double hu0 = dephasing_counterexample(n, 0.0).hu;
    const double hu1 = dephasing_counterexample(n, lambda).hu;
    g.require(std::abs(hu0 - kPStar) < 1e-12 && hu1 < 0.52,
              "standard-test estimate varies: %.4f at 0 vs %.4f at pi/2", hu0,
              hu1);
  }
  return g;
}

// --------------------------------------------------------------------------
// 9. identity and property suite
// --------------------------------------------------------------------------
Gate criterion_9() {
  Gate g;
  const auto t0 = std::chrono::steady_clock::now();

  const TransferCheckReport rep = layer_transfer_check();
  g.require(rep.ok, "matrix-power %.1e and coefficient %.1e identities",
            rep.max_matrix_power_dev, rep.max_coefficient_dev);

  double pk_dev = 0.0;
  for (int n = 4; n <= 20; n += 2) {
    double total = 0.0;
    for (const auto& [k, p] : pair_mixing_distribution(n)) total += p;
    pk_dev = std::max(pk_dev, std::abs(total - 1.0));
  }
  g.require(pk_dev < 1e-12, "pair-mixing normalization residual %.1e", pk_dev);

  {
    double worst_tv = 0.0;
    std::vector<double> tvs(100, 0.0);
    g_pool.parallel_for(100, [&](std::size_t i) {
      RngStream rng(kSeed + 9, {i});
      const int n = 4 + int(i % 3);
      Circuit base = n % 2 == 0 && i % 2 == 0 ? generate_double_parity(n, 4, rng)
                                              : generate_parity(n, 4, rng);
      Circuit dressed = dress_hidden_parity(base, rng, i % 3 == 0);
      if (i % 3 == 0) {
        // with x insertion the check is the predicate, not the distribution
        const auto probs = simulate_ideal(dressed);
        tvs[i] = 1.0 - heavy_mass(probs, heavy_predicate(dressed));
      } else {
        tvs[i] = total_variation(simulate_ideal(base), simulate_ideal(dressed));
      }
    });
    for (double tv : tvs) worst_tv = std::max(worst_tv, tv);
    g.require(worst_tv < 1e-9, "dressing soundness over 100 instances: %.1e",
              worst_tv);
  }

  {
    RngStream rng(kSeed + 99, {0});
    bool all_ok = true;
    std::vector<Circuit> all;
    all.push_back(generate_standard(4, 4, rng));
    all.push_back(generate_parity(5, 5, rng));
    all.push_back(generate_double_parity(6, 6, rng));
    all.push_back(generate_m_parity(5, 5, 3, rng));
    Circuit base = generate_parity(4, 4, rng);
    all.push_back(dress_hidden_parity(base, rng, true));
    for (const Circuit& c : all) {
      const std::string bytes = serialize(c);
      all_ok = all_ok && serialize(deserialize(bytes)) == bytes;
    }
    g.require(all_ok, "serialization round trips bit-identically");
  }

  {
    double dev = 0.0;
    for (int n : {4, 6, 8, 10})
      for (double a : {0.01, 0.02, 0.05}) {
        dev = std::max(dev, std::abs(extract_q(predict_parity(n, n, a).approx) -
                                     2.0 * a * a * n * n));
        for (double p : {0.001, 0.005}) {
          const double h =
              predict_double_parity(n, n, a, p, w_line(n), 1, true).approx;
          const double qp = extract_q_prime(h, 2.0 * a * a * n * n,
                                            0.5 * p * w_line(n) * (n - 1));
          dev = std::max(dev, std::abs(qp - 1.5 * a * a * n * q_factor(n)));
        }
      }
    g.require(dev < 1e-12, "extract-of-predict identity residual %.1e", dev);
  }

  {
    bool dominated = true;
    for (int n : {4, 6, 8})
      for (int m_slots : {2, 3, 4})
        for (double eps = 0.0; eps <= 1.0 + 1e-9; eps += 0.05) {
          const double p0 = std::pow(1.0 - 0.5 * eps, n);
          const std::vector<double> overlaps(m_slots - 1,
                                             std::pow(4.0 - 3.0 * eps, n));
          const double est = estimator_hu(n, m_slots, p0, overlaps);
          const std::vector<double> p0s(m_slots, p0);
          dominated = dominated && upper_bound_hu(p0s, n, m_slots) >= est - 1e-12;
        }
    g.require(dominated, "upper bound dominates the depolarizing estimator");
  }

  const double elapsed = seconds_since(t0);
  g.require(elapsed < 60.0, "runtime %.1f s (limit 60)", elapsed);
  return g;
}

// --------------------------------------------------------------------------
// 10. declared non-reproducibles and kind agreement
// --------------------------------------------------------------------------
Gate criterion_10() {
  Gate g;
  g.notes.push_back(
      "    . declared: hardware decay curves and absolute passing-noise ranges "
      "depend on proprietary device calibration; covered instead by gates 4-6 "
      "and the kind-agreement scan below");

  // Shared synthetic noise through the real depth-scan pipeline: the three
  // test kinds must stop passing within one scale step of each other.
  RunConfig cfg;
  cfg.n_list = {4};
  cfg.kinds = {"standard", "parity", "double-parity"};
  cfg.scale_grid = {1.0, 2.0, 4.0, 8.0, 16.0};
  cfg.noise = nlohmann::json{
      {"type", "composite"},
      {"parts",
       {nlohmann::json{{"type", "gue"}, {"alpha", 0.02}},
        nlohmann::json{{"type", "swap-omission"}, {"p", 0.004}},
        nlohmann::json{{"type", "measurement-flip"}, {"q", 0.004}}}}};
  cfg.circuits = 120;
  cfg.shots = 40;
  cfg.seed = kSeed + 10;
  const QvScanOutput scan = run_qv_scan(cfg, g_pool);

  std::vector<int> last_pass_index;
  for (const std::string& kind : cfg.kinds) {
    int last_pass = -1;
    const auto& per_scale = scan.summary.at(kind);
    for (std::size_t s = 0; s < per_scale.size(); ++s) {
      const auto& entry = per_scale[s];
      const bool pass = entry["largest_passing_n_mean_only"].get<int>() == 4;
      if (pass) last_pass = static_cast<int>(s);
      const auto& per_n = entry["per_n"][0];
      char buf[160];
      std::snprintf(buf, sizeof(buf),
                    "    . %-13s scale %5.1f: h=%.4f t_cross=%s (%s)",
                    kind.c_str(), entry["scale"].get<double>(),
                    per_n["h_at_square"].get<double>(),
                    per_n["t_cross"].is_null()
                        ? "none"
                        : std::to_string(per_n["t_cross"].get<double>()).c_str(),
                    pass ? "pass" : "fail");
      g.notes.push_back(buf);
    }
    last_pass_index.push_back(last_pass);
  }
  const int lo = *std::min_element(last_pass_index.begin(), last_pass_index.end());
  const int hi = *std::max_element(last_pass_index.begin(), last_pass_index.end());
  g.require(lo >= 0 && hi - lo <= 1,
            "largest passing scale indices within one grid step (spread %d)",
            hi - lo);
  return g;
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* name;
    Gate gate;
    double elapsed;
  };
  std::vector<Entry> entries;

  double q_slope_n6 = 0.0, w_slope_n6 = 0.0, w_slope_n8 = 0.0;
  auto timed = [&](int id, const char* name, auto&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    Gate gate = fn();
    entries.push_back({id, name, std::move(gate), seconds_since(t0)});
  };

  timed(1, "noiseless baselines", [] { return criterion_1(); });
  timed(2, "gaussian-kick channel oracle", [] { return criterion_2(); });
  timed(3, "faulty-swap channel equivalence", [] { return criterion_3(); });
  timed(4, "single-parity decay law",
        [&] { return criterion_4(&q_slope_n6); });
  timed(5, "swap-only double parity",
        [&] { return criterion_5(&w_slope_n6, &w_slope_n8); });
  timed(6, "combined double parity",
        [&] { return criterion_6(w_slope_n6, w_slope_n8); });
  timed(7, "dissipative rescaling", [] { return criterion_7(); });
  timed(8, "estimator suite", [] { return criterion_8(); });
  timed(9, "identity and property suite", [] { return criterion_9(); });
  timed(10, "declared non-reproducibles / kind agreement",
        [] { return criterion_10(); });

  int failures = 0;
  for (const Entry& e : entries) {
    std::printf("[%s] criterion %2d: %s (%.1f s)\n", e.gate.ok ? "PASS" : "FAIL",
                e.id, e.name, e.elapsed);
    for (const std::string& note : e.gate.notes) std::printf("%s\n", note.c_str());
    failures += !e.gate.ok;
  }
  std::printf("%d of %zu criteria passed\n", int(entries.size()) - failures,
              entries.size());
  return failures == 0 ? 0 : 1;
}
