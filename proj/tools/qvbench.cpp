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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qvbench/circuit_io.hpp"
#include "qvbench/config.hpp"
#include "qvbench/report.hpp"
#include "qvbench/runner.hpp"
#include "qvbench/sim.hpp"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CommonFlags {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<int> workers;
  std::optional<int> n_cap;
};

json load_json_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw qvb::Error(qvb::ErrorCode::io, "io-error: cannot open " + path);
  json doc = json::parse(f, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded())
    throw qvb::Error(qvb::ErrorCode::config,
                     "config-error: " + path + " is not valid JSON");
  return doc;
}

qvb::RunConfig load_config(const CommonFlags& flags) {
  qvb::RunConfig cfg = qvb::parse_run_config(load_json_file(flags.config_path));
  if (const char* env = std::getenv("QVBENCH_SEED"))
    cfg.seed = std::strtoull(env, nullptr, 10);
  if (const char* env = std::getenv("QVBENCH_WORKERS"))
    cfg.workers = std::atoi(env);
  if (flags.seed) cfg.seed = *flags.seed;
  if (flags.out_dir) cfg.out_dir = *flags.out_dir;
  if (flags.workers) cfg.workers = *flags.workers;
  if (flags.n_cap) cfg.n_cap = *flags.n_cap;
  return cfg;
}

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "JSON run configuration")
      ->required();
  cmd->add_option("--seed", flags.seed, "override the configured seed");
  cmd->add_option("--out", flags.out_dir, "override the output directory");
  cmd->add_option("--workers", flags.workers, "worker thread count (0 = auto)");
  cmd->add_option("--n-cap", flags.n_cap, "statevector width cap");
}

void write_outputs(const qvb::RunConfig& cfg, const qvb::SweepOutput& sweep,
                   const std::string& stem) {
  fs::create_directories(cfg.out_dir);
  const std::string csv_path = cfg.out_dir + "/" + stem + ".csv";
  const std::string json_path = cfg.out_dir + "/" + stem + ".json";
  const std::string raw_path = cfg.out_dir + "/" + stem + "_raw.ndjson";
  qvb::write_text_file(csv_path, qvb::report_csv(sweep.rows));
  qvb::write_text_file(json_path, qvb::report_json(sweep.rows).dump(2) + "\n");
  qvb::write_text_file(raw_path, sweep.raw_ndjson);
  std::cout << "wrote " << csv_path << " (" << sweep.rows.size() << " rows), "
            << json_path << ", " << raw_path << "\n";
}

int cmd_generate(const CommonFlags& flags) {
  const qvb::RunConfig cfg = load_config(flags);
  fs::create_directories(cfg.out_dir);
  json manifest;
  manifest["format_version"] = qvb::kCircuitFormatVersion;
  manifest["seed"] = cfg.seed;
  manifest["kind"] = qvb::to_string(cfg.kind);
  json files = json::array();
  for (int n : cfg.n_list) {
    const std::vector<int> ts = cfg.square ? std::vector<int>{n} : cfg.t_list;
    for (int t : ts) {
      for (int i = 0; i < cfg.circuits; ++i) {
        qvb::RngStream rng(cfg.seed,
                           {qvb::detail::kStreamGenerate,
                            std::uint64_t(cfg.kind), 0, std::uint64_t(n),
                            std::uint64_t(t), std::uint64_t(cfg.m_subset),
                            std::uint64_t(i)});
        int m = cfg.m_subset;
        if (cfg.kind == qvb::RunKind::m_parity && m < 1)
          throw qvb::Error(qvb::ErrorCode::config,
                           "config-error: m-parity generation needs \"m\"");
        qvb::Circuit c =
            qvb::generate_run_circuit(cfg.kind, n, t, m, cfg.insert_x, rng);
        c.seed = cfg.seed;
        char name[128];
        std::snprintf(name, sizeof(name), "circuit_%s_n%02d_t%02d_%04d.json",
                      qvb::to_string(cfg.kind).c_str(), n, t, i);
        qvb::write_text_file(cfg.out_dir + "/" + name, qvb::serialize(c) + "\n");
        files.push_back(name);
      }
    }
  }
  manifest["files"] = std::move(files);
  qvb::write_text_file(cfg.out_dir + "/manifest.json", manifest.dump(2) + "\n");
  std::cout << "wrote " << manifest["files"].size() << " circuits to "
            << cfg.out_dir << "\n";
  return 0;
}

int cmd_run(const CommonFlags& flags) {
  const qvb::RunConfig cfg = load_config(flags);
  const qvb::WorkerPool pool(cfg.workers);
  const qvb::SweepOutput sweep = qvb::run_sweep(cfg, pool);
  write_outputs(cfg, sweep, "report");
  return 0;
}

struct FitFlags {
  std::string input;
  std::string kind;
  std::string out_dir = "out";
  std::optional<double> q_slope;
  std::optional<double> w_slope;
  std::string q_fit_file;
  std::string w_fit_file;
};

double slope_from_fit_file(const std::string& path, int n) {
  const json doc = load_json_file(path);
  for (const auto& entry : doc.at("results")) {
    if (entry.at("N").get<int>() == n) return entry.at("slope").get<double>();
  }
  throw qvb::Error(qvb::ErrorCode::fit,
                   "fit-error: no companion slope for N=" + std::to_string(n) +
                       " in " + path);
}

int cmd_fit(const FitFlags& flags) {
  const qvb::FitKind kind = qvb::fit_kind_from_string(flags.kind);
  std::vector<qvb::ReportRow> rows =
      qvb::report_rows_from_json(load_json_file(flags.input));
  const std::string want_kind =
      kind == qvb::FitKind::q ? "parity" : "double-parity";
  std::vector<qvb::ReportRow> filtered;
  std::vector<int> ns;
  for (const auto& r : rows) {
    if (r.kind != want_kind) continue;
    filtered.push_back(r);
    if (std::find(ns.begin(), ns.end(), r.n) == ns.end()) ns.push_back(r.n);
  }
  if (filtered.empty())
    throw qvb::Error(qvb::ErrorCode::fit,
                     "fit-error: no usable rows of kind " + want_kind);
  std::sort(ns.begin(), ns.end());

  const auto [lo, hi] = qvb::fit_slope_window(kind);
  json results = json::array();
  for (int n : ns) {
    double q_slope = 0.0, w_slope = 0.0;
    if (kind == qvb::FitKind::q_prime) {
      q_slope = flags.q_slope ? *flags.q_slope
                              : slope_from_fit_file(flags.q_fit_file, n);
      w_slope = flags.w_slope ? *flags.w_slope
                              : slope_from_fit_file(flags.w_fit_file, n);
    }
    const qvb::ExponentSeries series =
        qvb::exponent_series(filtered, n, kind, q_slope, w_slope);
    const qvb::FitResult fit = qvb::fit_exponent_series(series);
    const bool pass = fit.slope >= lo && fit.slope <= hi;
    std::printf("%s fit N=%d: slope %.4f +- %.4f, intercept %.2e (window "
                "[%.2f, %.2f]) %s\n",
                flags.kind.c_str(), n, fit.slope, fit.slope_stderr,
                fit.intercept, lo, hi, pass ? "PASS" : "FAIL");
    json entry;
    entry["N"] = n;
    entry["slope"] = fit.slope;
    entry["slope_stderr"] = fit.slope_stderr;
    entry["intercept"] = fit.intercept;
    entry["intercept_stderr"] = fit.intercept_stderr;
    entry["points"] = series.xs.size();
    entry["window"] = {lo, hi};
    entry["pass"] = pass;
    results.push_back(std::move(entry));
  }
  json doc;
  doc["fit_kind"] = flags.kind;
  doc["results"] = std::move(results);
  fs::create_directories(flags.out_dir);
  const std::string path = flags.out_dir + "/fit_" + flags.kind + ".json";
  qvb::write_text_file(path, doc.dump(2) + "\n");
  std::cout << "wrote " << path << "\n";
  return 0;
}

int cmd_qv(const CommonFlags& flags) {
  const qvb::RunConfig cfg = load_config(flags);
  const qvb::WorkerPool pool(cfg.workers);
  const qvb::QvScanOutput scan = qvb::run_qv_scan(cfg, pool);

  std::vector<qvb::ReportRow> rows;
  for (const qvb::QvCell& cell : scan.cells) {
    for (const qvb::QvCurvePoint& pt : cell.curve) {
      qvb::ReportRow row;
      row.kind = cell.kind;
      row.n = cell.n;
      row.t = pt.t;
      row.scale = cell.scale;
      row.circuits = cfg.circuits;
      row.shots = static_cast<long long>(cfg.circuits) * cfg.shots;
      row.h_mean = pt.h_mean;
      row.h_stderr = pt.h_stderr;
      rows.push_back(row);
    }
  }
  fs::create_directories(cfg.out_dir);
  qvb::write_text_file(cfg.out_dir + "/qv_curves.csv", qvb::report_csv(rows));
  qvb::write_text_file(cfg.out_dir + "/qv_summary.json",
                       scan.summary.dump(2) + "\n");
  {
    std::string tcross = "kind,scale,N,t_cross,t_cross_over_n,pass_two_sigma,"
                         "pass_mean_only\n";
    for (const qvb::QvCell& cell : scan.cells) {
      tcross += cell.kind + ',' + qvb::detail::format_double(cell.scale) + ',' +
                std::to_string(cell.n) + ',' +
                qvb::detail::format_double(cell.t_cross) + ',' +
                qvb::detail::format_double(cell.t_cross / cell.n) + ',' +
                (cell.square_decision.pass ? "1" : "0") + ',' +
                (cell.square_decision.pass_mean_only ? "1" : "0") + '\n';
    }
    qvb::write_text_file(cfg.out_dir + "/qv_tcross.csv", tcross);
  }
  std::cout << "wrote " << cfg.out_dir
            << "/qv_curves.csv, qv_tcross.csv and qv_summary.json\n";
  for (auto it = scan.summary.begin(); it != scan.summary.end(); ++it) {
    for (const auto& entry : it.value()) {
      std::printf("%-14s scale %-8g largest passing n: %d (mean-only: %d)\n",
                  it.key().c_str(), entry["scale"].get<double>(),
                  entry["largest_passing_n"].get<int>(),
                  entry["largest_passing_n_mean_only"].get<int>());
    }
  }
  return 0;
}

int cmd_estimate(const CommonFlags& flags) {
  const qvb::RunConfig cfg = load_config(flags);
  const qvb::WorkerPool pool(cfg.workers);
  const qvb::EstimateOutput est = qvb::run_estimate(cfg, pool);

  json doc;
  doc["N"] = est.n;
  doc["T"] = est.t;
  doc["family"] = est.family;
  doc["param"] = est.param;
  doc["hum_mean"] = est.hum_mean;
  doc["hum_stderr"] = est.hum_stderr;
  doc["hum_prediction"] = est.hum_prediction;
  auto put = [&](const char* key, double v) {
    doc[key] = std::isnan(v) ? json(nullptr) : json(v);
  };
  put("p0_inferred", est.p0_inferred);
  put("p0_stderr", est.p0_stderr);
  put("p0_exact", est.p0_exact);
  put("hu_inferred", est.hu_inferred);
  put("hu_formula", est.hu_formula);
  put("hu_direct_mean", est.hu_direct_mean);
  put("hu_direct_stderr", est.hu_direct_stderr);
  fs::create_directories(cfg.out_dir);
  const std::string path = cfg.out_dir + "/estimate.json";
  qvb::write_text_file(path, doc.dump(2) + "\n");

  std::printf("family %s (param %g), N=%d, M=%d\n", est.family.c_str(),
              est.param, est.n, est.t);
  for (int m = 1; m <= est.n; ++m)
    std::printf("  m=%d: h = %.4f +- %.4f (prediction %.4f)\n", m,
                est.hum_mean[m - 1], est.hum_stderr[m - 1],
                est.hum_prediction[m - 1]);
  if (!std::isnan(est.p0_inferred))
    std::printf("  inferred survival p0 = %.5f +- %.5f (exact %.5f)\n",
                est.p0_inferred, est.p0_stderr, est.p0_exact);
  if (!std::isnan(est.hu_inferred))
    std::printf("  inferred h_U = %.4f\n", est.hu_inferred);
  std::printf("  formula h_U = %.4f, direct standard run h = %.4f +- %.4f\n",
              est.hu_formula, est.hu_direct_mean, est.hu_direct_stderr);
  std::cout << "wrote " << path << "\n";
  return 0;
}

int cmd_verify(int mc_samples, std::uint64_t seed) {
  int failures = 0;
  auto check = [&](const char* name, bool ok, double value) {
    std::printf("[%s] %-52s %.3e\n", ok ? " ok " : "FAIL", name, value);
    if (!ok) ++failures;
  };

  const qvb::TransferCheckReport transfer = qvb::layer_transfer_check();
  check("matrix power identity", transfer.max_matrix_power_dev < 1e-10,
        transfer.max_matrix_power_dev);
  check("layer coefficient identities", transfer.max_coefficient_dev < 1e-12,
        transfer.max_coefficient_dev);

  double pk_dev = 0.0;
  for (int n = 4; n <= 20; n += 2) {
    double total = 0.0;
    for (const auto& [k, p] : qvb::pair_mixing_distribution(n)) total += p;
    pk_dev = std::max(pk_dev, std::abs(total - 1.0));
  }
  check("pair-mixing distribution normalization", pk_dev < 1e-12, pk_dev);

  {
    qvb::RngStream rng(seed, {0xc0ffeeULL});
    const qvb::ChannelAverage avg =
        qvb::average_gue_channel_stats(0.1, mc_samples, rng);
    const qvb::CMatrix theory = qvb::gue_channel_theory(0.1);
    double worst = 0.0;
    for (int r = 0; r < 16; ++r)
      for (int c = 0; c < 16; ++c) {
        const double dev = std::abs(avg.mean(r, c) - theory(r, c));
        const double se = std::max(avg.stderr_(r, c), 1e-12);
        worst = std::max(worst, dev / se);
      }
    check("gaussian kick channel average (5 sigma)", worst < 5.0, worst);
  }
  {
    qvb::RngStream rng(seed, {0xbeefULL});
    const qvb::ChannelAverage avg =
        qvb::average_faulty_swap_channel_stats(0.1, mc_samples, rng);
    const qvb::CMatrix theory = qvb::faulty_swap_channel_theory(0.1);
    double worst = 0.0;
    for (int r = 0; r < 16; ++r)
      for (int c = 0; c < 16; ++c) {
        const double dev = std::abs(avg.mean(r, c) - theory(r, c));
        const double se = std::max(avg.stderr_(r, c), 1e-12);
        worst = std::max(worst, dev / se);
      }
    check("faulty-swap channel average (5 sigma)", worst < 5.0, worst);
  }

  {
    double dev = 0.0;
    for (int n : {4, 6, 8})
      for (double alpha : {0.01, 0.03, 0.05}) {
        const double h = qvb::predict_parity(n, n, alpha).approx;
        dev = std::max(dev,
                       std::abs(qvb::extract_q(h) - 2.0 * alpha * alpha * n * n));
      }
    for (int n : {4, 6, 8})
      for (double p : {0.002, 0.005}) {
        const double h =
            qvb::predict_double_parity(n, n, 0.0, p, qvb::w_line(n)).swap_only;
        dev = std::max(dev,
                       std::abs(qvb::extract_w(h) - 0.5 * p * qvb::w_line(n) * n));
      }
    check("extract-of-predict identity", dev < 1e-12, dev);
  }

  {
    double tv = 0.0;
    for (int n : {4, 6}) {
      qvb::RngStream rng(seed, {0xd0d0ULL, std::uint64_t(n)});
      qvb::Circuit base = qvb::generate_parity(n, n, rng);
      qvb::Circuit dressed = qvb::dress_hidden_parity(base, rng);
      const auto pa = qvb::simulate_ideal(base);
      const auto pb = qvb::simulate_ideal(dressed);
      tv = std::max(tv, qvb::total_variation(pa, pb));
    }
    check("hidden-parity dressing soundness (TV)", tv < 1e-9, tv);
  }

  {
    qvb::RngStream rng(seed, {0x5e7ULL});
    qvb::Circuit c = qvb::generate_double_parity(6, 6, rng);
    const std::string bytes = qvb::serialize(c);
    const std::string again = qvb::serialize(qvb::deserialize(bytes));
    check("serialization round trip", bytes == again, double(bytes.size()));
  }

  {
    double gap = 0.0;
    bool dominated = true;
    for (int n : {4, 6, 8})
      for (int m : {2, 3, 4})
        for (double eps = 0.0; eps <= 1.0; eps += 0.05) {
          const double p0 = std::pow(1.0 - 0.5 * eps, n);
          std::vector<double> overlaps(m - 1, std::pow(4.0 - 3.0 * eps, n));
          const double est = qvb::estimator_hu(n, m, p0, overlaps);
          std::vector<double> p0s(m, p0);
          const double bound = qvb::upper_bound_hu(p0s, n, m);
          gap = std::min(gap, bound - est);
          dominated = dominated && bound >= est - 1e-12;
        }
    check("upper bound dominates depolarizing estimator", dominated, gap);
  }

  std::printf("%s\n", failures == 0 ? "verify: all checks passed"
                                    : "verify: FAILURES present");
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parity-structured quantum volume benchmarking toolkit"};
  app.require_subcommand(1);

  CommonFlags gen_flags, run_flags, qv_flags, est_flags;
  FitFlags fit_flags;
  int verify_samples = 20000;
  std::uint64_t verify_seed = 1;

  add_common_flags(app.add_subcommand("generate", "write circuit files"),
                   gen_flags);
  add_common_flags(app.add_subcommand("run", "run a sweep and write reports"),
                   run_flags);
  auto* fit_cmd = app.add_subcommand("fit", "fit decay exponents from a report");
  fit_cmd->add_option("--input", fit_flags.input, "report JSON file")->required();
  fit_cmd->add_option("--kind", fit_flags.kind, "Q, W or Qprime")->required();
  fit_cmd->add_option("--out", fit_flags.out_dir, "output directory");
  fit_cmd->add_option("--q-slope", fit_flags.q_slope, "companion Q slope");
  fit_cmd->add_option("--w-slope", fit_flags.w_slope, "companion W slope");
  fit_cmd->add_option("--q-fit", fit_flags.q_fit_file, "companion Q fit JSON");
  fit_cmd->add_option("--w-fit", fit_flags.w_fit_file, "companion W fit JSON");
  add_common_flags(app.add_subcommand("qv", "scaled-noise quantum volume scan"),
                   qv_flags);
  add_common_flags(
      app.add_subcommand("estimate", "m-sweep heavy-output estimation"),
      est_flags);
  auto* verify_cmd =
      app.add_subcommand("verify", "run the built-in oracle checks");
  verify_cmd->add_option("--samples", verify_samples, "Monte Carlo samples");
  verify_cmd->add_option("--seed", verify_seed, "Monte Carlo seed");

  try {
    app.parse(argc, argv);
    if (app.got_subcommand("generate")) return cmd_generate(gen_flags);
    if (app.got_subcommand("run")) return cmd_run(run_flags);
    if (app.got_subcommand("fit")) return cmd_fit(fit_flags);
    if (app.got_subcommand("qv")) return cmd_qv(qv_flags);
    if (app.got_subcommand("estimate")) return cmd_estimate(est_flags);
    if (app.got_subcommand("verify"))
      return cmd_verify(verify_samples, verify_seed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const qvb::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.exit_code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
