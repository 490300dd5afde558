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

#include "qvbench/config.hpp"

#include "qvbench/analytic.hpp"
#include "qvbench/report.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include <doctest.h>

using namespace qvb;
using nlohmann::json;

TEST_CASE("run configuration parsing") {
  SUBCASE("a full document round trips") {
    const json doc = {
        {"kind", "double-parity"}, {"n_list", {4, 6}},  {"t_rule", {2, 4}},
        {"noise", {{"type", "gue"}, {"alpha", 0.05}}},  {"circuits", 50},
        {"shots", 25},             {"seed", 9},         {"out", "results"},
        {"n_cap", 12},             {"workers", 3}};
    const RunConfig cfg = parse_run_config(doc);
    CHECK(cfg.kind == RunKind::double_parity);
    CHECK(cfg.n_list == std::vector<int>{4, 6});
    CHECK(!cfg.square);
    CHECK(cfg.t_list == std::vector<int>{2, 4});
    CHECK(cfg.circuits == 50);
    CHECK(cfg.seed == 9);
    CHECK(cfg.n_cap == 12);
  }
  SUBCASE("unknown keys name the offender") {
    const json doc = {{"kind", "parity"}, {"n_list", {4}}, {"shotss", 3}};
    CHECK_THROWS_WITH_AS(parse_run_config(doc),
                         "config-error: unknown key \"shotss\"", Error);
  }
  SUBCASE("invalid kind strings are config errors") {
    const json doc = {{"kind", "sideways"}, {"n_list", {4}}};
    CHECK_THROWS_AS(parse_run_config(doc), Error);
  }
  SUBCASE("n_list is mandatory and sane") {
    CHECK_THROWS_AS(parse_run_config(json{{"kind", "parity"}}), Error);
    CHECK_THROWS_AS(parse_run_config(json{{"kind", "parity"}, {"n_list", {1}}}),
                    Error);
  }
}

TEST_CASE("noise spec json forms") {
  CHECK(resolve(noise_spec_from_json({{"type", "ideal"}})).ideal());

  const ResolvedNoise gue =
      resolve(noise_spec_from_json({{"type", "gue"}, {"alpha", 0.07}}));
  CHECK(gue.alpha == 0.07);

  const ResolvedNoise diss = resolve(noise_spec_from_json(
      {{"type", "dissipative"}, {"alpha", 0.03}, {"env_dim", 2}}));
  CHECK(diss.env_dim == 2);

  const ResolvedNoise flips = resolve(noise_spec_from_json(
      {{"type", "measurement-flip"}, {"per_qubit", {0.01, 0.02, 0.03}}}));
  CHECK(flips.meas_flip.size() == 3);

  json scale_doc;
  scale_doc["type"] = "scale";
  scale_doc["factor"] = 0.5;
  scale_doc["inner"]["type"] = "composite";
  scale_doc["inner"]["parts"] = json::array(
      {json{{"type", "gue"}, {"alpha", 0.1}},
       json{{"type", "swap-omission"}, {"p", 0.02}}});
  const ResolvedNoise scaled = resolve(noise_spec_from_json(scale_doc));
  CHECK(scaled.alpha == doctest::Approx(0.05));
  CHECK(scaled.omit_p == doctest::Approx(0.01));

  CHECK_THROWS_AS(noise_spec_from_json({{"type", "mystery"}}), Error);
  CHECK_THROWS_AS(noise_spec_from_json({{"type", "gue"}}), Error);
  CHECK_THROWS_AS(noise_spec_from_json(json::array()), Error);
}

TEST_CASE("sweep grids expand in document order, last key fastest") {
  const json noise = {
      {"type", "composite"},
      {"parts", {json{{"type", "gue"}, {"alpha", {0.0, 0.1}}},
                 json{{"type", "swap-omission"}, {"p", {0.0, 0.01, 0.02}}}}}};
  const std::vector<NoisePoint> grid = expand_noise_grid(noise);
  REQUIRE(grid.size() == 6);
  CHECK(grid[0].params.at("alpha") == 0.0);
  CHECK(grid[0].params.at("p") == 0.0);
  CHECK(grid[1].params.at("p") == 0.01);
  CHECK(grid[2].params.at("p") == 0.02);
  CHECK(grid[3].params.at("alpha") == 0.1);
  CHECK(grid[3].params.at("p") == 0.0);
  for (const NoisePoint& pt : grid) {
    const ResolvedNoise r = resolve(pt.spec);
    CHECK(r.alpha == pt.params.at("alpha"));
    CHECK(r.omit_p == pt.params.at("p"));
  }
}

TEST_CASE("single points expand to themselves") {
  const json noise = {{"type", "depolarizing"}, {"epsilon", 0.25}};
  const std::vector<NoisePoint> grid = expand_noise_grid(noise);
  REQUIRE(grid.size() == 1);
  CHECK(grid[0].params.empty());
  CHECK(resolve(grid[0].spec).epsilon == 0.25);
}

#ifdef QVBENCH_CLI_PATH

namespace {

namespace fs = std::filesystem;

int run_cli(const std::string& args) {
  const std::string cmd = std::string(QVBENCH_CLI_PATH) + " " + args +
                          " > /dev/null 2> /dev/null";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  return std::string(std::istreambuf_iterator<char>(f), {});
}

}  // namespace

TEST_CASE("command-line tool end to end") {
  const fs::path dir = fs::temp_directory_path() / "qvbench_cli_test";
  fs::remove_all(dir);
  fs::create_directories(dir);

  const json run_cfg = {{"kind", "parity"},
                        {"n_list", {4}},
                        {"noise", {{"type", "gue"}, {"alpha", {0.0, 0.1}}}},
                        {"circuits", 8},
                        {"shots", 8},
                        {"seed", 5}};
  const fs::path cfg_path = dir / "run.json";
  std::ofstream(cfg_path) << run_cfg.dump();

  SUBCASE("run twice produces identical bytes") {
    REQUIRE(run_cli("run --config " + cfg_path.string() + " --out " +
                    (dir / "a").string()) == 0);
    REQUIRE(run_cli("run --config " + cfg_path.string() + " --out " +
                    (dir / "b").string()) == 0);
    CHECK(slurp(dir / "a" / "report.csv") == slurp(dir / "b" / "report.csv"));
    CHECK(slurp(dir / "a" / "report.json") == slurp(dir / "b" / "report.json"));
  }

  SUBCASE("generate writes loadable circuits and a manifest") {
    REQUIRE(run_cli("generate --config " + cfg_path.string() + " --out " +
                    (dir / "gen").string()) == 0);
    const json manifest = json::parse(slurp(dir / "gen" / "manifest.json"));
    REQUIRE(manifest["files"].size() == 8);
    const std::string first = manifest["files"][0].get<std::string>();
    const std::string bytes = slurp(dir / "gen" / first);
    CHECK(json::parse(bytes)["kind"] == "parity");
    // regenerating with the same seed is byte-identical
    REQUIRE(run_cli("generate --config " + cfg_path.string() + " --out " +
                    (dir / "gen2").string()) == 0);
    CHECK(slurp(dir / "gen2" / first) == bytes);
  }

  SUBCASE("config errors exit with code 2") {
    const fs::path bad = dir / "bad.json";
    std::ofstream(bad) << R"({"kind": "nope", "n_list": [4]})";
    CHECK(run_cli("run --config " + bad.string()) == 2);
  }

  SUBCASE("estimation on unsupported noise exits with code 4") {
    const json est_cfg = {{"kind", "m-parity"},
                          {"n_list", {4}},
                          {"noise", {{"type", "gue"}, {"alpha", 0.05}}},
                          {"circuits", 4},
                          {"shots", 4},
                          {"seed", 5}};
    const fs::path est_path = dir / "est.json";
    std::ofstream(est_path) << est_cfg.dump();
    CHECK(run_cli("estimate --config " + est_path.string() + " --out " +
                  (dir / "est").string()) == 4);
  }

  SUBCASE("estimate runs the ideal protocol end to end") {
    const json est_cfg = {{"kind", "m-parity"},
                          {"n_list", {4}},
                          {"noise", {{"type", "ideal"}}},
                          {"circuits", 8},
                          {"shots", 8},
                          {"seed", 5}};
    const fs::path est_path = dir / "est_ideal.json";
    std::ofstream(est_path) << est_cfg.dump();
    REQUIRE(run_cli("estimate --config " + est_path.string() + " --out " +
                    (dir / "est_ideal").string()) == 0);
    const json doc = json::parse(slurp(dir / "est_ideal" / "estimate.json"));
    CHECK(doc["family"] == "ideal");
    CHECK(doc["hum_mean"].size() == 4);
    for (const auto& h : doc["hum_mean"]) CHECK(h.get<double>() == 1.0);
    CHECK(doc["hu_inferred"].get<double>() == doctest::Approx(qvb::kPStar));
  }

  SUBCASE("width over the statevector cap exits with code 3") {
    const json wide = {{"kind", "parity"},
                       {"n_list", {16}},
                       {"noise", {{"type", "ideal"}}},
                       {"circuits", 2},
                       {"shots", 2},
                       {"seed", 5}};
    const fs::path wide_path = dir / "wide.json";
    std::ofstream(wide_path) << wide.dump();
    CHECK(run_cli("run --config " + wide_path.string() + " --out " +
                  (dir / "wide").string()) == 3);
  }

  SUBCASE("fit recovers the canonical slope from a synthetic report") {
    std::vector<qvb::ReportRow> rows;
    for (double a : {0.0, 0.01, 0.02, 0.03, 0.04, 0.05}) {
      qvb::ReportRow r;
      r.kind = "parity";
      r.n = 6;
      r.t = 6;
      r.alpha = a;
      r.h_mean = qvb::predict_parity(6, 6, a).approx;
      r.h_stderr = 1e-9;
      r.circuits = 1;
      r.shots = 1;
      rows.push_back(r);
    }
    const fs::path report = dir / "synthetic_report.json";
    std::ofstream(report) << qvb::report_json(rows).dump();
    REQUIRE(run_cli("fit --input " + report.string() + " --kind Q --out " +
                    (dir / "fit").string()) == 0);
    const json fit = json::parse(slurp(dir / "fit" / "fit_Q.json"));
    CHECK(fit["results"][0]["slope"].get<double>() == doctest::Approx(2.0));
    CHECK(fit["results"][0]["pass"].get<bool>());
    // a report with too few usable points is a fit error
    rows.resize(2);
    std::ofstream(report) << qvb::report_json(rows).dump();
    CHECK(run_cli("fit --input " + report.string() + " --kind Q --out " +
                  (dir / "fit").string()) == 4);
  }

  SUBCASE("qv scan emits curves and a summary") {
    const json qv_cfg = {{"kind", "parity"},
                         {"kinds", {"parity"}},
                         {"n_list", {4}},
                         {"scale_grid", {1.0}},
                         {"noise", {{"type", "gue"}, {"alpha", 0.05}}},
                         {"circuits", 8},
                         {"shots", 8},
                         {"seed", 5}};
    const fs::path qv_path = dir / "qv.json";
    std::ofstream(qv_path) << qv_cfg.dump();
    REQUIRE(run_cli("qv --config " + qv_path.string() + " --out " +
                    (dir / "qv").string()) == 0);
    const json summary = json::parse(slurp(dir / "qv" / "qv_summary.json"));
    CHECK(summary.contains("parity"));
    CHECK(summary["parity"][0].contains("largest_passing_n"));
    CHECK(!slurp(dir / "qv" / "qv_curves.csv").empty());
    CHECK(slurp(dir / "qv" / "qv_tcross.csv").find("t_cross_over_n") !=
          std::string::npos);
  }
}

#endif  // QVBENCH_CLI_PATH
