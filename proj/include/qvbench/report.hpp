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

#include <charconv>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qvbench/error.hpp"

namespace qvb {

/// One grid point of a sweep report. NaN marks columns that do not apply.
struct ReportRow {
  std::string kind;
  int n = 0;
  int t = 0;
  int m = 0;  // m-parity only
  double alpha = 0.0;
  double sigma = 0.0;
  double p = 0.0;
  double epsilon = 0.0;
  double lambda = 0.0;
  double scale = std::nan("");
  double flip_q = 0.0;
  int circuits = 0;
  long long shots = 0;
  double h_mean = 0.0;
  double h_stderr = 0.0;
  double prediction_exact = std::nan("");
  double prediction_approx = std::nan("");
  double deviation_sigmas = std::nan("");
  double q_exp = std::nan("");
  double w_exp = std::nan("");
  double q_prime_exp = std::nan("");
};

namespace detail {

inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, ptr);
}

}  // namespace detail

inline const char* kReportColumns =
    "kind,N,T,m,alpha,sigma,p,epsilon,lambda,scale,flip_q,circuits,shots,"
    "h_mean,h_stderr,prediction_exact,prediction_approx,deviation_sigmas,"
    "Q,W,Qprime";

inline std::string report_csv(const std::vector<ReportRow>& rows) {
  std::string out = kReportColumns;
  out += '\n';
  for (const ReportRow& r : rows) {
    out += r.kind;
    out += ',' + std::to_string(r.n) + ',' + std::to_string(r.t) + ',' +
           std::to_string(r.m);
    for (double v : {r.alpha, r.sigma, r.p, r.epsilon, r.lambda, r.scale, r.flip_q})
      out += ',' + detail::format_double(v);
    out += ',' + std::to_string(r.circuits) + ',' + std::to_string(r.shots);
    for (double v : {r.h_mean, r.h_stderr, r.prediction_exact, r.prediction_approx,
                     r.deviation_sigmas, r.q_exp, r.w_exp, r.q_prime_exp})
      out += ',' + detail::format_double(v);
    out += '\n';
  }
  return out;
}

namespace detail {

inline nlohmann::json nan_to_null(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

}  // namespace detail

inline nlohmann::json report_json(const std::vector<ReportRow>& rows) {
  nlohmann::json out = nlohmann::json::array();
  for (const ReportRow& r : rows) {
    nlohmann::json j;
    j["kind"] = r.kind;
    j["N"] = r.n;
    j["T"] = r.t;
    j["m"] = r.m;
    j["alpha"] = r.alpha;
    j["sigma"] = r.sigma;
    j["p"] = r.p;
    j["epsilon"] = r.epsilon;
    j["lambda"] = r.lambda;
    j["scale"] = detail::nan_to_null(r.scale);
    j["flip_q"] = r.flip_q;
    j["circuits"] = r.circuits;
    j["shots"] = r.shots;
    j["h_mean"] = r.h_mean;
    j["h_stderr"] = r.h_stderr;
    j["prediction_exact"] = detail::nan_to_null(r.prediction_exact);
    j["prediction_approx"] = detail::nan_to_null(r.prediction_approx);
    j["deviation_sigmas"] = detail::nan_to_null(r.deviation_sigmas);
    j["Q"] = detail::nan_to_null(r.q_exp);
    j["W"] = detail::nan_to_null(r.w_exp);
    j["Qprime"] = detail::nan_to_null(r.q_prime_exp);
    out.push_back(std::move(j));
  }
  return out;
}

inline std::vector<ReportRow> report_rows_from_json(const nlohmann::json& doc) {
  if (!doc.is_array()) throw Error(ErrorCode::parse, "report must be a JSON array");
  auto num = [](const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || j[key].is_null()) return std::nan("");
    return j[key].get<double>();
  };
  std::vector<ReportRow> rows;
  for (const auto& j : doc) {
    ReportRow r;
    r.kind = j.at("kind").get<std::string>();
    r.n = j.at("N").get<int>();
    r.t = j.at("T").get<int>();
    r.m = j.value("m", 0);
    r.alpha = num(j, "alpha");
    r.sigma = num(j, "sigma");
    r.p = num(j, "p");
    r.epsilon = num(j, "epsilon");
    r.lambda = num(j, "lambda");
    r.scale = num(j, "scale");
    r.flip_q = num(j, "flip_q");
    r.circuits = j.at("circuits").get<int>();
    r.shots = j.at("shots").get<long long>();
    r.h_mean = j.at("h_mean").get<double>();
    r.h_stderr = j.at("h_stderr").get<double>();
    r.prediction_exact = num(j, "prediction_exact");
    r.prediction_approx = num(j, "prediction_approx");
    r.deviation_sigmas = num(j, "deviation_sigmas");
    r.q_exp = num(j, "Q");
    r.w_exp = num(j, "W");
    r.q_prime_exp = num(j, "Qprime");
    rows.push_back(std::move(r));
  }
  return rows;
}

inline void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::io, "io-error: cannot open " + path);
  f << content;
  if (!f) throw Error(ErrorCode::io, "io-error: write failed for " + path);
}

}  // namespace qvb
