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

#include <functional>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "qvbench/error.hpp"
#include "qvbench/noise.hpp"

namespace qvb {

/// Circuit families selectable from a run configuration. The hidden kinds
/// generate the structured circuit first and then hide its block structure
/// behind cancelling single-qubit dressings.
enum class RunKind {
  standard,
  parity,
  double_parity,
  m_parity,
  hidden_parity,
  hidden_double_parity,
};

inline std::string to_string(RunKind k) {
  switch (k) {
    case RunKind::standard: return "standard";
    case RunKind::parity: return "parity";
    case RunKind::double_parity: return "double-parity";
    case RunKind::m_parity: return "m-parity";
    case RunKind::hidden_parity: return "hidden-parity";
    case RunKind::hidden_double_parity: return "hidden-double-parity";
  }
  return "?";
}

inline RunKind run_kind_from_string(const std::string& s) {
  if (s == "standard") return RunKind::standard;
  if (s == "parity") return RunKind::parity;
  if (s == "double-parity") return RunKind::double_parity;
  if (s == "m-parity") return RunKind::m_parity;
  if (s == "hidden-parity") return RunKind::hidden_parity;
  if (s == "hidden-double-parity") return RunKind::hidden_double_parity;
  throw Error(ErrorCode::config, "config-error: unknown kind \"" + s + "\"");
}

/// Circuit-kind threshold bucket of a run kind.
inline CircuitKind decision_kind(RunKind k) {
  switch (k) {
    case RunKind::double_parity:
    case RunKind::hidden_double_parity:
      return CircuitKind::double_parity;
    case RunKind::standard:
      return CircuitKind::standard;
    case RunKind::m_parity:
      return CircuitKind::m_parity;
    default:
      return CircuitKind::parity;
  }
}

// ---------------------------------------------------------------------------
// Noise specs as tagged JSON objects
// ---------------------------------------------------------------------------

namespace detail {

inline double get_number(const nlohmann::json& j, const char* key,
                         double fallback, bool required = false) {
  if (!j.contains(key)) {
    if (required)
      throw Error(ErrorCode::config,
                  std::string("config-error: missing noise field \"") + key + "\"");
    return fallback;
  }
  if (!j[key].is_number())
    throw Error(ErrorCode::config,
                std::string("config-error: noise field \"") + key +
                    "\" must be a number");
  return j[key].get<double>();
}

}  // namespace detail

/// Parse one concrete (grid-free) tagged noise object.
inline NoiseSpec noise_spec_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("type"))
    throw Error(ErrorCode::config, "config-error: noise spec needs a \"type\" tag");
  const std::string type = j["type"].get<std::string>();
  if (type == "ideal") return NoiseSpec::ideal();
  if (type == "gue")
    return NoiseSpec::gue(detail::get_number(j, "alpha", 0.0, true));
  if (type == "dissipative") {
    DissipativeGue d;
    d.alpha = detail::get_number(j, "alpha", 0.0, true);
    d.env_dim = static_cast<int>(detail::get_number(j, "env_dim", 1.0));
    return {d};
  }
  if (type == "faulty-swap")
    return NoiseSpec::faulty_swap(detail::get_number(j, "sigma", 0.0, true));
  if (type == "swap-omission")
    return NoiseSpec::swap_omission(detail::get_number(j, "p", 0.0, true));
  if (type == "depolarizing")
    return NoiseSpec::depolarizing(detail::get_number(j, "epsilon", 0.0, true));
  if (type == "dephasing")
    return NoiseSpec::dephasing(detail::get_number(j, "lambda", 0.0, true));
  if (type == "measurement-flip") {
    MeasurementFlip m;
    if (j.contains("per_qubit")) {
      m.flip_probs = j["per_qubit"].get<std::vector<double>>();
    } else {
      m.flip_probs = {detail::get_number(j, "q", 0.0, true)};
    }
    return {m};
  }
  if (type == "composite") {
    if (!j.contains("parts") || !j["parts"].is_array())
      throw Error(ErrorCode::config, "config-error: composite needs \"parts\"");
    std::vector<NoiseSpec> parts;
    for (const auto& part : j["parts"]) parts.push_back(noise_spec_from_json(part));
    return NoiseSpec::composite(std::move(parts));
  }
  if (type == "scale") {
    if (!j.contains("inner"))
      throw Error(ErrorCode::config, "config-error: scale needs \"inner\"");
    return NoiseSpec::scaled(detail::get_number(j, "factor", 1.0, true),
                             noise_spec_from_json(j["inner"]));
  }
  throw Error(ErrorCode::config, "config-error: unknown noise type \"" + type + "\"");
}

/// One expanded grid point: the concrete spec plus the swept parameter
/// values, keyed by the field names they came from.
struct NoisePoint {
  nlohmann::json concrete;
  std::map<std::string, double> params;
  NoiseSpec spec;
};

namespace detail {

inline const char* const kSweepableKeys[] = {"alpha", "sigma", "p", "epsilon",
                                             "lambda", "q", "factor"};

inline bool is_sweepable(const std::string& key) {
  for (const char* k : kSweepableKeys)
    if (key == k) return true;
  return false;
}

}  // namespace detail

/// Expand array-valued sweep parameters (alpha, sigma, p, epsilon, lambda,
/// q, factor) into the cartesian grid of concrete specs, in document order.
inline std::vector<NoisePoint> expand_noise_grid(const nlohmann::json& noise) {
  // Collect paths of sweepable array leaves.
  std::vector<std::pair<std::string, std::vector<double>>> sweeps;
  std::function<void(const nlohmann::json&, const std::string&)> walk =
      [&](const nlohmann::json& node, const std::string& path) {
        if (!node.is_object()) return;
        for (auto it = node.begin(); it != node.end(); ++it) {
          const std::string child = path + "/" + it.key();
          if (it.value().is_array() && detail::is_sweepable(it.key()) &&
              !it.value().empty() && it.value().front().is_number()) {
            sweeps.emplace_back(child, it.value().get<std::vector<double>>());
          } else if (it.value().is_object()) {
            walk(it.value(), child);
          } else if (it.value().is_array()) {
            for (std::size_t i = 0; i < it.value().size(); ++i)
              walk(it.value()[i], child + "/" + std::to_string(i));
          }
        }
      };
  walk(noise, "");

  std::vector<NoisePoint> points;
  std::vector<std::size_t> index(sweeps.size(), 0);
  while (true) {
    nlohmann::json doc = noise;
    NoisePoint pt;
    for (std::size_t s = 0; s < sweeps.size(); ++s) {
      const double value = sweeps[s].second[index[s]];
      doc[nlohmann::json::json_pointer(sweeps[s].first)] = value;
      const auto slash = sweeps[s].first.rfind('/');
      pt.params[sweeps[s].first.substr(slash + 1)] = value;
    }
    pt.concrete = doc;
    pt.spec = noise_spec_from_json(doc);
    points.push_back(std::move(pt));
    // odometer increment, last sweep fastest
    std::size_t s = sweeps.size();
    while (s > 0) {
      --s;
      if (++index[s] < sweeps[s].second.size()) break;
      index[s] = 0;
      if (s == 0) return points;
    }
    if (sweeps.empty()) return points;
  }
}

// ---------------------------------------------------------------------------
// Run configuration
// ---------------------------------------------------------------------------

struct RunConfig {
  RunKind kind = RunKind::parity;
  std::vector<int> n_list;
  bool square = true;            // T = N
  std::vector<int> t_list;       // explicit layer counts when !square
  nlohmann::json noise;          // tagged object, possibly with sweep arrays
  int circuits = 100;
  int shots = 100;
  int m_subset = 0;              // m-parity only; 0 = sweep m = 1..N
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  int n_cap = 14;
  int workers = 0;               // 0 = hardware concurrency
  std::vector<double> scale_grid;       // qv command
  std::vector<std::string> kinds;       // qv command
  bool insert_x = false;                // hidden kinds
};

inline RunConfig parse_run_config(const nlohmann::json& j) {
  if (!j.is_object())
    throw Error(ErrorCode::config, "config-error: document is not an object");
  RunConfig cfg;
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string& key = it.key();
    if (key != "kind" && key != "n_list" && key != "t_rule" && key != "noise" &&
        key != "circuits" && key != "shots" && key != "seed" && key != "out" &&
        key != "n_cap" && key != "workers" && key != "scale_grid" &&
        key != "kinds" && key != "m" && key != "insert_x")
      throw Error(ErrorCode::config,
                  "config-error: unknown key \"" + key + "\"");
  }
  if (j.contains("kind")) cfg.kind = run_kind_from_string(j["kind"].get<std::string>());
  if (!j.contains("n_list") || !j["n_list"].is_array() || j["n_list"].empty())
    throw Error(ErrorCode::config, "config-error: \"n_list\" must be a non-empty array");
  cfg.n_list = j["n_list"].get<std::vector<int>>();
  if (j.contains("t_rule")) {
    if (j["t_rule"].is_string() && j["t_rule"].get<std::string>() == "square") {
      cfg.square = true;
    } else if (j["t_rule"].is_array()) {
      cfg.square = false;
      cfg.t_list = j["t_rule"].get<std::vector<int>>();
      if (cfg.t_list.empty())
        throw Error(ErrorCode::config, "config-error: empty \"t_rule\" list");
    } else {
      throw Error(ErrorCode::config,
                  "config-error: \"t_rule\" must be \"square\" or a list");
    }
  }
  cfg.noise = j.value("noise", nlohmann::json{{"type", "ideal"}});
  cfg.circuits = j.value("circuits", 100);
  cfg.shots = j.value("shots", 100);
  cfg.m_subset = j.value("m", 0);
  cfg.seed = j.value("seed", std::uint64_t(1));
  cfg.out_dir = j.value("out", std::string("out"));
  cfg.n_cap = j.value("n_cap", 14);
  cfg.workers = j.value("workers", 0);
  cfg.insert_x = j.value("insert_x", false);
  if (j.contains("scale_grid"))
    cfg.scale_grid = j["scale_grid"].get<std::vector<double>>();
  if (j.contains("kinds"))
    cfg.kinds = j["kinds"].get<std::vector<std::string>>();
  if (cfg.circuits < 1 || cfg.shots < 1)
    throw Error(ErrorCode::config, "config-error: counts must be at least 1");
  for (int n : cfg.n_list)
    if (n < 2) throw Error(ErrorCode::config, "config-error: n_list entries must be >= 2");
  return cfg;
}

}  // namespace qvb
