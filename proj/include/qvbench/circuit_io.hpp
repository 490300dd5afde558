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

#include <string>

#include <json.hpp>

#include "qvbench/circuit.hpp"
#include "qvbench/error.hpp"

namespace qvb {

inline constexpr int kCircuitFormatVersion = 1;

namespace detail {

inline nlohmann::json matrix_to_json(const CMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      rows.push_back({m(r, c).real(), m(r, c).imag()});
  return rows;
}

inline CMatrix matrix_from_json(const nlohmann::json& j, int dim) {
  if (!j.is_array() || static_cast<int>(j.size()) != dim * dim)
    throw Error(ErrorCode::parse, "matrix entry count does not match arity");
  CMatrix m(dim, dim);
  for (int k = 0; k < dim * dim; ++k) {
    const auto& e = j[k];
    if (!e.is_array() || e.size() != 2)
      throw Error(ErrorCode::parse, "complex entries must be [re, im] pairs");
    m(k / dim, k % dim) = Complex(e[0].get<double>(), e[1].get<double>());
  }
  return m;
}

inline CircuitKind kind_from_string(const std::string& s) {
  if (s == "standard") return CircuitKind::standard;
  if (s == "parity") return CircuitKind::parity;
  if (s == "double-parity") return CircuitKind::double_parity;
  if (s == "hidden-parity") return CircuitKind::hidden_parity;
  if (s == "m-parity") return CircuitKind::m_parity;
  throw Error(ErrorCode::parse, "unknown circuit kind: " + s);
}

inline GateTag tag_from_string(const std::string& s) {
  if (s == "generic") return GateTag::generic;
  if (s == "parity") return GateTag::parity;
  if (s == "diagonal-zz") return GateTag::diagonal_zz;
  if (s == "single") return GateTag::single;
  if (s == "pauli-x") return GateTag::pauli_x;
  throw Error(ErrorCode::parse, "unknown gate tag: " + s);
}

}  // namespace detail

inline nlohmann::json circuit_to_json(const Circuit& c) {
  nlohmann::json doc;
  doc["version"] = kCircuitFormatVersion;
  doc["N"] = c.n_qubits;
  doc["T"] = c.n_layers;
  doc["kind"] = to_string(c.kind);
  doc["seed"] = c.seed;

  nlohmann::json layers = nlohmann::json::array();
  for (const Layer& l : c.layers) {
    nlohmann::json jl;
    jl["perm"] = l.perm;
    nlohmann::json gates = nlohmann::json::array();
    for (const GatePlacement& g : l.placements) {
      nlohmann::json jg;
      jg["targets"] =
          g.is_pair() ? nlohmann::json::array({g.q1, g.q2}) : nlohmann::json::array({g.q1});
      jg["tag"] = to_string(g.tag);
      jg["matrix"] = detail::matrix_to_json(g.gate);
      gates.push_back(std::move(jg));
    }
    jl["gates"] = std::move(gates);
    layers.push_back(std::move(jl));
  }
  doc["layers"] = std::move(layers);

  nlohmann::json meta = nlohmann::json::object();
  const CircuitKind structural =
      c.kind == CircuitKind::hidden_parity ? c.meta.base_kind : c.kind;
  if (c.kind == CircuitKind::hidden_parity)
    meta["base_kind"] = to_string(c.meta.base_kind);
  if (structural == CircuitKind::parity) meta["global_parity"] = c.meta.global_parity;
  if (structural == CircuitKind::double_parity) {
    meta["colors"] = c.meta.colors;
    meta["parity_a"] = c.meta.parity_a;
    meta["parity_b"] = c.meta.parity_b;
  }
  if (c.kind == CircuitKind::m_parity) {
    meta["subsets"] = c.meta.subsets;
    meta["p0"] = c.meta.p0;
    meta["initial_x"] = c.meta.initial_x;
  }
  doc["metadata"] = std::move(meta);
  return doc;
}

inline std::string serialize(const Circuit& c) { return circuit_to_json(c).dump(); }

inline Circuit circuit_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw Error(ErrorCode::parse, "document is not an object");
  for (const char* key : {"version", "N", "T", "kind", "seed", "layers", "metadata"})
    if (!doc.contains(key))
      throw Error(ErrorCode::parse, std::string("missing field: ") + key);
  if (doc["version"].get<int>() != kCircuitFormatVersion)
    throw Error(ErrorCode::parse, "unsupported format version");

  Circuit c;
  c.n_qubits = doc["N"].get<int>();
  c.n_layers = doc["T"].get<int>();
  c.kind = detail::kind_from_string(doc["kind"].get<std::string>());
  c.seed = doc["seed"].get<std::uint64_t>();

  for (const auto& jl : doc["layers"]) {
    Layer l;
    l.perm = jl.at("perm").get<std::vector<int>>();
    for (const auto& jg : jl.at("gates")) {
      GatePlacement g;
      const auto targets = jg.at("targets").get<std::vector<int>>();
      if (targets.empty() || targets.size() > 2)
        throw Error(ErrorCode::parse, "gate targets must name one or two qubits");
      g.q1 = targets[0];
      g.q2 = targets.size() == 2 ? targets[1] : -1;
      g.tag = detail::tag_from_string(jg.at("tag").get<std::string>());
      g.gate = detail::matrix_from_json(jg.at("matrix"), targets.size() == 2 ? 4 : 2);
      l.placements.push_back(std::move(g));
    }
    c.layers.push_back(std::move(l));
  }

  const auto& meta = doc["metadata"];
  const CircuitKind structural = c.kind == CircuitKind::hidden_parity
                                     ? detail::kind_from_string(
                                           meta.value("base_kind", std::string("parity")))
                                     : c.kind;
  if (c.kind == CircuitKind::hidden_parity) c.meta.base_kind = structural;
  if (structural == CircuitKind::parity)
    c.meta.global_parity = meta.value("global_parity", 0);
  if (structural == CircuitKind::double_parity) {
    if (!meta.contains("colors"))
      throw Error(ErrorCode::parse, "double-parity circuit lacks color metadata");
    c.meta.colors = meta["colors"].get<std::vector<std::vector<int>>>();
    c.meta.parity_a = meta.value("parity_a", 0);
    c.meta.parity_b = meta.value("parity_b", 0);
  }
  if (c.kind == CircuitKind::m_parity) {
    if (!meta.contains("subsets") || !meta.contains("p0"))
      throw Error(ErrorCode::parse, "m-parity circuit lacks subset metadata");
    c.meta.subsets = meta["subsets"].get<std::vector<std::vector<int>>>();
    c.meta.p0 = meta["p0"].get<int>();
    c.meta.initial_x = meta.value("initial_x", std::vector<int>{});
  }

  validate_circuit(c);
  return c;
}

inline Circuit deserialize(const std::string& bytes) {
  nlohmann::json doc = nlohmann::json::parse(bytes, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded()) throw Error(ErrorCode::parse, "malformed JSON document");
  return circuit_from_json(doc);
}

}  // namespace qvb
