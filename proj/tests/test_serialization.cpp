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

#include "qvbench/circuit_io.hpp"

#include <doctest.h>

#include "qvbench/sim.hpp"

using namespace qvb;

namespace {

std::vector<Circuit> sample_one_of_each() {
  RngStream rng(51, {0});
  std::vector<Circuit> all;
  all.push_back(generate_standard(4, 4, rng));
  all.push_back(generate_parity(5, 5, rng));
  all.push_back(generate_double_parity(6, 6, rng));
  all.push_back(generate_m_parity(5, 5, 3, rng));
  Circuit base = generate_parity(4, 4, rng);
  all.push_back(dress_hidden_parity(base, rng, true));
  Circuit dbase = generate_double_parity(4, 4, rng);
  all.push_back(dress_hidden_parity(dbase, rng, false));
  return all;
}

}  // namespace

TEST_CASE("round trip is bit-identical for every kind") {
  for (const Circuit& c : sample_one_of_each()) {
    const std::string bytes = serialize(c);
    const Circuit back = deserialize(bytes);
    CHECK(serialize(back) == bytes);
    CHECK(back.kind == c.kind);
    CHECK(back.n_qubits == c.n_qubits);
    CHECK(back.layers.size() == c.layers.size());
  }
}

TEST_CASE("round trip preserves behavior, not just bytes") {
  RngStream rng(52, {0});
  Circuit c = generate_m_parity(4, 4, 2, rng);
  const Circuit back = deserialize(serialize(c));
  const auto pa = simulate_ideal(c);
  const auto pb = simulate_ideal(back);
  CHECK(total_variation(pa, pb) == 0.0);
  CHECK(back.meta.p0 == c.meta.p0);
  CHECK(back.meta.subsets == c.meta.subsets);
  CHECK(back.meta.initial_x == c.meta.initial_x);
}

TEST_CASE("tampered unitarity is rejected on load") {
  RngStream rng(53, {0});
  Circuit c = generate_parity(4, 4, rng);
  nlohmann::json doc = circuit_to_json(c);
  auto& entry = doc["layers"][0]["gates"][0]["matrix"][0];
  entry[0] = entry[0].get<double>() + 1e-3;
  CHECK_THROWS_WITH_AS(circuit_from_json(doc), "unitarity-violation", Error);
}

TEST_CASE("missing color metadata on a double-parity circuit fails to parse") {
  RngStream rng(54, {0});
  Circuit c = generate_double_parity(4, 4, rng);
  nlohmann::json doc = circuit_to_json(c);
  doc["metadata"].erase("colors");
  CHECK_THROWS_AS(circuit_from_json(doc), Error);
}

TEST_CASE("inconsistent tracking metadata fails to parse") {
  RngStream rng(55, {0});
  Circuit c = generate_double_parity(4, 4, rng);
  nlohmann::json doc = circuit_to_json(c);
  // claim a different final coloring than the permutations imply
  auto colors = doc["metadata"]["colors"].back().get<std::vector<int>>();
  for (auto& v : colors) v ^= 1;
  doc["metadata"]["colors"].back() = colors;
  CHECK_THROWS_AS(circuit_from_json(doc), Error);
}

TEST_CASE("version and schema violations") {
  RngStream rng(56, {0});
  Circuit c = generate_parity(2, 1, rng);
  nlohmann::json doc = circuit_to_json(c);

  SUBCASE("wrong version") {
    doc["version"] = 99;
    CHECK_THROWS_AS(circuit_from_json(doc), Error);
  }
  SUBCASE("missing field") {
    doc.erase("layers");
    CHECK_THROWS_AS(circuit_from_json(doc), Error);
  }
  SUBCASE("bad kind string") {
    doc["kind"] = "mystery";
    CHECK_THROWS_AS(circuit_from_json(doc), Error);
  }
  SUBCASE("matrix entry count mismatch") {
    doc["layers"][0]["gates"][0]["matrix"].erase(0);
    CHECK_THROWS_AS(circuit_from_json(doc), Error);
  }
  SUBCASE("malformed document text") {
    CHECK_THROWS_AS(deserialize("{not json"), Error);
  }
}

TEST_CASE("complex entries serialize as [re, im] pairs row-major") {
  const CMatrix u = diagonal_zz_gate(0.5);
  Circuit c;
  c.n_qubits = 2;
  c.n_layers = 1;
  c.kind = CircuitKind::standard;
  Layer l;
  l.perm = {0, 1};
  GatePlacement g;
  g.q1 = 0;
  g.q2 = 1;
  g.gate = u;
  g.tag = GateTag::diagonal_zz;
  l.placements.push_back(g);
  c.layers.push_back(l);

  const nlohmann::json doc = circuit_to_json(c);
  const auto& m = doc["layers"][0]["gates"][0]["matrix"];
  CHECK(m.size() == 16);
  CHECK(m[0][0].get<double>() == doctest::Approx(std::cos(0.5)));
  CHECK(m[0][1].get<double>() == doctest::Approx(std::sin(0.5)));
  CHECK(m[5][1].get<double>() == doctest::Approx(-std::sin(0.5)));  // row 1, col 1
  CHECK(m[1][0].get<double>() == 0.0);
}
