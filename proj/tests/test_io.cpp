// Copyright 2026 The estalg Authors
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

#include <doctest.h>

#include <cmath>
#include <cstring>
#include <functional>
#include <random>

#include "estalg/error.hpp"
#include "estalg/io.hpp"
#include "estalg/presets.hpp"
#include "support.hpp"

using namespace estalg;
using io::json;

namespace {

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("doubles round-trip through 17 significant digits") {
  std::mt19937_64 rng(50);
  std::uniform_int_distribution<std::uint64_t> bits;
  for (int k = 0; k < 2000; ++k) {
    std::uint64_t b = bits(rng);
    double v;
    std::memcpy(&v, &b, sizeof v);
    if (!std::isfinite(v)) continue;
    const double back = std::strtod(io::format_double(v).c_str(), nullptr);
    CHECK(std::memcmp(&v, &back, sizeof v) == 0);
  }
}

TEST_CASE("matrix json") {
  std::mt19937_64 rng(51);
  const Matrix m = testing::gaussian(rng, 3);
  const json j = io::matrix_to_json(m);
  CHECK(j[1][2][0] == m(1, 2).real());
  CHECK(j[1][2][1] == m(1, 2).imag());
  CHECK(io::matrix_from_json(json::parse(j.dump()), "m") == m);
  CHECK(io::matrix_from_json(json::parse("[[1, 0], [0, 1]]"), "m") == Matrix::Identity(2, 2));
}

TEST_CASE("model diagnostics name the field") {
  const json good = presets::find("qubit-decay").document;
  json bad = good;
  bad["L"][0][1][0][0] = "one";
  CHECK(error_of([&] { io::quantum_model_from_json(bad); }).find("model.L[0][1][0][0]") == 0);
  bad = good;
  bad.erase("H");
  CHECK(error_of([&] { io::quantum_model_from_json(bad); }).find("model.H") == 0);
  bad = good;
  bad["H"] = json::parse("[[[0,1],[0,0]],[[0,0],[0,0]]]");
  CHECK_FALSE(error_of([&] { io::quantum_model_from_json(bad); }).empty());
  bad = good;
  bad["dim"] = 3;
  CHECK(error_of([&] { io::quantum_model_from_json(bad); }).find("model.L[0]") == 0);
  bad = good;
  bad["scheme"]["observed"] = {0};
  CHECK(error_of([&] { io::quantum_model_from_json(bad); }).find("scheme.observed[0]") == 0);
}

TEST_CASE("syntax errors carry line and column") {
  const std::string text = "{\n  \"dim\": 2,\n  \"L\": [,\n}";
  const std::string msg = error_of([&] { io::parse_json(text, "m.json"); });
  CHECK(msg.find("m.json:3:") == 0);
}

TEST_CASE("scheme indices are 1-based on disk") {
  const MeasurementScheme s = io::scheme_from_json(json::parse(R"({"observed": [2], "theta": [0.5]})"));
  CHECK(s.observed() == std::vector<int>{1});
  CHECK(io::scheme_to_json(s)["observed"][0] == 2);
}

TEST_CASE("classical model json") {
  const auto m = io::classical_model_from_json(presets::find("rotational-2d").document);
  CHECK(m.n_vars() == 2);
  const auto back = io::classical_model_from_json(io::classical_model_to_json(m));
  CHECK(back.drift()[0] == m.drift()[0]);
  CHECK(back.gamma0() == m.gamma0());

  json tanh = presets::find("kalman-1d").document;
  tanh["v"][0] = "tanh";
  const std::string msg = error_of([&] { io::classical_model_from_json(tanh); });
  CHECK(msg.find("classical.v[0]") == 0);
  CHECK(msg.find("not a polynomial") != std::string::npos);

  json zero_den = presets::find("kalman-1d").document;
  zero_den["gamma0"] = {1, 0};
  CHECK(error_of([&] { io::classical_model_from_json(zero_den); }).find("classical.gamma0[1]") == 0);
}

TEST_CASE("record csv round trip") {
  TrajectoryRecord r;
  r.dt = 1e-3;
  r.steps = 3;
  r.seed = 11;
  r.dy = {{0.1, -0.2, 1.0 / 3.0}, {1e-300, 2.0, -3.5}};
  r.dw = {{0.0, 0.5, -0.25}, {7.0, 8.0, 9.0}};
  const std::string csv = io::table_to_csv(io::record_table(r));
  CHECK(csv.substr(0, csv.find('\n')) == "t,dY_1,dY_2,dW_1,dW_2");
  const json side = io::record_sidecar(r, 42);
  const TrajectoryRecord back = io::record_from_csv(csv, &side, "r.csv");
  CHECK(back.dy == r.dy);
  CHECK(back.dw == r.dw);
  CHECK(back.dt == r.dt);
  CHECK(back.seed == 11);
  const TrajectoryRecord inferred = io::record_from_csv(csv, nullptr, "r.csv");
  CHECK(inferred.dt == doctest::Approx(1e-3));

  const std::string msg = error_of([&] { io::record_from_csv("t,dY_1,dW_1\n0,1\n", nullptr, "r.csv"); });
  CHECK(msg.find("r.csv:2") == 0);
}

TEST_CASE("model hash") {
  const auto q = io::quantum_model_from_json(presets::find("qubit-decay").document);
  const auto d = io::quantum_model_from_json(presets::find("qubit-driven").document);
  const auto s = MeasurementScheme::complete(1);
  CHECK(io::model_hash(q.spec, s) == io::model_hash(q.spec, s));
  CHECK(io::model_hash(q.spec, s) != io::model_hash(d.spec, s));
  CHECK(io::model_hash(q.spec, s) != io::model_hash(q.spec, MeasurementScheme::complete(1, 0.5)));
  CHECK(io::hex64(255) == "00000000000000ff");
}

TEST_CASE("presets") {
  for (const auto& name : presets::names()) {
    const auto p = presets::find(name);
    if (p.kind == presets::Kind::kQuantum) {
      CHECK_NOTHROW(io::quantum_model_from_json(p.document));
    } else {
      CHECK_NOTHROW(io::classical_model_from_json(p.document));
    }
  }
  CHECK(io::quantum_model_from_json(presets::find("oscillator-trunc-7").document).spec.dim() == 7);
  CHECK_THROWS_AS(presets::find("oscillator-trunc-1"), InputError);
  CHECK_THROWS_AS(presets::find("oscillator-trunc-x"), InputError);
  CHECK_THROWS_AS(presets::find("nope"), InputError);
}
