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

#include "estalg/presets.hpp"

#include <cmath>
#include <string_view>

#include "estalg/error.hpp"
#include "estalg/io.hpp"
#include "estalg/operators.hpp"

namespace estalg::presets {

namespace {

using nlohmann::json;

// Complex entries are [re, im]; sigma_minus = |1><0| lowers the +1 eigenstate
// of sigma_z.
constexpr std::string_view kQubitDecay = R"({
  "dim": 2,
  "L": [[[[0, 0], [0, 0]], [[1, 0], [0, 0]]]],
  "H": [[[0, 0], [0, 0]], [[0, 0], [0, 0]]],
  "rho0": [[[0.5, 0], [0.5, 0]], [[0.5, 0], [0.5, 0]]],
  "observables": {
    "sigma_z": [[[1, 0], [0, 0]], [[0, 0], [-1, 0]]],
    "sigma_x": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]]
  },
  "scheme": {"observed": [1], "theta": [0]}
})";

constexpr std::string_view kQubitDriven = R"({
  "dim": 2,
  "L": [[[[0, 0], [0, 0]], [[1, 0], [0, 0]]]],
  "H": [[[0, 0], [0.5, 0]], [[0.5, 0], [0, 0]]],
  "rho0": [[[1, 0], [0, 0]], [[0, 0], [0, 0]]],
  "observables": {
    "sigma_z": [[[1, 0], [0, 0]], [[0, 0], [-1, 0]]],
    "sigma_x": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]],
    "sigma_y": [[[0, 0], [0, -1]], [[0, 1], [0, 0]]]
  },
  "scheme": {"observed": [1], "theta": [0]}
})";

// Scalar shifts in L and H put a multiple of the identity into the operator
// algebra, which zeta sends to a nonzero map only through its real part.
constexpr std::string_view kQubitShifted = R"({
  "dim": 2,
  "L": [[[[0.5, 0], [0, 0]], [[1, 0], [0.5, 0]]]],
  "H": [[[0.5, 0], [1, 0]], [[1, 0], [0.5, 0]]],
  "rho0": [[[0.5, 0], [0.5, 0]], [[0.5, 0], [0.5, 0]]],
  "observables": {
    "sigma_z": [[[1, 0], [0, 0]], [[0, 0], [-1, 0]]],
    "sigma_x": [[[0, 0], [1, 0]], [[1, 0], [0, 0]]]
  },
  "scheme": {"observed": [1], "theta": [0]}
})";

constexpr std::string_view kKalman1d = R"({
  "n_vars": 1,
  "v": [[{"coeff": [-1, 1], "powers": [1]}]],
  "h": [[{"coeff": [1, 1], "powers": [1]}]],
  "gamma0": [1, 1]
})";

constexpr std::string_view kCubicSensor = R"({
  "n_vars": 1,
  "v": [[]],
  "h": [[{"coeff": [1, 1], "powers": [3]}]],
  "gamma0": [1, 1]
})";

constexpr std::string_view kRotational2d = R"({
  "n_vars": 2,
  "v": [[{"coeff": [-1, 1], "powers": [0, 1]}], [{"coeff": [1, 1], "powers": [1, 0]}]],
  "h": [[{"coeff": [1, 1], "powers": [1, 0]}], [{"coeff": [1, 1], "powers": [0, 1]}]],
  "gamma0": [1, 1]
})";

json oscillator(int levels) {
  const Matrix a = annihilation(levels).matrix();
  const Matrix n = a.adjoint() * a;
  Matrix rho0 = Matrix::Zero(levels, levels);
  rho0(1, 1) = 1.0;
  return json{{"dim", levels},
              {"L", json::array({io::matrix_to_json(a)})},
              {"H", io::matrix_to_json(n)},
              {"rho0", io::matrix_to_json(rho0)},
              {"observables",
               {{"number", io::matrix_to_json(n)},
                {"position", io::matrix_to_json(a + a.adjoint())}}},
              {"scheme", {{"observed", {1}}, {"theta", {0.0}}}}};
}

Preset parsed(const std::string& name, Kind kind, std::string_view text) {
  return {name, kind, json::parse(text)};
}

}  // namespace

std::vector<std::string> names() {
  return {"qubit-decay", "qubit-driven", "qubit-shifted", "oscillator-trunc-4",
          "kalman-1d",   "cubic-sensor", "rotational-2d"};
}

Preset find(const std::string& name) {
  if (name == "qubit-decay") return parsed(name, Kind::kQuantum, kQubitDecay);
  if (name == "qubit-driven") return parsed(name, Kind::kQuantum, kQubitDriven);
  if (name == "qubit-shifted") return parsed(name, Kind::kQuantum, kQubitShifted);
  if (name == "kalman-1d") return parsed(name, Kind::kClassical, kKalman1d);
  if (name == "cubic-sensor") return parsed(name, Kind::kClassical, kCubicSensor);
  if (name == "rotational-2d") return parsed(name, Kind::kClassical, kRotational2d);
  constexpr std::string_view prefix = "oscillator-trunc-";
  if (name.rfind(prefix, 0) == 0) {
    const std::string digits = name.substr(prefix.size());
    if (!digits.empty() && digits.size() <= 2 &&
        digits.find_first_not_of("0123456789") == std::string::npos) {
      const int levels = std::stoi(digits);
      if (levels >= 2 && levels <= kMaxDim) return {name, Kind::kQuantum, oscillator(levels)};
    }
    throw InputError("--preset " + name + ": truncation must be an integer in 2..64");
  }
  std::string known;
  for (const auto& n : names()) known += (known.empty() ? "" : ", ") + n;
  throw InputError("--preset " + name + ": unknown preset (known: " + known + ")");
}

}  // namespace estalg::presets
