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

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace estalg::presets {

enum class Kind { kQuantum, kClassical };

struct Preset {
  std::string name;
  Kind kind;
  /// Model document in the same JSON layout as an on-disk model file.
  nlohmann::json document;
};

/// Names of the fixed presets; `oscillator-trunc-N` is listed with N = 4
/// but accepts any N in 2..64.
std::vector<std::string> names();

/// Throws InputError for an unknown name.
Preset find(const std::string& name);

}  // namespace estalg::presets
