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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "estalg/classical.hpp"
#include "estalg/lie_engine.hpp"
#include "estalg/qfilter.hpp"
#include "estalg/superops.hpp"

namespace estalg::io {

using json = nlohmann::json;

/// Parses JSON text; syntax errors become InputError carrying line and column.
json parse_json(const std::string& text, const std::string& source);
json read_json_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Shortest text for `v` that reads back bit-identical (%.17g).
std::string format_double(double v);

/// A matrix is a list of rows and each entry a pair [re, im].
json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const json& j, const std::string& field);

/// A quantum model file: ModelSpec plus optional initial state and observables.
struct QuantumModel {
  ModelSpec spec;
  std::optional<Matrix> rho0;
  std::vector<NamedObservable> observables;
  /// A scheme may sit alongside the model under the key "scheme".
  std::optional<MeasurementScheme> scheme;
};

QuantumModel quantum_model_from_json(const json& j);
json model_to_json(const ModelSpec& g);
/// Channel indices are 1-based on disk.
MeasurementScheme scheme_from_json(const json& j);
json scheme_to_json(const MeasurementScheme& scheme);

/// FNV-1a of the canonical JSON text of the model and scheme.
std::uint64_t model_hash(const ModelSpec& g, const MeasurementScheme& scheme);
std::string hex64(std::uint64_t v);

classical::ClassicalModel classical_model_from_json(const json& j);
json polynomial_to_json(const classical::Polynomial& p);
json classical_model_to_json(const classical::ClassicalModel& m);

json closure_to_json(const ClosureReport& report);
json theorem_to_json(const TheoremReport& report);

/// Column-labelled numeric table shared by CSV and JSON output.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

std::string table_to_csv(const Table& table);
json table_to_json(const Table& table);

Table record_table(const TrajectoryRecord& record);
json record_sidecar(const TrajectoryRecord& record, std::uint64_t hash);
/// `sidecar` may be null; dt is then inferred from the t column.
TrajectoryRecord record_from_csv(const std::string& csv, const json* sidecar,
                                 const std::string& source);

/// Sidecar path for a record file.
std::filesystem::path sidecar_path(const std::filesystem::path& record);

}  // namespace estalg::io
