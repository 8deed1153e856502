// Copyright 2026 The agestruct Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "agestruct/grid.hpp"
#include "agestruct/model.hpp"

namespace agestruct {

struct CsvColumn {
  std::string name;
  std::vector<double> values;
};

/// Writes equally long columns with a one-line header; every value with 17
/// significant digits.
void write_csv(const std::filesystem::path& path,
               const std::vector<CsvColumn>& columns);

/// Reads a numeric CSV with a header line. Columns are returned in file
/// order. Throws ConfigError on ragged rows or non-numeric cells.
std::vector<CsvColumn> read_csv(const std::filesystem::path& path);

/// FNV-1a 64-bit hash of the canonical config text, as 16 hex digits.
std::string config_hash(const ModelConfig& config);

struct RunManifest {
  std::string config_hash;
  std::string subcommand;
  std::vector<std::pair<std::string, std::string>> parameters;
  std::vector<std::string> outputs;
  double wall_time_s = 0.0;
};

/// Appends the manifest as one JSON line to `path` (runs.log).
void append_manifest(const std::filesystem::path& path,
                     const RunManifest& manifest);

}  // namespace agestruct
