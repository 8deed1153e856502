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

#include "agestruct/io.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "agestruct/error.hpp"

namespace agestruct {

void write_csv(const std::filesystem::path& path,
               const std::vector<CsvColumn>& columns) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path.string());
  std::size_t rows = columns.empty() ? 0 : columns.front().values.size();
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (columns[c].values.size() != rows)
      throw std::invalid_argument("write_csv: ragged columns");
    out << (c ? "," : "") << columns[c].name;
  }
  out << "\n" << std::setprecision(17);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c)
      out << (c ? "," : "") << columns[c].values[r];
    out << "\n";
  }
  if (!out) throw ConfigError("error writing " + path.string());
}

std::vector<CsvColumn> read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::vector<CsvColumn> cols;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError(path.string() + " is empty");
  {
    std::stringstream ss(line);
    std::string name;
    while (std::getline(ss, name, ',')) {
      const auto b = name.find_first_not_of(" \t\r");
      const auto e = name.find_last_not_of(" \t\r");
      cols.push_back({b == std::string::npos ? "" : name.substr(b, e - b + 1), {}});
    }
  }
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::stringstream ss(line);
    std::string cell;
    std::size_t c = 0;
    while (std::getline(ss, cell, ',')) {
      if (c >= cols.size()) {
        ++c;
        break;
      }
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      while (end && (*end == ' ' || *end == '\t' || *end == '\r')) ++end;
      if (end == cell.c_str() || *end != '\0')
        throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                          ": non-numeric cell '" + cell + "'");
      cols[c++].values.push_back(v);
    }
    if (c != cols.size())
      throw ConfigError(path.string() + ":" + std::to_string(lineno) +
                        ": expected " + std::to_string(cols.size()) +
                        " columns");
  }
  return cols;
}

std::string config_hash(const ModelConfig& config) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : to_config_text(config)) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

void append_manifest(const std::filesystem::path& path,
                     const RunManifest& m) {
  nlohmann::json j;
  j["config_hash"] = m.config_hash;
  j["subcommand"] = m.subcommand;
  j["parameters"] = nlohmann::json::object();
  for (const auto& [k, v] : m.parameters) j["parameters"][k] = v;
  j["outputs"] = m.outputs;
  j["wall_time_s"] = m.wall_time_s;
  std::ofstream out(path, std::ios::app);
  if (!out) throw ConfigError("cannot append to " + path.string());
  out << j.dump() << "\n";
}

}  // namespace agestruct
