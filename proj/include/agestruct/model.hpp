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

#include <array>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "agestruct/grid.hpp"

namespace agestruct {

enum class Species : int { first = 0, second = 1 };

constexpr int index_of(Species s) { return static_cast<int>(s); }
constexpr Species other(Species s) {
  return s == Species::first ? Species::second : Species::first;
}
inline constexpr std::array<Species, 2> kBothSpecies = {Species::first,
                                                        Species::second};

/// Parametric families for the age kernels. `params[0]` is the scale for the
/// closed forms; `tabulated` stores flattened (age, value) pairs.
enum class KernelForm {
  exponential_growth,  // c * e^a      (mortality)
  exponential_decay,   // c * e^{-a}   (birth)
  parabolic,           // c * (a - a^2) (interaction)
  constant,            // c
  tabulated,           // piecewise linear through (age, value) pairs
};

struct KernelSpec {
  KernelForm form = KernelForm::constant;
  std::vector<double> params;

  static KernelSpec mortality(double mu_bar) {
    return {KernelForm::exponential_growth, {mu_bar}};
  }
  static KernelSpec birth(double k_bar) {
    return {KernelForm::exponential_decay, {k_bar}};
  }
  static KernelSpec interaction(double b_bar) {
    return {KernelForm::parabolic, {b_bar}};
  }
  static KernelSpec constant_rate(double c) {
    return {KernelForm::constant, {c}};
  }
  static KernelSpec table(const std::vector<std::pair<double, double>>& pts);
};

/// Evaluates a kernel at age a in [0, max_age]. Throws std::domain_error
/// outside that interval.
double eval_kernel(const KernelSpec& spec, double a, double max_age);

/// Samples a kernel on every grid node.
AgeProfile sample_kernel(const KernelSpec& spec, const AgeGrid& grid);

struct SpeciesKernels {
  KernelSpec mortality;
  KernelSpec birth;
  KernelSpec interaction;
};

struct GainSet {
  double c1 = 1.0;
  double c2 = 1.0;
  double theta = 1.0;
};

struct ModelConfig {
  double max_age = 1.0;
  std::array<SpeciesKernels, 2> kernels;
  // Equilibrium dilution. Unset means zeta_2 / 2.
  std::optional<double> u_star;
  GainSet gains;
  // gamma_i = gamma_factor * (strict lower bound on gamma_i).
  double gamma_factor = 1.05;
  // G-functional decay weights. Unset means the Assumption-1 sigma.
  std::array<std::optional<double>, 2> sigma;
  int age_intervals = 400;
  double t_final = 40.0;

  AgeGrid grid() const { return {max_age, age_intervals}; }
  const SpeciesKernels& species(Species s) const {
    return kernels[index_of(s)];
  }

  /// A = 1, mu_bar = 0.5, k_bar = 3, b_bar = 0.4 for both species,
  /// c1 = c2 = theta = 1.
  static ModelConfig defaults();
};

/// Parses the flat `key = value` format with sections [model], [control],
/// [grid], [simulation]. Keys absent from the text keep their default.
/// Throws ConfigError on parse failures and unknown keys.
ModelConfig parse_config(std::istream& in);
ModelConfig load_config(const std::filesystem::path& path);

/// Checks every config invariant, including the ones that need the
/// equilibrium solve (u_star < zeta_2). Throws ConfigError naming the field.
void validate_config(const ModelConfig& config);

/// Serializes a config back into the text format (round-trips through
/// parse_config).
std::string to_config_text(const ModelConfig& config);

}  // namespace agestruct
