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
#include <utility>

#include "agestruct/grid.hpp"
#include "agestruct/model.hpp"

namespace agestruct {

/// Kernels of one species sampled on the grid, plus the cumulative mortality
/// integral M(a_j) used by every survival computation.
struct SampledKernels {
  AgeProfile mortality;
  AgeProfile birth;
  AgeProfile interaction;
  AgeProfile cumulative_mortality;
};

/// Everything the solvers need that depends only on the config and grid.
struct Discretization {
  AgeGrid grid;
  AgeProfile ages;
  AgeProfile weights;  // trapezoid weights
  std::array<SampledKernels, 2> species;

  const SampledKernels& of(Species s) const { return species[index_of(s)]; }
};

Discretization discretize(const ModelConfig& config);

/// exp(-int_0^a (zeta + mu)) with the integral accumulated by the trapezoid
/// rule on the grid.
AgeProfile survival_profile(const SampledKernels& kernels, const AgeGrid& grid,
                            double zeta);
AgeProfile survival_profile(const Discretization& disc, Species s, double zeta);

/// int_0^A k(a) exp(-int_0^a (mu + zeta)) da on the grid. Strictly decreasing
/// in zeta.
double lotka_sharpe_integral(const SampledKernels& kernels,
                             const AgeGrid& grid, double zeta);

/// Root of lotka_sharpe_integral(zeta) = 1 by bracketed bisection. Throws
/// NumericalError when no bracket is found within 60 doublings.
double solve_lotka_sharpe(const SampledKernels& kernels, const AgeGrid& grid);
double solve_lotka_sharpe(const Discretization& disc, Species s);

struct EquilibriumData {
  Discretization disc;
  std::array<double, 2> zeta{};
  std::array<double, 2> lambda{};  // lambda_i = int b_j x_i*
  std::array<double, 2> newborn{};  // x_i*(0)
  std::array<AgeProfile, 2> profile;   // x_i*(a)
  std::array<AgeProfile, 2> survival;  // x~_i*(a)
  double u_star = 0.0;

  double zeta_of(Species s) const { return zeta[index_of(s)]; }
  double lambda_of(Species s) const { return lambda[index_of(s)]; }
  const AgeProfile& profile_of(Species s) const { return profile[index_of(s)]; }
  const AgeProfile& survival_of(Species s) const {
    return survival[index_of(s)];
  }
  const AgeGrid& grid() const { return disc.grid; }
};

/// Builds the equilibrium for a given dilution u_star in (0, zeta_2). Throws
/// ConfigError("no positive equilibrium ...") otherwise.
EquilibriumData assemble_equilibrium(const ModelConfig& config, double u_star);

/// Same, with u_star taken from the config (zeta_2 / 2 when unset).
EquilibriumData assemble_equilibrium(const ModelConfig& config);

/// Eigenvalues +-sqrt(lambda_1 lambda_2) of the open-loop Jacobian at the
/// origin of the reduced ODE.
std::pair<double, double> open_loop_eigenvalues(const EquilibriumData& eq);

}  // namespace agestruct
