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

#include "agestruct/equilibrium.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "agestruct/error.hpp"

namespace agestruct {

Discretization discretize(const ModelConfig& config) {
  Discretization d;
  d.grid = config.grid();
  d.ages = d.grid.ages();
  d.weights = d.grid.trapezoid_weights();
  for (Species s : kBothSpecies) {
    const SpeciesKernels& k = config.species(s);
    SampledKernels& out = d.species[index_of(s)];
    out.mortality = sample_kernel(k.mortality, d.grid);
    out.birth = sample_kernel(k.birth, d.grid);
    out.interaction = sample_kernel(k.interaction, d.grid);
    out.cumulative_mortality = cumulative_trapezoid(out.mortality, d.grid.step());
  }
  return d;
}

AgeProfile survival_profile(const SampledKernels& kernels, const AgeGrid& grid,
                            double zeta) {
  return (-(kernels.cumulative_mortality + zeta * grid.ages())).exp();
}

AgeProfile survival_profile(const Discretization& disc, Species s,
                            double zeta) {
  return survival_profile(disc.of(s), disc.grid, zeta);
}

double lotka_sharpe_integral(const SampledKernels& kernels,
                             const AgeGrid& grid, double zeta) {
  return trapezoid(kernels.birth * survival_profile(kernels, grid, zeta),
                   grid.step());
}

double solve_lotka_sharpe(const SampledKernels& kernels, const AgeGrid& grid) {
  const auto f = [&](double z) {
    return lotka_sharpe_integral(kernels, grid, z) - 1.0;
  };
  double lo = -1.0, hi = 1.0;
  int doublings = 0;
  for (double width = 2.0; !(f(lo) > 0); width *= 2.0) {
    if (++doublings > 60)
      throw NumericalError("Lotka-Sharpe bracket expansion failed");
    hi = lo;
    lo -= width;
  }
  for (double width = 2.0; !(f(hi) < 0); width *= 2.0) {
    if (++doublings > 60)
      throw NumericalError("Lotka-Sharpe bracket expansion failed");
    lo = hi;
    hi += width;
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid);
    if (fm == 0) return mid;
    (fm > 0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

double solve_lotka_sharpe(const Discretization& disc, Species s) {
  return solve_lotka_sharpe(disc.of(s), disc.grid);
}

EquilibriumData assemble_equilibrium(const ModelConfig& config, double u_star) {
  EquilibriumData eq;
  eq.disc = discretize(config);
  const double h = eq.disc.grid.step();
  for (Species s : kBothSpecies) {
    eq.zeta[index_of(s)] = solve_lotka_sharpe(eq.disc, s);
    eq.survival[index_of(s)] =
        survival_profile(eq.disc, s, eq.zeta[index_of(s)]);
  }
  if (!(u_star > 0 && u_star < eq.zeta[1])) {
    std::ostringstream os;
    os << "u_star = " << u_star << " outside (0, zeta_2 = " << eq.zeta[1]
       << "): no positive equilibrium";
    throw ConfigError(os.str());
  }
  eq.u_star = u_star;
  eq.lambda[0] = eq.zeta[1] - u_star;
  eq.lambda[1] = eq.zeta[0];
  for (Species s : kBothSpecies) {
    const int i = index_of(s);
    const AgeProfile& b_other = eq.disc.of(other(s)).interaction;
    eq.newborn[i] = eq.lambda[i] / trapezoid(b_other * eq.survival[i], h);
    eq.profile[i] = eq.newborn[i] * eq.survival[i];
  }
  return eq;
}

EquilibriumData assemble_equilibrium(const ModelConfig& config) {
  if (config.u_star) return assemble_equilibrium(config, *config.u_star);
  const Discretization disc = discretize(config);
  return assemble_equilibrium(config,
                              0.5 * solve_lotka_sharpe(disc, Species::second));
}

std::pair<double, double> open_loop_eigenvalues(const EquilibriumData& eq) {
  if (!(eq.lambda[0] > 0 && eq.lambda[1] > 0))
    throw std::domain_error("open_loop_eigenvalues: lambda must be positive");
  const double s = std::sqrt(eq.lambda[0] * eq.lambda[1]);
  return {s, -s};
}

}  // namespace agestruct
