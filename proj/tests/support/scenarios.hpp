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

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "agestruct/certificates.hpp"
#include "agestruct/sim.hpp"

// Scenario drivers shared by the unit tests and the acceptance binary.

namespace agestruct::scenario {

struct SolverGap {
  double abs = 0.0;  // max_t max_a |x_ipde - x_odeide|
  double rel = 0.0;  // same, divided by x*(a)
};

// Both solvers from the underpopulated start, compared on every step up to
// t_end through the reconstructed profiles.
inline SolverGap cross_solver_gap(ModelConfig config, int intervals,
                                  double t_end) {
  config.age_intervals = intervals;
  const SimContext ctx = SimContext::build(config);
  const double h = ctx.equilibrium().grid().step();
  std::vector<PopulationState> ipde;
  SimOptions opt;
  opt.t_final = t_end;
  opt.solver = SolverKind::ipde;
  opt.observer = [&](double, const PopulationState& x) { ipde.push_back(x); };
  run_closed_loop(ctx, opt);

  SolverGap gap;
  opt.solver = SolverKind::ode_ide;
  opt.observer = [&](double t, const PopulationState& x) {
    const auto k = static_cast<std::size_t>(std::llround(t / h));
    for (int i = 0; i < 2; ++i) {
      const AgeProfile d = (x[i] - ipde.at(k)[i]).abs();
      gap.abs = std::max(gap.abs, d.maxCoeff());
      gap.rel =
          std::max(gap.rel, (d / ctx.equilibrium().profile[i]).maxCoeff());
    }
  };
  run_closed_loop(ctx, opt);
  return gap;
}

// Smooth positive perturbation factor 1 + sum of a few random cosines.
inline AgeProfile random_smooth_factor(const AgeProfile& ages,
                                       std::mt19937_64& rng, double amplitude) {
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  AgeProfile f = AgeProfile::Zero(ages.size());
  for (int m = 0; m < 4; ++m)
    f += unit(rng) / (m + 1) * (M_PI * m * ages + M_PI * unit(rng)).cos();
  return 1.0 + amplitude * f / std::max(1.0, f.abs().maxCoeff());
}

// A random admissible psi pair: the forward transform of a random smooth
// profile, scaled so that its share of V is `psi_budget`. Scaling keeps
// the P constraint and the renewal compatibility, both linear in psi.
inline std::array<AgeProfile, 2> random_admissible_psi(
    const SimContext& ctx, const CertificateData& cert, std::mt19937_64& rng,
    double psi_budget) {
  const EquilibriumData& eq = ctx.equilibrium();
  const AgeGrid grid = eq.grid();
  const TransformedState base = ctx.transform->forward(
      eq.profile[0] * random_smooth_factor(eq.disc.ages, rng, 0.3),
      eq.profile[1] * random_smooth_factor(eq.disc.ages, rng, 0.3));
  const AgeProfile zero = AgeProfile::Zero(grid.size());
  const auto psi_part = [&](double alpha) {
    return V_total(Eigen::Vector2d::Zero(), alpha * base.psi[0],
                   alpha * base.psi[1], cert, grid);
  };
  double lo = 0.0, hi = 1.0;
  while (psi_part(hi) < psi_budget) hi *= 2.0;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    (psi_part(mid) < psi_budget ? lo : hi) = mid;
  }
  return {lo * base.psi[0], lo * base.psi[1]};
}

// eta on the ray through `direction` with V(eta, psi) = target.
inline Eigen::Vector2d eta_at_level(const Eigen::Vector2d& direction,
                                    const AgeProfile& psi1,
                                    const AgeProfile& psi2,
                                    const CertificateData& cert,
                                    const AgeGrid& grid, double target) {
  const auto v = [&](double r) {
    return V_total(r * direction, psi1, psi2, cert, grid);
  };
  double lo = 0.0, hi = 1e-3;
  while (v(hi) < target) hi *= 2.0;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    (v(mid) < target ? lo : hi) = mid;
  }
  return lo * direction;
}

struct InvarianceReport {
  int starts = 0;
  int exits = 0;            // V rose above c_star
  int nonpositive_u = 0;    // u <= 0 at some step
  int increases = 0;        // V_{n+1} > V_n + tol
  double max_v_ratio = 0.0; // max_t V(t) / c_star
  double max_increase = 0.0;
  double max_initial_g = 0.0;
};

// Closed-loop runs from random states inside the c_star sublevel set: the
// first half on the psi = 0 slice, the rest with small admissible psi.
inline InvarianceReport invariance_check(const SimContext& ctx, int starts,
                                         unsigned seed, double t_end) {
  if (!ctx.certificates) return {};
  CertificateData cert = *ctx.certificates;
  cert.c_star = roa_level(cert, ctx.ode).c_star;
  const AgeGrid grid = ctx.equilibrium().grid();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  InvarianceReport rep;
  for (int n = 0; n < starts; ++n) {
    std::array<AgeProfile, 2> psi = {AgeProfile::Zero(grid.size()),
                                     AgeProfile::Zero(grid.size())};
    if (n >= starts / 2)
      psi = random_admissible_psi(ctx, cert, rng,
                                  cert.c_star * (0.05 + 0.45 * unit(rng)));
    const double angle = 2.0 * M_PI * unit(rng);
    const double level = cert.c_star * (0.1 + 0.9 * unit(rng));
    TransformedState s;
    s.eta = eta_at_level({std::cos(angle), std::sin(angle)}, psi[0], psi[1],
                         cert, grid, level);
    s.psi = psi;
    rep.max_initial_g =
        std::max({rep.max_initial_g, G_functional(psi[0], cert.sigma[0], grid),
                  G_functional(psi[1], cert.sigma[1], grid)});

    SimOptions opt;
    opt.ic = InitialCondition::from_state(s);
    opt.t_final = t_end;
    const Trajectory tr = run_closed_loop(ctx, opt);
    const std::vector<double>& V = tr.V;
    const double tol = 1e-3 * std::max(V.front(), 1.0);
    bool exited = false, increased = false, u_bad = false;
    for (std::size_t k = 0; k < V.size(); ++k) {
      rep.max_v_ratio = std::max(rep.max_v_ratio, V[k] / cert.c_star);
      if (!(V[k] <= cert.c_star)) exited = true;
      if (!(tr.u[k] > 0)) u_bad = true;
      if (k > 0) {
        rep.max_increase = std::max(rep.max_increase, V[k] - V[k - 1]);
        if (V[k] > V[k - 1] + tol) increased = true;
      }
    }
    ++rep.starts;
    rep.exits += exited;
    rep.increases += increased;
    rep.nonpositive_u += u_bad;
  }
  return rep;
}

}  // namespace agestruct::scenario
