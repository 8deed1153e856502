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

#include "agestruct/control.hpp"

#include <cmath>

namespace agestruct {

double control_law(const Eigen::Vector2d& eta, const OdeCoefficients& ode,
                   const GainSet& g) {
  const double z = backstepping_error(eta, g);
  const double bracket = -g.c2 * std::expm1(-z) -
                         g.theta * g.c1 * std::expm1(g.c1 * eta(0)) -
                         (ode.lambda1 / ode.lambda2) * std::expm1(eta(0)) +
                         g.c1 * std::expm1(eta(1));
  return ode.u_star + ode.lambda2 * bracket;
}

double control_law_original(double pi1, double pi2, const OdeCoefficients& ode,
                            const GainSet& g) {
  const double p1c = std::pow(pi1, g.c1);
  const double bracket = g.c2 * (1.0 - p1c / pi2) +
                         g.theta * g.c1 * (1.0 - p1c) +
                         (ode.lambda1 / ode.lambda2) * (1.0 - pi1) +
                         g.c1 * (pi2 - 1.0);
  return ode.u_star + ode.lambda2 * bracket;
}

Eigen::Vector2d reduced_ode_rhs(const Eigen::Vector2d& eta, double u,
                                const OdeCoefficients& ode,
                                const Eigen::Vector2d& v) {
  return {phi(eta(1) + v(1), ode.lambda2),
          phi(eta(0) + v(0), ode.lambda1) + ode.u_star - u};
}

double lyapunov_v1(const Eigen::Vector2d& eta, const GainSet& g) {
  return omega(-g.c1 * eta(0));
}

double lyapunov_v2(const Eigen::Vector2d& eta, const GainSet& g) {
  return omega(backstepping_error(eta, g));
}

double lyapunov_v3(const Eigen::Vector2d& eta, const GainSet& g) {
  return g.theta * lyapunov_v1(eta, g) + lyapunov_v2(eta, g);
}

double lyapunov_v3_dot(const Eigen::Vector2d& eta, const OdeCoefficients& ode,
                       const GainSet& g) {
  return -4.0 * ode.lambda2 *
         (g.theta * g.c1 * mu_sq(-g.c1 * eta(0)) +
          g.c2 * mu_sq(backstepping_error(eta, g)));
}

bool in_D0(const Eigen::Vector2d& eta, const OdeCoefficients& ode,
           const GainSet& g) {
  return control_law(eta, ode, g) > 0;
}

}  // namespace agestruct
