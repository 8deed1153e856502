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

#include <cmath>

#include <Eigen/Core>

#include "agestruct/equilibrium.hpp"
#include "agestruct/model.hpp"

namespace agestruct {

/// The scalars of the reduced two-state ODE: lambda_1, lambda_2, u*.
struct OdeCoefficients {
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double u_star = 0.0;
};

inline OdeCoefficients ode_coefficients(const EquilibriumData& eq) {
  return {eq.lambda[0], eq.lambda[1], eq.u_star};
}

/// phi_i(eta) = lambda_i (1 - e^eta).
template <typename Scalar>
Scalar phi(Scalar eta, Scalar lambda) {
  return -lambda * std::expm1(eta);
}

/// omega(q) = e^q - 1 - q.
template <typename Scalar>
Scalar omega(Scalar q) {
  return std::expm1(q) - q;
}

/// mu(q) = sinh^2(q/2).
template <typename Scalar>
Scalar mu_sq(Scalar q) {
  const Scalar s = std::sinh(q / 2);
  return s * s;
}

/// Backstepping error z = eta_2 - c1 eta_1.
inline double backstepping_error(const Eigen::Vector2d& eta,
                                 const GainSet& gains) {
  return eta(1) - gains.c1 * eta(0);
}

/// u = u* + lambda_2 [ -c2 (e^{-z} - 1) - theta c1 (e^{c1 eta_1} - 1)
///       + (lambda_1/lambda_2)(1 - e^{eta_1}) - c1 (1 - e^{eta_2}) ].
/// Not clamped: the value may be negative far from the origin.
double control_law(const Eigen::Vector2d& eta, const OdeCoefficients& ode,
                   const GainSet& gains);

/// The same feedback written in the functionals Pi_1, Pi_2 directly.
double control_law_original(double pi1, double pi2, const OdeCoefficients& ode,
                            const GainSet& gains);

/// Right-hand side of the reduced ODE with the psi-perturbations v:
/// d eta_1 = phi_2(eta_2 + v_2), d eta_2 = phi_1(eta_1 + v_1) + u* - u.
Eigen::Vector2d reduced_ode_rhs(const Eigen::Vector2d& eta, double u,
                                const OdeCoefficients& ode,
                                const Eigen::Vector2d& v = Eigen::Vector2d::Zero());

double lyapunov_v1(const Eigen::Vector2d& eta, const GainSet& gains);
double lyapunov_v2(const Eigen::Vector2d& eta, const GainSet& gains);
/// V3 = theta omega(-c1 eta_1) + omega(z).
double lyapunov_v3(const Eigen::Vector2d& eta, const GainSet& gains);
/// dV3/dt along the closed loop: -4 lambda_2 [theta c1 mu(-c1 eta_1) + c2 mu(z)].
double lyapunov_v3_dot(const Eigen::Vector2d& eta, const OdeCoefficients& ode,
                       const GainSet& gains);

/// True iff the feedback is strictly positive at eta.
bool in_D0(const Eigen::Vector2d& eta, const OdeCoefficients& ode,
           const GainSet& gains);

}  // namespace agestruct
