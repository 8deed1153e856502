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

#include <Eigen/Core>

#include "agestruct/equilibrium.hpp"

namespace agestruct {

/// (eta_1, eta_2) together with the age histories psi_i(-a_j), j = 0..N.
struct TransformedState {
  Eigen::Vector2d eta = Eigen::Vector2d::Zero();
  std::array<AgeProfile, 2> psi;

  const AgeProfile& psi_of(Species s) const { return psi[index_of(s)]; }
};

/// pi_0(a) = int_a^A k(s) exp(int_s^a (zeta + mu)) ds, evaluated on the grid
/// as exp(C(a)) * int_a^A k~(s) ds with one backward trapezoid sweep.
AgeProfile adjoint_eigenfunction(const EquilibriumData& eq, Species s);

/// Change of variables between age profiles and (eta, psi).
///
/// Integrals against pi_0 use the discrete adjoint of the renewal/transport
/// scheme: weights da * (pi_0(a_j) - da*k(a_j)/2) for j < N. With these
/// weights Pi[x*] = 1 and P(psi) = 0 hold exactly on the grid for
/// transformed profiles, and P is conserved by the discrete IDE.
///
/// All tables are built in the constructor; the object is immutable and safe
/// to share between threads.
class StateTransform {
 public:
  explicit StateTransform(const EquilibriumData& eq);

  const EquilibriumData& equilibrium() const { return eq_; }
  const AgeProfile& eigenfunction(Species s) const {
    return pi0_[index_of(s)];
  }
  /// k~_i(a) = k_i(a) x~_i*(a).
  const AgeProfile& normalized_birth(Species s) const {
    return k_tilde_[index_of(s)];
  }
  /// b_j(a) x_i*(a) / lambda_i: the kernel through which psi_i acts on the
  /// other species (integrates to 1).
  const AgeProfile& interaction_kernel(Species s) const {
    return b_bar_[index_of(s)];
  }
  /// Renewal weights r_j with psi(t+da) = sum_j r_j psi(t - a_j).
  const AgeProfile& renewal_weights(Species s) const {
    return renewal_[index_of(s)];
  }

  /// Pi_i[x] = int pi_0 x / int a k x*. Throws std::domain_error if x has a
  /// non-positive entry.
  double pi_functional(Species s, const AgeProfile& x) const;

  TransformedState forward(const AgeProfile& x1, const AgeProfile& x2) const;

  /// x_i(a) = x_i*(a) e^{eta_i} (1 + psi_i(-a)). Throws std::domain_error
  /// if psi <= -1 anywhere.
  std::pair<AgeProfile, AgeProfile> reconstruct(
      const TransformedState& state) const;

  /// int b-bar psi, the normalized interaction seen by the other species.
  double interaction_moment(Species s, const AgeProfile& psi) const;

  /// v_i = ln(1 + int b-bar psi_i). Throws std::domain_error when the
  /// argument of the log is not positive.
  double v_map(Species s, const AgeProfile& psi) const;

  /// P(psi): zero on the admissible set.
  double constraint_p(Species s, const AgeProfile& psi) const;

  /// psi(0) - int_0^A k~(a) psi(-a) da (trapezoid).
  double boundary_residual(Species s, const AgeProfile& psi) const;

  /// y / int q x*: estimate of Pi_i from the lumped output y = int q x.
  double output_feedback_pi(Species s, double y, const AgeProfile& q) const;

  /// y = int q x (trapezoid); the measurement fed to output_feedback_pi.
  double lumped_output(const AgeProfile& q, const AgeProfile& x) const;

 private:
  EquilibriumData eq_;
  std::array<AgeProfile, 2> pi0_;
  std::array<AgeProfile, 2> k_tilde_;
  std::array<AgeProfile, 2> b_bar_;
  std::array<AgeProfile, 2> renewal_;
  // Discrete adjoint weights, applied to x / x* (pi_weight_) or to psi
  // (p_weight_, normalized so P(1) = 1).
  std::array<AgeProfile, 2> pi_weight_;
  std::array<AgeProfile, 2> p_weight_;
};

}  // namespace agestruct
