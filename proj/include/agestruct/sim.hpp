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
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "agestruct/certificates.hpp"
#include "agestruct/control.hpp"
#include "agestruct/transform.hpp"

namespace agestruct {

using PopulationState = std::array<AgeProfile, 2>;

/// psi(t - a_j), j = 0..N, in a ring buffer. Index 0 is the newest sample.
class HistoryBuffer {
 public:
  HistoryBuffer() = default;
  /// history(j) = psi(t - a_j).
  explicit HistoryBuffer(const AgeProfile& history);

  Eigen::Index size() const { return data_.size(); }
  double operator[](Eigen::Index j) const {
    return data_((head_ + j) % data_.size());
  }
  double newest() const { return data_(head_); }

  /// Shifts the window by one step: the oldest sample drops out and `value`
  /// becomes psi(t).
  void push(double value);

  /// sum_j w_j psi(t - a_j).
  double weighted_sum(const AgeProfile& w) const;

  AgeProfile to_profile() const;
  double sup_norm() const { return data_.abs().maxCoeff(); }
  double min() const { return data_.minCoeff(); }

 private:
  AgeProfile data_;
  Eigen::Index head_ = 0;
};

/// Characteristics solver for the age-structured model with dt = da.
class IpdeStepper {
 public:
  explicit IpdeStepper(const Discretization& disc);

  /// One step of length da with dilution u held over the step. Throws
  /// NumericalError if 1 - w_0 k(0) <= 0.
  PopulationState step(const PopulationState& x, double u) const;

  /// Newborn density from the renewal condition with the a = 0 trapezoid
  /// node moved to the left-hand side.
  double renewal_boundary(Species s, const AgeProfile& x) const;

  /// int b_i x_j, the interaction rate felt by species i.
  double interaction_rate(Species s, const PopulationState& x) const;

  double step_size() const { return disc_.grid.step(); }

 private:
  Discretization disc_;
  std::array<AgeProfile, 2> cell_survival_;  // exp(-int_{a_{j-1}}^{a_j} mu)
  std::array<double, 2> boundary_denominator_{};
};

PopulationState step_ipde(const Discretization& disc, const PopulationState& x,
                          double u);

struct OdeIdeState {
  Eigen::Vector2d eta = Eigen::Vector2d::Zero();
  std::array<HistoryBuffer, 2> psi;
};

OdeIdeState to_ode_ide_state(const TransformedState& state);
TransformedState to_transformed_state(const OdeIdeState& state);

/// Solver for the transformed system: RK4 on eta with the psi moments and u
/// frozen over the step, then one renewal step of each psi history.
class OdeIdeStepper {
 public:
  explicit OdeIdeStepper(std::shared_ptr<const StateTransform> transform);

  OdeIdeState step(const OdeIdeState& state, double u) const;

  /// eta-dot at `eta` with psi moments s = (int b-bar psi_1, int b-bar psi_2).
  Eigen::Vector2d rhs(const Eigen::Vector2d& eta, const Eigen::Vector2d& s,
                      double u) const;

  /// New psi(t + da) from the current history.
  double renewal_value(Species s, const HistoryBuffer& psi) const;

  double step_size() const { return tr_->equilibrium().grid().step(); }
  const StateTransform& transform() const { return *tr_; }

 private:
  std::shared_ptr<const StateTransform> tr_;
  OdeCoefficients ode_;
  std::array<AgeProfile, 2> moment_weight_;  // w_j * b-bar_j
};

enum class SolverKind { ipde, ode_ide };

struct InitialCondition {
  enum class Kind { underpopulated, equilibrium, profiles, eta_psi };
  Kind kind = Kind::underpopulated;
  PopulationState profiles;  // Kind::profiles
  TransformedState state;    // Kind::eta_psi

  static InitialCondition underpopulated() { return {}; }
  static InitialCondition equilibrium() { return {Kind::equilibrium, {}, {}}; }
  static InitialCondition from_profiles(AgeProfile x1, AgeProfile x2) {
    return {Kind::profiles, {std::move(x1), std::move(x2)}, {}};
  }
  static InitialCondition from_state(TransformedState s) {
    return {Kind::eta_psi, {}, std::move(s)};
  }
};

/// The underpopulated initial profiles x_i*(a) e^{-0.2(1 + a)}.
PopulationState underpopulated_profiles(const EquilibriumData& eq);

struct Snapshot {
  double t = 0.0;
  PopulationState x;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Eigen::Vector2d> eta;
  std::vector<double> u;
  std::vector<double> V;
  std::vector<double> G1;
  std::vector<double> G2;
  std::vector<double> psi_sup1;
  std::vector<double> psi_sup2;
  std::vector<double> p_residual1;
  std::vector<double> p_residual2;
  std::vector<double> boundary_residual1;
  std::vector<double> boundary_residual2;
  std::vector<Snapshot> snapshots;
  bool profiles_positive = true;

  std::size_t size() const { return times.size(); }
  double eta_norm(std::size_t n) const { return eta[n].norm(); }
  const std::vector<double>& psi_sup(Species s) const {
    return s == Species::first ? psi_sup1 : psi_sup2;
  }
};

struct SimOptions {
  SolverKind solver = SolverKind::ode_ide;
  bool open_loop = false;  // u = u* throughout
  InitialCondition ic;
  std::optional<double> t_final;  // defaults to the config horizon
  std::vector<double> snapshot_times;
  double blowup_threshold = 50.0;
  /// Called after every step with the current time and age profiles
  /// (reconstructed for the transformed solver).
  std::function<void(double, const PopulationState&)> observer;
};

/// Raised when |eta_i| exceeds the blow-up threshold. Carries the
/// trajectory up to the last accepted step.
class SimulationGuardError : public std::runtime_error {
 public:
  SimulationGuardError(const std::string& what, Trajectory partial)
      : std::runtime_error(what),
        partial_(std::make_shared<Trajectory>(std::move(partial))) {}
  const Trajectory& partial() const { return *partial_; }

 private:
  std::shared_ptr<Trajectory> partial_;
};

/// Everything derived from a config that a run needs. Immutable; may be
/// shared by concurrent runs.
struct SimContext {
  ModelConfig config;
  std::shared_ptr<const StateTransform> transform;
  // Empty when the kernels fail Assumption 1; V and G traces are then NaN.
  std::optional<CertificateData> certificates;
  OdeCoefficients ode;

  static SimContext build(const ModelConfig& config);
  const EquilibriumData& equilibrium() const {
    return transform->equilibrium();
  }
};

/// Simulates from the initial condition to the horizon. u comes from the
/// feedback law evaluated at eta = ln Pi[x] (IPDE) or at the integrated
/// eta (ODE-IDE). Throws SimulationGuardError on blow-up.
Trajectory run_closed_loop(const SimContext& ctx, const SimOptions& options);
Trajectory run_closed_loop(const ModelConfig& config,
                           const SimOptions& options);

struct ExponentialFit {
  double prefactor = 0.0;
  double rate = 0.0;  // y ~ prefactor * e^{rate t}
  std::size_t points = 0;
};

/// Least-squares fit of ln y against t over samples with lo < y < hi and
/// t >= t_min. Throws NumericalError with fewer than two samples.
ExponentialFit fit_exponential(const std::vector<double>& t,
                               const std::vector<double>& y, double lo,
                               double hi, double t_min = 0.0);

struct DecayFit {
  double M = 0.0;
  double sigma_fit = 0.0;  // ||psi_t|| ~ M e^{-sigma_fit t}
  std::size_t points = 0;
};

/// Fit of ln ||psi_t||_inf over the window ||psi_t||_inf > 1e-10. Throws
/// NumericalError "window empty" when psi is identically zero.
DecayFit fit_psi_decay(const Trajectory& traj, Species s);

}  // namespace agestruct
