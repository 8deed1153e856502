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
#include <limits>
#include <vector>

#include <Eigen/Core>

#include "agestruct/control.hpp"
#include "agestruct/special_functions.hpp"
#include "agestruct/transform.hpp"

namespace agestruct {

/// Result of the Assumption-1 search for one species.
struct Assumption1Result {
  double kappa = 0.0;
  double sigma = 0.0;
  double objective = 0.0;  // J(kappa) at sigma = 0
  double z = 0.0;          // (int a k~)^{-1}
};

/// J(kappa, sigma) = int |k~(a) - z kappa int_a^A k~| e^{sigma a} da.
double assumption1_objective(const StateTransform& tr, Species s, double kappa,
                             double sigma = 0.0);

/// Golden-section search for kappa minimizing J(kappa, 0) on
/// (0, 10 max(k~)/z], then bisection for the largest sigma with J < 1.
/// Throws CertificateError when min J >= 1.
Assumption1Result verify_assumption1(const StateTransform& tr, Species s);

/// max_j |psi_j| e^{sigma (A - a_j)} / (1 + min(0, min_j psi_j)) where
/// psi_j = psi(-a_j). Throws std::domain_error if psi <= -1 somewhere.
double G_functional(const AgeProfile& psi, double sigma, const AgeGrid& grid);

struct CertificateData {
  GainSet gains;
  double B1 = 0.0;
  double Btheta = 0.0;
  std::array<double, 2> gamma{};
  std::array<double, 2> sigma{};
  std::array<double, 2> kappa{};
  std::array<double, 2> assumption_objective{};
  std::array<double, 2> H{};
  // Filled by roa_level; NaN until then.
  double c_star = std::numeric_limits<double>::quiet_NaN();
  double c0_star = std::numeric_limits<double>::quiet_NaN();
};

/// B values, gamma weights (gamma_factor times the lower bounds), caps H and
/// the Assumption-1 constants. Configured sigma_i override the Assumption-1
/// value if present. Throws CertificateError when the caps are not positive.
CertificateData build_certificates(const StateTransform& tr,
                                   const ModelConfig& config);

/// V = ln(1 + V3(eta)) + sum_i gamma_i / sigma_i h(G_i(psi_i)).
double V_total(const Eigen::Vector2d& eta, const AgeProfile& psi1,
               const AgeProfile& psi2, const CertificateData& cert,
               const AgeGrid& grid);

/// eta_1 <= H_1, eta_2 <= H_2 and u(eta) > 0.
bool in_D(const Eigen::Vector2d& eta, const CertificateData& cert,
          const OdeCoefficients& ode);
/// Same, after checking that both histories stay above -1.
bool in_D(const Eigen::Vector2d& eta, const AgeProfile& psi1,
          const AgeProfile& psi2, const CertificateData& cert,
          const OdeCoefficients& ode);

/// Membership of (eta, psi) in the sublevel set Omega_c of V.
bool in_omega(const Eigen::Vector2d& eta, const AgeProfile& psi1,
              const AgeProfile& psi2, const CertificateData& cert,
              const AgeGrid& grid);

struct RoaOptions {
  int grid_points = 600;     // per axis, u = 0 contour scan
  int cap_samples = 2000;    // per cap line
  double box = 4.0;          // scan [-box, box]^2
  int threads = 0;           // 0: AGESTRUCT_THREADS or hardware
};

struct ContourSegment {
  Eigen::Vector2d p;
  Eigen::Vector2d q;
};

/// Piecewise-linear level-zero set of u(eta) on a uniform grid over the box,
/// by marching squares. Rows are evaluated concurrently; the segment order
/// is deterministic (row-major).
std::vector<ContourSegment> zero_contour(const OdeCoefficients& ode,
                                         const GainSet& gains,
                                         const RoaOptions& options);

/// Marching squares on row-major samples values[r * n + c] at
/// (-box + 2 box c / (n - 1), -box + 2 box r / (n - 1)).
std::vector<ContourSegment> sample_contour(const std::vector<double>& values,
                                           int n, double box, int threads = 0);

struct ContourTopology {
  int components = 0;
  int interior_endpoints = 0;  // chain ends strictly inside the box
  int boundary_endpoints = 0;  // chain ends on the box edge
  /// One connected curve with no dangling ends inside the box: either a
  /// loop, or an arc closed off by the box boundary.
  bool closed_in_box() const {
    return components == 1 && interior_endpoints == 0;
  }
};

ContourTopology analyze_contour(const std::vector<ContourSegment>& segments,
                                double box);

struct RoaResult {
  double c_star = 0.0;
  double c0_star = 0.0;
  std::vector<ContourSegment> contour;
  ContourTopology topology;
};

/// c0_star = min V3 over the u = 0 contour; c_star = min ln(1 + V3) over the
/// boundary of the psi = 0 slice of D (the caps eta_i = H_i and the part of
/// the u = 0 contour below both caps). Throws CertificateError if the slice
/// is empty or misses the origin.
RoaResult roa_level(const CertificateData& cert, const OdeCoefficients& ode,
                    const RoaOptions& options = {});

/// min{sigma_1, sigma_2, -lambda_2 Re p_1, -lambda_2 Re p_2} / (1 + eps),
/// p the roots of s^2 + (c1 + c2) s + theta + c1 c2.
double decay_rate_estimate(const GainSet& gains, double sigma1, double sigma2,
                           double lambda2, double epsilon);

}  // namespace agestruct
