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

#include "agestruct/transform.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace agestruct {

namespace {

void require_positive(const AgeProfile& x, const char* what) {
  if (!(x > 0).all())
    throw std::domain_error(std::string(what) + ": profile must be positive");
}

void require_above_minus_one(const AgeProfile& psi, const char* what) {
  if (!(psi > -1).all())
    throw std::domain_error(std::string(what) + ": psi must exceed -1");
}

}  // namespace

AgeProfile adjoint_eigenfunction(const EquilibriumData& eq, Species s) {
  const double h = eq.grid().step();
  const AgeProfile& surv = eq.survival_of(s);
  // pi_0 = e^{C} T with T the trapezoid tail of k~ = k e^{-C}.
  const AgeProfile tail = tail_trapezoid(eq.disc.of(s).birth * surv, h);
  return tail / surv;
}

StateTransform::StateTransform(const EquilibriumData& eq) : eq_(eq) {
  const AgeGrid& grid = eq_.grid();
  const Eigen::Index n = grid.size();
  const AgeProfile& w = eq_.disc.weights;
  for (Species s : kBothSpecies) {
    const int i = index_of(s);
    pi0_[i] = adjoint_eigenfunction(eq_, s);
    k_tilde_[i] = eq_.disc.of(s).birth * eq_.survival_of(s);
    b_bar_[i] = eq_.disc.of(other(s)).interaction * eq_.profile_of(s) /
                eq_.lambda_of(s);

    const AgeProfile wk = w * k_tilde_[i];
    const double denom = 1.0 - wk(0);
    renewal_[i] = AgeProfile::Zero(n);
    renewal_[i].head(n - 1) = wk.tail(n - 1) / denom;

    // S_{j+1} = sum_{l > j} w_l k~_l; the weight of psi(-a_j) in P.
    AgeProfile suffix = AgeProfile::Zero(n);
    for (Eigen::Index j = n - 1; j-- > 0;) suffix(j) = suffix(j + 1) + wk(j + 1);
    p_weight_[i] = suffix / suffix.sum();
    pi_weight_[i] = p_weight_[i] / eq_.profile_of(s);
  }
}

double StateTransform::pi_functional(Species s, const AgeProfile& x) const {
  require_positive(x, "pi_functional");
  return (pi_weight_[index_of(s)] * x).sum();
}

TransformedState StateTransform::forward(const AgeProfile& x1,
                                         const AgeProfile& x2) const {
  TransformedState out;
  const AgeProfile* xs[2] = {&x1, &x2};
  for (Species s : kBothSpecies) {
    const int i = index_of(s);
    const double pi = pi_functional(s, *xs[i]);
    out.eta(i) = std::log(pi);
    out.psi[i] = *xs[i] / (eq_.profile[i] * pi) - 1.0;
  }
  return out;
}

std::pair<AgeProfile, AgeProfile> StateTransform::reconstruct(
    const TransformedState& state) const {
  for (const auto& psi : state.psi) require_above_minus_one(psi, "reconstruct");
  return {eq_.profile[0] * std::exp(state.eta(0)) * (1.0 + state.psi[0]),
          eq_.profile[1] * std::exp(state.eta(1)) * (1.0 + state.psi[1])};
}

double StateTransform::interaction_moment(Species s,
                                          const AgeProfile& psi) const {
  return (eq_.disc.weights * b_bar_[index_of(s)] * psi).sum();
}

double StateTransform::v_map(Species s, const AgeProfile& psi) const {
  require_above_minus_one(psi, "v_map");
  const double m = interaction_moment(s, psi);
  if (!(1.0 + m > 0)) throw std::domain_error("v_map: log argument <= 0");
  return std::log1p(m);
}

double StateTransform::constraint_p(Species s, const AgeProfile& psi) const {
  return (p_weight_[index_of(s)] * psi).sum();
}

double StateTransform::boundary_residual(Species s,
                                         const AgeProfile& psi) const {
  return psi(0) -
         trapezoid(k_tilde_[index_of(s)] * psi, eq_.grid().step());
}

double StateTransform::output_feedback_pi(Species s, double y,
                                          const AgeProfile& q) const {
  if (!(y > 0)) throw std::domain_error("output_feedback_pi: y must be positive");
  if ((q < 0).any())
    throw std::domain_error("output_feedback_pi: kernel must be non-negative");
  const double denom = lumped_output(q, eq_.profile_of(s));
  if (!(denom > 0))
    throw std::domain_error("output_feedback_pi: degenerate output kernel");
  return y / denom;
}

double StateTransform::lumped_output(const AgeProfile& q,
                                     const AgeProfile& x) const {
  return trapezoid(q * x, eq_.grid().step());
}

}  // namespace agestruct
