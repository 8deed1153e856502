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

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "agestruct/certificates.hpp"
#include "agestruct/equilibrium.hpp"
#include "agestruct/sim.hpp"
#include "agestruct/transform.hpp"
#include "../support/fixtures.hpp"
#include "../support/oracles.hpp"

namespace agestruct {
namespace {

ModelConfig base_config(int intervals = 400) {
  ModelConfig c = ModelConfig::defaults();
  c.age_intervals = intervals;
  return c;
}

struct TransformTest : ::testing::Test {
  EquilibriumData eq = assemble_equilibrium(base_config());
  StateTransform tr{eq};
  std::mt19937_64 rng{12345};

  AgeProfile underpopulated(Species s) const {
    return eq.profile_of(s) * (-0.2 * (1.0 + eq.disc.ages)).exp();
  }

  // Smooth random positive perturbation of the equilibrium profile.
  AgeProfile random_profile(Species s) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    const AgeProfile& a = eq.disc.ages;
    const AgeProfile g = u(rng) * a + 0.3 * u(rng) * (5.0 * a).sin() +
                         0.2 * u(rng) * (a * a);
    return eq.profile_of(s) * std::exp(u(rng)) * g.exp();
  }
};

TEST_F(TransformTest, EigenfunctionVanishesAtMaxAge) {
  for (Species s : kBothSpecies) {
    const AgeProfile& p = tr.eigenfunction(s);
    EXPECT_EQ(p(p.size() - 1), 0.0);
    EXPECT_TRUE((p.head(p.size() - 1) > 0).all());
  }
}

TEST(AdjointEigenfunction, ConstantKernelsZeroGrowth) {
  ModelConfig c = ModelConfig::defaults();
  for (auto& s : c.kernels) {
    s.mortality = KernelSpec::constant_rate(0.0);
    s.birth = KernelSpec::constant_rate(1.0);
  }
  // zeta = 0 admits no positive equilibrium, so only the pieces the
  // eigenfunction needs are filled in.
  EquilibriumData eq;
  eq.disc = discretize(c);
  eq.zeta[0] = solve_lotka_sharpe(eq.disc, Species::first);
  eq.survival[0] = survival_profile(eq.disc, Species::first, eq.zeta[0]);
  EXPECT_NEAR(eq.zeta[0], 0.0, 1e-12);
  EXPECT_NEAR(adjoint_eigenfunction(eq, Species::first)(0), 1.0, 1e-10);
}

TEST_F(TransformTest, EigenfunctionDecreasesAndMatchesQuadrature) {
  const AgeProfile& p = tr.eigenfunction(Species::first);
  for (Eigen::Index j = 1; j < p.size(); ++j) EXPECT_LT(p(j), p(j - 1));

  const double zeta = eq.zeta[0];
  const auto cum = [&](double a) { return 0.5 * std::expm1(a) + zeta * a; };
  for (int j : {0, 100, 200, 300, 399}) {
    const double a = eq.disc.ages(j);
    const double ref = oracle::integrate(
        [&](double s) { return 3.0 * std::exp(-s) * std::exp(cum(a) - cum(s)); },
        a, 1.0);
    EXPECT_NEAR(p(j), ref, 1e-4 * std::max(1.0, ref)) << "a = " << a;
  }
}

TEST_F(TransformTest, PiOfEquilibriumIsOne) {
  for (Species s : kBothSpecies) {
    EXPECT_NEAR(tr.pi_functional(s, eq.profile_of(s)), 1.0, 1e-8);
    EXPECT_NEAR(tr.pi_functional(s, 2.0 * eq.profile_of(s)), 2.0, 1e-8);
  }
}

TEST_F(TransformTest, PiIsLinear) {
  for (int k = 0; k < 20; ++k) {
    const AgeProfile x = random_profile(Species::first);
    const AgeProfile w = random_profile(Species::first);
    const double a = 0.3 + k * 0.1, b = 2.0 - k * 0.05;
    const double lhs = tr.pi_functional(Species::first, a * x + b * w);
    const double rhs = a * tr.pi_functional(Species::first, x) +
                       b * tr.pi_functional(Species::first, w);
    EXPECT_NEAR(lhs, rhs, 1e-12 * std::abs(rhs));
  }
}

TEST_F(TransformTest, PiRejectsNonPositiveProfiles) {
  AgeProfile x = eq.profile[0];
  x(7) = 0.0;
  EXPECT_THROW(tr.pi_functional(Species::first, x), std::domain_error);
}

TEST_F(TransformTest, UnderpopulatedProfiles) {
  for (Species s : kBothSpecies) {
    const double pi = tr.pi_functional(s, underpopulated(s));
    EXPECT_GT(pi, 0.75);
    EXPECT_LT(pi, 0.82);
    EXPECT_NEAR(pi, fixtures::kPiUnderpopulated, 2e-4);
  }
}

TEST(PiFunctional, ConvergesToContinuousValue) {
  double prev = 0;
  for (int n : {200, 400, 800, 1600}) {
    const EquilibriumData eq = assemble_equilibrium(base_config(n));
    const StateTransform tr(eq);
    const AgeProfile x =
        eq.profile[0] * (-0.2 * (1.0 + eq.disc.ages)).exp();
    const double err =
        std::abs(tr.pi_functional(Species::first, x) -
                 fixtures::kPiUnderpopulated);
    if (prev > 0) EXPECT_GT(prev / err, 1.7) << "N_a = " << n;
    prev = err;
  }
}

TEST_F(TransformTest, ForwardMapsEquilibriumToOrigin) {
  const TransformedState s = tr.forward(eq.profile[0], eq.profile[1]);
  EXPECT_NEAR(s.eta(0), 0.0, 1e-14);
  EXPECT_NEAR(s.eta(1), 0.0, 1e-14);
  EXPECT_LT(s.psi[0].abs().maxCoeff(), 1e-14);
  EXPECT_LT(s.psi[1].abs().maxCoeff(), 1e-14);
}

TEST_F(TransformTest, ForwardOfScaledEquilibrium) {
  const TransformedState s =
      tr.forward(3.0 * eq.profile[0], 0.5 * eq.profile[1]);
  EXPECT_NEAR(s.eta(0), std::log(3.0), 1e-14);
  EXPECT_NEAR(s.eta(1), std::log(0.5), 1e-14);
  EXPECT_LT(s.psi[0].abs().maxCoeff(), 1e-14);
  EXPECT_LT(s.psi[1].abs().maxCoeff(), 1e-14);
}

TEST_F(TransformTest, UnderpopulatedHistoryIsAdmissible) {
  const TransformedState s =
      tr.forward(underpopulated(Species::first), underpopulated(Species::second));
  for (Species sp : kBothSpecies) {
    const AgeProfile& psi = s.psi_of(sp);
    EXPECT_LT(std::abs(tr.constraint_p(sp, psi)), 1e-6);
    // psi(-a) is proportional to e^{-0.2 a}.
    const AgeProfile shape =
        (-0.2 * (1.0 + eq.disc.ages)).exp() / std::exp(s.eta(index_of(sp))) -
        1.0;
    EXPECT_LT((psi - shape).abs().maxCoeff(), 1e-13);
  }
  EXPECT_NEAR(s.eta(0), fixtures::kEtaUnderpopulated, 3e-4);
}

// The underpopulated start is not renewal-compatible; one transport step
// makes it so, up to rounding.
TEST(Transform, BoundaryResidualVanishesAfterOneStep) {
  for (int n : {100, 400}) {
    const EquilibriumData eq = assemble_equilibrium(base_config(n));
    const StateTransform tr(eq);
    const AgeProfile x = eq.profile[0] * (-0.2 * (1.0 + eq.disc.ages)).exp();
    const TransformedState s0 = tr.forward(x, x);
    EXPECT_GT(std::abs(tr.boundary_residual(Species::first, s0.psi[0])), 0.01);
    const auto x1 = step_ipde(eq.disc, {x, x}, eq.u_star);
    const TransformedState s1 = tr.forward(x1[0], x1[1]);
    for (Species sp : kBothSpecies)
      EXPECT_LT(std::abs(tr.boundary_residual(sp, s1.psi[index_of(sp)])), 1e-12)
          << "N_a = " << n;
  }
}

TEST_F(TransformTest, RoundTripIsIdentity) {
  for (int k = 0; k < 50; ++k) {
    const AgeProfile x1 = random_profile(Species::first);
    const AgeProfile x2 = random_profile(Species::second);
    const auto [y1, y2] = tr.reconstruct(tr.forward(x1, x2));
    EXPECT_LT(((y1 - x1).abs() / x1).maxCoeff(), 1e-10);
    EXPECT_LT(((y2 - x2).abs() / x2).maxCoeff(), 1e-10);
  }
}

TEST_F(TransformTest, ReconstructExamples) {
  TransformedState s;
  s.psi = {AgeProfile::Zero(eq.grid().size()),
           AgeProfile::Zero(eq.grid().size())};
  auto [x1, x2] = tr.reconstruct(s);
  EXPECT_TRUE((x1 == eq.profile[0]).all());
  EXPECT_TRUE((x2 == eq.profile[1]).all());

  s.eta = {std::log(2.0), 0.0};
  std::tie(x1, x2) = tr.reconstruct(s);
  EXPECT_LT((x1 - 2.0 * eq.profile[0]).abs().maxCoeff(), 1e-12);
  EXPECT_TRUE((x2 == eq.profile[1]).all());

  s.psi[1](3) = -1.0;
  EXPECT_THROW(tr.reconstruct(s), std::domain_error);
}

TEST_F(TransformTest, InteractionKernelsIntegrateToOne) {
  const double h = eq.grid().step();
  for (Species s : kBothSpecies)
    EXPECT_NEAR(trapezoid(tr.interaction_kernel(s), h), 1.0, 1e-13);
  // psi_2 acts on eta_1 through b_1 x_2*.
  const AgeProfile expected =
      eq.disc.of(Species::first).interaction * eq.profile[1] / eq.lambda[1];
  EXPECT_LT((tr.interaction_kernel(Species::second) - expected)
                .abs()
                .maxCoeff(),
            1e-15);
}

TEST_F(TransformTest, VMapExamples) {
  const Eigen::Index n = eq.grid().size();
  EXPECT_EQ(tr.v_map(Species::first, AgeProfile::Zero(n)), 0.0);
  for (double c : {-0.5, 0.2, 3.0})
    EXPECT_NEAR(tr.v_map(Species::second, AgeProfile::Constant(n, c)),
                std::log1p(c), 1e-13);
  EXPECT_THROW(tr.v_map(Species::first, AgeProfile::Constant(n, -1.0)),
               std::domain_error);
}

TEST_F(TransformTest, VMapBoundedByG) {
  const ModelConfig c = base_config();
  const CertificateData cert = build_certificates(tr, c);
  for (int k = 0; k < 200; ++k) {
    const AgeProfile x1 = random_profile(Species::first);
    const AgeProfile x2 = random_profile(Species::second);
    const TransformedState s = tr.forward(x1, x2);
    for (Species sp : kBothSpecies) {
      const double v = tr.v_map(sp, s.psi_of(sp));
      const double g =
          G_functional(s.psi_of(sp), cert.sigma[index_of(sp)], eq.grid());
      EXPECT_LE(std::abs(v), g);
    }
  }
}

TEST_F(TransformTest, OutputFeedbackEstimate) {
  const AgeProfile& a = eq.disc.ages;
  const AgeProfile q1 = AgeProfile::Ones(a.size());
  const AgeProfile q2 = a * (1.0 - a);
  for (const AgeProfile* q : {&q1, &q2}) {
    for (double c : {1.0, 0.3, 2.5}) {
      const double y = tr.lumped_output(*q, c * eq.profile[0]);
      EXPECT_NEAR(tr.output_feedback_pi(Species::first, y, *q), c, 1e-13);
    }
  }
  EXPECT_THROW(tr.output_feedback_pi(Species::first, 1.0,
                                     AgeProfile::Zero(a.size())),
               std::domain_error);
  EXPECT_THROW(tr.output_feedback_pi(Species::first, -1.0, q1),
               std::domain_error);
}

TEST_F(TransformTest, OutputFeedbackErrorBoundedByG) {
  const CertificateData cert = build_certificates(tr, base_config());
  const AgeProfile& a = eq.disc.ages;
  const AgeProfile q = 1.0 + a;
  for (int k = 0; k < 200; ++k) {
    const AgeProfile x1 = random_profile(Species::first);
    const AgeProfile x2 = random_profile(Species::second);
    const TransformedState s = tr.forward(x1, x2);
    const AgeProfile* xs[2] = {&x1, &x2};
    for (Species sp : kBothSpecies) {
      const int i = index_of(sp);
      const double est =
          tr.output_feedback_pi(sp, tr.lumped_output(q, *xs[i]), q);
      const double g = G_functional(s.psi[i], cert.sigma[i], eq.grid());
      EXPECT_LE(std::abs(std::log(est) - s.eta(i)), g);
    }
  }
}

}  // namespace
}  // namespace agestruct
