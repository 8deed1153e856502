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

#include "agestruct/certificates.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>

#include "agestruct/error.hpp"
#include "agestruct/parallel.hpp"

namespace agestruct {

namespace {

struct Assumption1Tables {
  AgeProfile k_tilde;
  AgeProfile tail;
  AgeProfile ages;
  double h = 0.0;
  double z = 0.0;
};

Assumption1Tables assumption1_tables(const StateTransform& tr, Species s) {
  const EquilibriumData& eq = tr.equilibrium();
  Assumption1Tables t;
  t.h = eq.grid().step();
  t.k_tilde = tr.normalized_birth(s);
  t.tail = tail_trapezoid(t.k_tilde, t.h);
  t.ages = eq.disc.ages;
  t.z = 1.0 / trapezoid(t.ages * t.k_tilde, t.h);
  return t;
}

double objective(const Assumption1Tables& t, double kappa, double sigma) {
  const AgeProfile f = (t.k_tilde - t.z * kappa * t.tail).abs();
  if (sigma == 0) return trapezoid(f, t.h);
  return trapezoid(f * (sigma * t.ages).exp(), t.h);
}

}  // namespace

double assumption1_objective(const StateTransform& tr, Species s, double kappa,
                             double sigma) {
  return objective(assumption1_tables(tr, s), kappa, sigma);
}

Assumption1Result verify_assumption1(const StateTransform& tr, Species s) {
  const Assumption1Tables t = assumption1_tables(tr, s);
  Assumption1Result r;
  r.z = t.z;

  // J is convex in kappa (an integral of |affine|), so golden section finds
  // the global minimum on the bracket.
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = 0.0, hi = 10.0 * t.k_tilde.maxCoeff() / t.z;
  double x1 = hi - inv_phi * (hi - lo), x2 = lo + inv_phi * (hi - lo);
  double f1 = objective(t, x1, 0), f2 = objective(t, x2, 0);
  while (hi - lo > 1e-10 * std::max(1.0, hi)) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - inv_phi * (hi - lo);
      f1 = objective(t, x1, 0);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + inv_phi * (hi - lo);
      f2 = objective(t, x2, 0);
    }
  }
  r.kappa = 0.5 * (lo + hi);
  r.objective = objective(t, r.kappa, 0);
  if (!(r.objective < 1))
    throw CertificateError("Assumption 1 not verifiable for these kernels");

  double s_lo = 0.0, s_hi = 1.0;
  for (int n = 0; objective(t, r.kappa, s_hi) < 1; ++n) {
    if (n > 60) throw NumericalError("Assumption 1 sigma bracket failed");
    s_lo = s_hi;
    s_hi *= 2.0;
  }
  for (int it = 0; it < 200 && s_hi - s_lo > 1e-13 * s_hi; ++it) {
    const double mid = 0.5 * (s_lo + s_hi);
    (objective(t, r.kappa, mid) < 1 ? s_lo : s_hi) = mid;
  }
  r.sigma = s_lo;
  return r;
}

double G_functional(const AgeProfile& psi, double sigma, const AgeGrid& grid) {
  if (!(psi > -1).all())
    throw std::domain_error("G_functional: psi must exceed -1");
  const AgeProfile weight =
      (sigma * (grid.max_age - grid.ages())).exp();
  const double top = (psi.abs() * weight).maxCoeff();
  return top / (1.0 + std::min(0.0, psi.minCoeff()));
}

CertificateData build_certificates(const StateTransform& tr,
                                   const ModelConfig& config) {
  const EquilibriumData& eq = tr.equilibrium();
  CertificateData c;
  c.gains = config.gains;
  c.B1 = B_bound(1.0);
  c.Btheta = B_bound(config.gains.theta);
  const std::array<double, 2> lower = {
      2.0 * eq.lambda[0] * c.B1,
      2.0 * eq.lambda[1] * config.gains.c1 * (c.B1 + c.Btheta)};
  for (Species s : kBothSpecies) {
    const int i = index_of(s);
    c.gamma[i] = config.gamma_factor * lower[i];
    c.H[i] = std::log(c.gamma[i] / lower[i]);
    if (!(c.H[i] > 0))
      throw CertificateError("gamma weights do not exceed their lower bounds");
    const Assumption1Result a1 = verify_assumption1(tr, s);
    c.kappa[i] = a1.kappa;
    c.assumption_objective[i] = a1.objective;
    c.sigma[i] = config.sigma[i] ? *config.sigma[i] : a1.sigma;
  }
  return c;
}

double V_total(const Eigen::Vector2d& eta, const AgeProfile& psi1,
               const AgeProfile& psi2, const CertificateData& cert,
               const AgeGrid& grid) {
  const AgeProfile* psi[2] = {&psi1, &psi2};
  double v = std::log1p(lyapunov_v3(eta, cert.gains));
  for (int i = 0; i < 2; ++i)
    v += cert.gamma[i] / cert.sigma[i] *
         h_integral(G_functional(*psi[i], cert.sigma[i], grid));
  return v;
}

bool in_D(const Eigen::Vector2d& eta, const CertificateData& cert,
          const OdeCoefficients& ode) {
  return eta(0) <= cert.H[0] && eta(1) <= cert.H[1] &&
         control_law(eta, ode, cert.gains) > 0;
}

bool in_D(const Eigen::Vector2d& eta, const AgeProfile& psi1,
          const AgeProfile& psi2, const CertificateData& cert,
          const OdeCoefficients& ode) {
  if (!(psi1 > -1).all() || !(psi2 > -1).all())
    throw std::domain_error("in_D: psi must exceed -1");
  return in_D(eta, cert, ode);
}

bool in_omega(const Eigen::Vector2d& eta, const AgeProfile& psi1,
              const AgeProfile& psi2, const CertificateData& cert,
              const AgeGrid& grid) {
  return V_total(eta, psi1, psi2, cert, grid) <= cert.c_star;
}

namespace {

// Zero crossing on the edge between nodes (pa, va) and (pb, vb). Callers pass
// the nodes in a fixed order so that neighbouring cells agree bitwise.
Eigen::Vector2d edge_point(const Eigen::Vector2d& pa, double va,
                           const Eigen::Vector2d& pb, double vb) {
  const double t = va / (va - vb);
  if (t <= 0) return pa;
  if (t >= 1) return pb;
  return pa + t * (pb - pa);
}

}  // namespace

std::vector<ContourSegment> zero_contour(const OdeCoefficients& ode,
                                         const GainSet& gains,
                                         const RoaOptions& options) {
  const int n = options.grid_points;
  if (n < 2) throw std::invalid_argument("zero_contour: grid too small");
  const double box = options.box;
  const auto coord = [&](int k) { return -box + 2.0 * box * k / (n - 1); };

  std::vector<double> values(static_cast<std::size_t>(n) * n);
  parallel_for(n, options.threads, [&](int r) {
    for (int c = 0; c < n; ++c)
      values[static_cast<std::size_t>(r) * n + c] =
          control_law({coord(c), coord(r)}, ode, gains);
  });
  return sample_contour(values, n, box, options.threads);
}

std::vector<ContourSegment> sample_contour(const std::vector<double>& values,
                                           int n, double box, int threads) {
  if (n < 2 || values.size() != static_cast<std::size_t>(n) * n)
    throw std::invalid_argument("sample_contour: expected n * n samples");
  const auto coord = [&](int k) { return -box + 2.0 * box * k / (n - 1); };
  std::vector<std::vector<ContourSegment>> rows(n - 1);
  parallel_for(n - 1, threads, [&](int r) {
    auto& out = rows[r];
    for (int c = 0; c + 1 < n; ++c) {
      const double v00 = values[static_cast<std::size_t>(r) * n + c];
      const double v01 = values[static_cast<std::size_t>(r) * n + c + 1];
      const double v10 = values[static_cast<std::size_t>(r + 1) * n + c];
      const double v11 = values[static_cast<std::size_t>(r + 1) * n + c + 1];
      const bool b00 = v00 > 0, b01 = v01 > 0, b10 = v10 > 0, b11 = v11 > 0;
      const int crossings = (b00 != b01) + (b01 != b11) + (b10 != b11) +
                            (b00 != b10);
      if (crossings == 0) continue;
      const Eigen::Vector2d p00(coord(c), coord(r)), p01(coord(c + 1), coord(r));
      const Eigen::Vector2d p10(coord(c), coord(r + 1));
      const Eigen::Vector2d p11(coord(c + 1), coord(r + 1));
      const auto bottom = [&] { return edge_point(p00, v00, p01, v01); };
      const auto right = [&] { return edge_point(p01, v01, p11, v11); };
      const auto top = [&] { return edge_point(p10, v10, p11, v11); };
      const auto left = [&] { return edge_point(p00, v00, p10, v10); };
      if (crossings == 4) {
        const bool center = 0.25 * (v00 + v01 + v10 + v11) > 0;
        if (center == b00) {
          out.push_back({bottom(), right()});
          out.push_back({top(), left()});
        } else {
          out.push_back({left(), bottom()});
          out.push_back({right(), top()});
        }
        continue;
      }
      std::vector<Eigen::Vector2d> pts;
      if (b00 != b01) pts.push_back(bottom());
      if (b01 != b11) pts.push_back(right());
      if (b10 != b11) pts.push_back(top());
      if (b00 != b10) pts.push_back(left());
      out.push_back({pts[0], pts[1]});
    }
  });

  std::vector<ContourSegment> segments;
  for (auto& row : rows) segments.insert(segments.end(), row.begin(), row.end());
  return segments;
}

ContourTopology analyze_contour(const std::vector<ContourSegment>& segments,
                                double box) {
  using Key = std::pair<double, double>;
  std::map<Key, std::vector<std::size_t>> incident;
  for (std::size_t k = 0; k < segments.size(); ++k) {
    incident[{segments[k].p.x(), segments[k].p.y()}].push_back(k);
    incident[{segments[k].q.x(), segments[k].q.y()}].push_back(k);
  }

  std::vector<std::size_t> parent(segments.size());
  std::iota(parent.begin(), parent.end(), 0);
  const auto find = [&](std::size_t k) {
    while (parent[k] != k) k = parent[k] = parent[parent[k]];
    return k;
  };

  ContourTopology topo;
  const double tol = 1e-9 * box;
  for (const auto& [pt, segs] : incident) {
    for (std::size_t m = 1; m < segs.size(); ++m)
      parent[find(segs[m])] = find(segs[0]);
    if (segs.size() == 1) {
      const bool on_edge = std::abs(std::abs(pt.first) - box) <= tol ||
                           std::abs(std::abs(pt.second) - box) <= tol;
      ++(on_edge ? topo.boundary_endpoints : topo.interior_endpoints);
    }
  }
  for (std::size_t k = 0; k < segments.size(); ++k)
    if (find(k) == k) ++topo.components;
  return topo;
}

RoaResult roa_level(const CertificateData& cert, const OdeCoefficients& ode,
                    const RoaOptions& options) {
  const GainSet& g = cert.gains;
  if (!(cert.H[0] > 0 && cert.H[1] > 0) ||
      !in_D(Eigen::Vector2d::Zero(), cert, ode))
    throw CertificateError("constraint slice does not contain the origin");

  RoaResult r;
  r.contour = zero_contour(ode, g, options);
  r.topology = analyze_contour(r.contour, options.box);
  if (r.contour.empty())
    throw CertificateError("u = 0 contour not found in the scanned box");

  const double inf = std::numeric_limits<double>::infinity();
  r.c0_star = inf;
  double c_star = inf;
  for (const auto& seg : r.contour) {
    for (const Eigen::Vector2d& p : {seg.p, seg.q}) {
      const double v3 = lyapunov_v3(p, g);
      r.c0_star = std::min(r.c0_star, v3);
      if (p(0) <= cert.H[0] && p(1) <= cert.H[1])
        c_star = std::min(c_star, std::log1p(v3));
    }
  }

  // Cap lines eta_1 = H_1 (eta_2 in [-box, H_2]) and eta_2 = H_2.
  const int m = options.cap_samples;
  std::array<double, 2> cap_min = {inf, inf};
  parallel_for(2, options.threads, [&](int line) {
    double& out = cap_min[line];
    const double hi = cert.H[1 - line];
    for (int k = 0; k < m; ++k) {
      const double s = -options.box + (hi + options.box) * k / (m - 1);
      const Eigen::Vector2d p =
          line == 0 ? Eigen::Vector2d(cert.H[0], s) : Eigen::Vector2d(s, cert.H[1]);
      if (control_law(p, ode, g) > 0)
        out = std::min(out, std::log1p(lyapunov_v3(p, g)));
    }
  });
  c_star = std::min({c_star, cap_min[0], cap_min[1]});
  if (!std::isfinite(c_star))
    throw CertificateError("constraint slice boundary not found");
  r.c_star = c_star;
  return r;
}

double decay_rate_estimate(const GainSet& g, double sigma1, double sigma2,
                           double lambda2, double epsilon) {
  if (!(epsilon > 0))
    throw std::domain_error("decay_rate_estimate: epsilon must be positive");
  const double b = g.c1 + g.c2;
  const double c = g.theta + g.c1 * g.c2;
  const double disc = b * b - 4.0 * c;
  // Largest real part of the two roots (the slowest mode).
  double re = -0.5 * b;
  if (disc >= 0) re = -2.0 * c / (b + std::sqrt(disc));
  const double rate = std::min({sigma1, sigma2, -lambda2 * re});
  return rate / (1.0 + epsilon);
}

}  // namespace agestruct
