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
#include <limits>
#include <stdexcept>

namespace agestruct {

/// Principal branch W0 of the Lambert W function, w e^w = x for
/// x >= -1/e. Halley iteration from a piecewise initial guess.
template <typename Real>
Real lambert_w0(Real x) {
  using std::abs;
  using std::exp;
  using std::log;
  using std::sqrt;
  constexpr Real eps = std::numeric_limits<Real>::epsilon();
  const Real e = exp(Real(1));
  const Real branch = -1 / e;

  if (std::isnan(x)) return x;
  if (x < branch) {
    if (x >= branch - 8 * eps) return Real(-1);
    throw std::domain_error("lambert_w0: argument below -1/e");
  }
  if (x == 0) return Real(0);
  if (std::isinf(x)) return x;

  Real w;
  if (x < Real(-0.25)) {
    // Series around the branch point in p = sqrt(2(e x + 1)).
    const Real p = sqrt(std::max(Real(0), 2 * (e * x + 1)));
    w = -1 + p - p * p / 3 + Real(11) / 72 * p * p * p;
  } else if (x < Real(3)) {
    const Real l = std::log1p(x);
    w = l * (1 - std::log1p(l) / (2 + l));
  } else {
    const Real l1 = log(x);
    const Real l2 = log(l1);
    w = l1 - l2 + l2 / l1;
  }

  for (int it = 0; it < 64; ++it) {
    const Real ew = exp(w);
    const Real f = w * ew - x;
    const Real wp1 = w + 1;
    if (wp1 == 0 || f == 0) break;
    const Real dw = f / (ew * wp1 - (w + 2) * f / (2 * wp1));
    w -= dw;
    if (abs(dw) <= 4 * eps * (1 + abs(w))) break;
  }
  return w;
}

/// f(y; r, beta) = r (e^{ry} - 1) / (e^{ry} - ry - 1 + 1/beta). The
/// denominator is bounded below by 1/beta, so f is smooth on the real line.
template <typename Real>
Real f_param(Real y, Real r, Real beta) {
  using std::exp;
  const Real s = r * y;
  if (s > 1) {
    const Real em = exp(-s);
    return r * (-std::expm1(-s)) / (1 - (s + 1 - 1 / beta) * em);
  }
  const Real m = std::expm1(s);
  return r * m / (m - s + 1 / beta);
}

/// max_y |f(y; r, beta)| / |r| in closed form via d(beta) =
/// W0(-e^{-1-1/beta}); the maximizer satisfies r y* = 1 + 1/beta + d.
template <typename Real>
Real B_bound(Real beta) {
  using std::exp;
  if (!(beta > 0)) throw std::domain_error("B_bound: beta must be positive");
  const Real d = lambert_w0(-exp(-1 - 1 / beta));
  const Real s = 1 + 1 / beta + d;
  return f_param(s, Real(1), beta);
}

/// B(beta) - 1 without cancellation; B itself rounds to 1 for beta below
/// about 0.03.
template <typename Real>
Real B_excess(Real beta) {
  using std::exp;
  if (!(beta > 0)) throw std::domain_error("B_excess: beta must be positive");
  const Real d = lambert_w0(-exp(-1 - 1 / beta));
  const Real s = 1 + 1 / beta + d;
  const Real em = exp(-s);
  return (1 + d) * em / (1 - (s + 1 - 1 / beta) * em);
}

/// h(p) = int_0^p (e^z - 1)/z dz = sum_{n>=1} p^n / (n n!).
template <typename Real>
Real h_integral(Real p) {
  if (p < 0) throw std::domain_error("h_integral: p must be non-negative");
  if (p == 0) return Real(0);
  constexpr Real eps = std::numeric_limits<Real>::epsilon();
  Real power = 1;  // p^n / n!
  Real sum = 0;
  for (int n = 1; n < 100000; ++n) {
    power *= p / n;
    const Real term = power / n;
    sum += term;
    // Tail is bounded by a geometric series once n + 1 > p.
    if (n + 1 > p) {
      const Real ratio = p / (n + 1);
      const Real tail = term * ratio / (1 - ratio);
      if (tail < Real(0.01) * eps * sum) break;
    }
  }
  return sum;
}

}  // namespace agestruct
