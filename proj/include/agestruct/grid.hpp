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

#include <Eigen/Core>

namespace agestruct {

/// A function of age sampled on the uniform grid, index j <-> a_j = j*da.
using AgeProfile = Eigen::ArrayXd;

/// Uniform age grid a_j = j * da, j = 0..N, on [0, A].
struct AgeGrid {
  double max_age = 1.0;
  int intervals = 400;

  double step() const { return max_age / intervals; }
  Eigen::Index size() const { return intervals + 1; }
  double age(Eigen::Index j) const { return static_cast<double>(j) * step(); }

  AgeProfile ages() const {
    AgeProfile a(size());
    for (Eigen::Index j = 0; j < a.size(); ++j) a(j) = age(j);
    return a;
  }

  /// Composite trapezoid weights: da/2 at both ends, da inside.
  AgeProfile trapezoid_weights() const {
    AgeProfile w = AgeProfile::Constant(size(), step());
    w(0) *= 0.5;
    w(size() - 1) *= 0.5;
    return w;
  }
};

/// Composite trapezoid rule for samples f on a uniform grid of spacing h.
template <typename Derived>
typename Derived::Scalar trapezoid(const Eigen::ArrayBase<Derived>& f,
                                   typename Derived::Scalar h) {
  const Eigen::Index n = f.size();
  if (n < 2) return typename Derived::Scalar(0);
  return h * (f.sum() - typename Derived::Scalar(0.5) * (f(0) + f(n - 1)));
}

/// F_j = integral of f over [a_0, a_j] by the trapezoid rule (F_0 = 0).
template <typename Derived>
Eigen::Array<typename Derived::Scalar, Eigen::Dynamic, 1> cumulative_trapezoid(
    const Eigen::ArrayBase<Derived>& f, typename Derived::Scalar h) {
  using Scalar = typename Derived::Scalar;
  Eigen::Array<Scalar, Eigen::Dynamic, 1> out(f.size());
  if (f.size() == 0) return out;
  out(0) = Scalar(0);
  for (Eigen::Index j = 1; j < f.size(); ++j)
    out(j) = out(j - 1) + Scalar(0.5) * h * (f(j - 1) + f(j));
  return out;
}

/// T_j = integral of f over [a_j, a_N] by the trapezoid rule (T_N = 0).
template <typename Derived>
Eigen::Array<typename Derived::Scalar, Eigen::Dynamic, 1> tail_trapezoid(
    const Eigen::ArrayBase<Derived>& f, typename Derived::Scalar h) {
  using Scalar = typename Derived::Scalar;
  const Eigen::Index n = f.size();
  Eigen::Array<Scalar, Eigen::Dynamic, 1> out(n);
  if (n == 0) return out;
  out(n - 1) = Scalar(0);
  for (Eigen::Index j = n - 1; j-- > 0;)
    out(j) = out(j + 1) + Scalar(0.5) * h * (f(j) + f(j + 1));
  return out;
}

}  // namespace agestruct
