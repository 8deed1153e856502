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

// Values computed once with 30-digit mpmath quadrature of the continuous
// problem (A = 1, mu_bar = 0.5, k_bar = 3, b_bar = 0.4 unless noted) and
// frozen here.

namespace agestruct::fixtures {

inline constexpr double kZetaMuBar025 = 1.495241283852140752;
inline constexpr double kZetaMuBar05 = 1.1702072016260022677;
inline constexpr double kZetaMuBar1 = 0.52351650122521219259;

// exp(-int_0^1 (zeta + mu)) at the solved zeta.
inline constexpr double kSurvivalAtA = 0.13142116460410868424;

// Newborn densities with u* = zeta_2 / 2.
inline constexpr double kNewborn1 = 20.182828997613963964;
inline constexpr double kNewborn2 = 40.365657995227927928;

// Pi and eta of the underpopulated profiles x* e^{-0.2(1 + a)}.
inline constexpr double kPiUnderpopulated = 0.78104359710924603313;
inline constexpr double kEtaUnderpopulated = -0.24712430853752298421;

inline constexpr double kW0MinusEm2 = -0.15859433956303936215;

inline constexpr double kH1 = 1.3179021514544038949;
inline constexpr double kH5 = 37.99862177846754422;
inline constexpr double kH10 = 2489.3491754839821806;

inline constexpr double kB001 = 1.0;
inline constexpr double kB01 = 1.0000167022587048301;
inline constexpr double kB05 = 1.0553745501248951113;
inline constexpr double kB1 = 1.1884873694344744496;
inline constexpr double kB2 = 1.4320688735823936647;
inline constexpr double kB10 = 2.6097179703269461633;
inline constexpr double kB100 = 7.4164856766362961547;

// Root of h(p) = p + p^2/2: below it the quadratic lower bound fails.
inline constexpr double kHQuadraticCrossover = 2.54388473394278;

}  // namespace agestruct::fixtures
