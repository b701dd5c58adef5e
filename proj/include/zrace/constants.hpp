// Copyright 2026 The zrace Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cmath>
#include <numbers>

#include <boost/math/constants/constants.hpp>
#include <boost/math/quadrature/exp_sinh.hpp>

#include "zrace/errors.hpp"
#include "zrace/precision.hpp"
#include "zrace/zero_catalog.hpp"

namespace zrace {

// Literals produced by tools/scripts/oracle_constants.py (mpmath, 50 digits).
namespace literals {
inline constexpr const char* kEulerGamma = "0.5772156649015328606065120900824024310422";
inline constexpr const char* kZetaD2At0 = "-2.006356455908584851210100026729960438199";
inline constexpr const char* kZetaD3At0 = "-6.004711166862254447761060813366375285462";
inline constexpr const char* kZetaD4At0 = "-23.99710318801370795898721952774100566189";
}  // namespace literals

template <class Real>
struct ConstantSetT {
  Real euler_gamma{};
  Real w{};
  Real B1{};
  Real B2{};
  Real B4{};
  std::array<Real, 3> zeta_deriv0{};  // zeta''(0), zeta'''(0), zeta''''(0)
};

using ConstantSet = ConstantSetT<double>;

// B1 = sum 1/rho, B2 = sum 1/rho^2, B4 = sum 1/rho^4 over the nontrivial
// zeros, in closed form through C0 and the derivatives of zeta at 0.
inline const ConstantSetT<HighPrecision>& constants_hp() {
  static const ConstantSetT<HighPrecision> set = [] {
    using boost::multiprecision::log;
    using boost::multiprecision::pow;
    ConstantSetT<HighPrecision> c;
    const HighPrecision pi = boost::math::constants::pi<HighPrecision>();
    c.euler_gamma = HighPrecision(literals::kEulerGamma);
    c.zeta_deriv0 = {HighPrecision(literals::kZetaD2At0), HighPrecision(literals::kZetaD3At0),
                     HighPrecision(literals::kZetaD4At0)};
    const HighPrecision& z2 = c.zeta_deriv0[0];
    const HighPrecision& z3 = c.zeta_deriv0[1];
    const HighPrecision& z4 = c.zeta_deriv0[2];
    HighPrecision l = log(2 * pi);
    c.B1 = c.euler_gamma + 2 - log(4 * pi);
    c.w = c.B1;
    c.B2 = 1 - pi * pi / 24 + 2 * z2 + l * l;
    c.B4 = 1 - pow(pi, 4) / 1440 -
           (-2 * z4 + 8 * z3 * l - 12 * z2 * (z2 + 2 * l * l) - 6 * pow(l, 4)) / 6;
    return c;
  }();
  return set;
}

inline ConstantSet constants() {
  const auto& h = constants_hp();
  ConstantSet c;
  c.euler_gamma = static_cast<double>(h.euler_gamma);
  c.w = static_cast<double>(h.w);
  c.B1 = static_cast<double>(h.B1);
  c.B2 = static_cast<double>(h.B2);
  c.B4 = static_cast<double>(h.B4);
  for (int i = 0; i < 3; ++i) c.zeta_deriv0[i] = static_cast<double>(h.zeta_deriv0[i]);
  return c;
}

// Full sums over all gamma > 0, q = 1/4 + gamma^2:
//   sum 1/q = B1/2,  sum gamma^2/q^2 = (B1 - B2)/4,
//   sum 1/q^2 = B1 + B2,  sum gamma^2/q^4 = (B1 + B2)/2 - B4/4.
template <class Real = double>
ZeroSums<Real> zero_sum_closed_forms() {
  const auto& c = constants_hp();
  ZeroSums<HighPrecision> s;
  s.inv_q = c.B1 / 2;
  s.g2_over_q2 = (c.B1 - c.B2) / 4;
  s.inv_q2 = c.B1 + c.B2;
  s.g2_over_q4 = (c.B1 + c.B2) / 2 - c.B4 / 4;
  if constexpr (std::is_same_v<Real, HighPrecision>) {
    return s;
  } else {
    return {static_cast<Real>(s.inv_q), static_cast<Real>(s.g2_over_q2),
            static_cast<Real>(s.inv_q2), static_cast<Real>(s.g2_over_q4)};
  }
}

enum class ZeroSummand { inv_q, g2_over_q2, inv_q2, g2_over_q4 };

// Written through t/q and 1/q so that nothing overflows as t grows.
inline double summand_value(ZeroSummand s, double t) {
  double q = 0.25 + t * t;
  double r = t / q;
  double iq = 1.0 / q;
  switch (s) {
    case ZeroSummand::inv_q: return iq;
    case ZeroSummand::g2_over_q2: return r * r;
    case ZeroSummand::inv_q2: return iq * iq;
    case ZeroSummand::g2_over_q4: return r * r * iq * iq;
  }
  return 0.0;
}

inline double summand_derivative(ZeroSummand s, double t) {
  double q = 0.25 + t * t;
  double r = t / q;
  double iq = 1.0 / q;
  switch (s) {
    case ZeroSummand::inv_q: return -2.0 * r * iq;
    case ZeroSummand::g2_over_q2: return 2.0 * r * (1.0 - 2.0 * t * r) * iq;
    case ZeroSummand::inv_q2: return -4.0 * r * iq * iq;
    case ZeroSummand::g2_over_q4: return 2.0 * r * (1.0 - 4.0 * t * r) * iq * iq * iq;
  }
  return 0.0;
}

// Bound on |N(t) - smooth_zero_count(t)|: |S(t)| <= 0.112 log t +
// 0.278 log log t + 2.51 (Trudgian) plus the Stirling remainder.
inline double zero_count_remainder_bound(double t) {
  return 0.112 * std::log(t) + 0.278 * std::log(std::log(t)) + 2.51 + 0.2 / t;
}

struct TailEstimate {
  double estimate = 0.0;
  double bound = 0.0;  // |true tail - estimate| <= bound
};

// Sum of the summand over zeros with gamma > T, where T >= 10 and the
// count N(T) is known exactly. Writing N = Ns + R,
//   sum_{gamma>T} f = int_T^inf f dNs - R(T) f(T) - int_T^inf R f' dt,
// and the last integral is bounded by the remainder bound.
inline TailEstimate zero_sum_tail_beyond(ZeroSummand s, double T, double count_at_T) {
  require(T >= 10.0, "zero_sum_tail_beyond: T must be at least 10");
  boost::math::quadrature::exp_sinh<double> integrator;
  const double two_pi = 2.0 * std::numbers::pi;
  double main = integrator.integrate(
      [&](double t) { return summand_value(s, t) * std::log(t / two_pi) / two_pi; }, T,
      std::numeric_limits<double>::infinity());
  double remainder = integrator.integrate(
      [&](double t) { return std::fabs(summand_derivative(s, t)) * zero_count_remainder_bound(t); },
      T, std::numeric_limits<double>::infinity());
  double r_at_T = count_at_T - smooth_zero_count(T);
  TailEstimate out;
  out.estimate = main - r_at_T * summand_value(s, T);
  out.bound = remainder + 1e-14 * std::fabs(main);
  return out;
}

// Tail beyond the largest catalogued ordinate.
inline TailEstimate zero_sum_tail(const ZeroCatalog& cat, ZeroSummand s) {
  return zero_sum_tail_beyond(s, cat.max_ordinate(), static_cast<double>(cat.size()));
}

}  // namespace zrace
