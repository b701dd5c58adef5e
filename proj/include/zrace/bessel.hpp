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

#include <cmath>
#include <numbers>

#include "zrace/errors.hpp"
#include "zrace/summation.hpp"

namespace zrace {

namespace detail {

// sum_k (-x^2/4)^k / (k!)^2, stopped once the terms fall below 2^-60 of
// the leading term. The series alternates with decreasing terms beyond
// k > x/2, so the first omitted term bounds the remainder.
inline double j0_maclaurin(double x) {
  double y = -0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 60; ++k) {
    term *= y / (static_cast<double>(k) * k);
    sum += term;
    if (std::fabs(term) < 0x1p-60 && k > x) break;
  }
  return sum;
}

// Same series in double-double, for arguments where the terms grow large
// enough to cancel away double precision.
inline double j0_maclaurin_dd(double x) {
  DoubleDouble y = two_prod(x, x);
  y.hi *= -0.25;
  y.lo *= -0.25;
  DoubleDouble term{1.0, 0.0};
  DoubleDouble sum{1.0, 0.0};
  for (int k = 1; k < 120; ++k) {
    term = dd_div(dd_mul(term, y), static_cast<double>(k) * k);
    sum = dd_add(sum, term);
    if (std::fabs(term.hi) < 0x1p-60 && k > x) break;
  }
  return sum.hi + sum.lo;
}

// Hankel expansion, x >= 20. The series is asymptotic; it is summed while
// the terms decrease, and the smallest term at x = 20 is below 1e-17.
inline double j0_hankel(double x) {
  double p = 1.0;
  double q = 0.0;
  double a = 1.0;
  double prev = 1.0;
  double inv_x = 1.0 / x;
  for (int k = 1; k < 200; ++k) {
    double m = 2.0 * k - 1.0;
    a *= m * m / (8.0 * k) * inv_x;
    if (a > prev) break;
    prev = a;
    switch (k % 4) {
      case 1: q -= a; break;
      case 2: p -= a; break;
      case 3: q += a; break;
      case 0: p += a; break;
    }
    if (a < 1e-18) break;
  }
  double s = std::sin(x);
  double c = std::cos(x);
  // cos(x - pi/4) = (c + s)/sqrt2, sin(x - pi/4) = (s - c)/sqrt2.
  return (p * (c + s) - q * (s - c)) / std::sqrt(std::numbers::pi * x);
}

}  // namespace detail

// Bessel function of the first kind of order zero.
inline double bessel_j0(double x) {
  if (!std::isfinite(x)) throw PreconditionError("bessel_j0: argument must be finite");
  x = std::fabs(x);
  if (x <= 4.0) return detail::j0_maclaurin(x);
  if (x < 20.0) return detail::j0_maclaurin_dd(x);
  return detail::j0_hankel(x);
}

// min{1, sqrt(2/(pi |x|))}
inline double bessel_j0_bound(double x) {
  x = std::fabs(x);
  if (x <= 2.0 / std::numbers::pi) return 1.0;
  return std::sqrt(2.0 / (std::numbers::pi * x));
}

}  // namespace zrace
