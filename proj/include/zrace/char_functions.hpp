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
#include <string>
#include <vector>

#include "zrace/bessel.hpp"
#include "zrace/constants.hpp"
#include "zrace/errors.hpp"
#include "zrace/zero_catalog.hpp"

namespace zrace {

// Products whose magnitude drops below this are treated as zero.
inline constexpr double kUnderflowClamp = 1e-300;

// Tails over gamma > T of the sums in the second-order correction:
//   P_T = 1/4 sum gamma^2/q^2, Q_T = 1/4 sum 1/q^2, R_T = 1/32 sum gamma^2/q^4,
// with q = 1/4 + gamma^2. inv_q_tail = sum 1/q is used by the 1-D problem.
struct TailConstants {
  double P_T = 0.0;
  double Q_T = 0.0;
  double R_T = 0.0;
  double T = 0.0;
  double inv_q_tail = 0.0;
};

inline TailConstants tail_constants(const ZeroCatalog& cat, double T) {
  auto full = zero_sum_closed_forms<HighPrecision>();
  auto part = partial_sums<HighPrecision>(cat, T);
  HighPrecision p = (full.g2_over_q2 - part.g2_over_q2) / 4;
  HighPrecision q = (full.inv_q2 - part.inv_q2) / 4;
  HighPrecision r = (full.g2_over_q4 - part.g2_over_q4) / 32;
  HighPrecision a = full.inv_q - part.inv_q;
  // The closed forms carry about 40 digits and the ordinates about 30.
  const HighPrecision guard("1e-28");
  for (const HighPrecision* x : {&p, &q, &r, &a})
    if (*x < -guard) throw ConsistencyError("inconsistent constants: negative zero-sum tail");
  auto clamp = [](const HighPrecision& x) { return x < 0 ? 0.0 : static_cast<double>(x); };
  return {clamp(p), clamp(q), clamp(r), T, clamp(a)};
}

namespace detail {

inline std::size_t checked_count(const ZeroCatalog& cat, double T) {
  require(std::isfinite(T), "truncation height must be finite");
  return cat.count_up_to(T);
}

}  // namespace detail

// prod_{gamma <= T} J0(2t / sqrt(1/4 + gamma^2))
inline double mu1_hat(double t, const ZeroCatalog& cat, double T) {
  std::size_t n = detail::checked_count(cat, T);
  double prod = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    double g = cat[i];
    prod *= bessel_j0(2.0 * t / std::sqrt(0.25 + g * g));
    if (std::fabs(prod) < kUnderflowClamp) return 0.0;
  }
  return prod;
}

// prod_{gamma <= T} J0(|2 gamma (t1 + t2) + i (t1 - t2)| / (1/4 + gamma^2))
inline double mu2_hat(double t1, double t2, const ZeroCatalog& cat, double T) {
  std::size_t n = detail::checked_count(cat, T);
  double s = t1 + t2;
  double d = t1 - t2;
  double d2 = d * d;
  double prod = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    double g = cat[i];
    double a = 2.0 * g * s;
    prod *= bessel_j0(std::sqrt(a * a + d2) / (0.25 + g * g));
    if (std::fabs(prod) < kUnderflowClamp) return 0.0;
  }
  return prod;
}

// F_T(u, v) = prod_{gamma <= T} J0(sqrt(gamma^2 u^2 + v^2) / (1/4 + gamma^2))
inline double f_truncated(double u, double v, const ZeroCatalog& cat, double T) {
  std::size_t n = detail::checked_count(cat, T);
  double v2 = v * v;
  double prod = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    double g = cat[i];
    double a = g * u;
    prod *= bessel_j0(std::sqrt(a * a + v2) / (0.25 + g * g));
    if (std::fabs(prod) < kUnderflowClamp) return 0.0;
  }
  return prod;
}

inline void require_correction_converges(double u, double v, const TailConstants& tails) {
  if (!(tails.P_T * u * u < 1.0) || !(tails.Q_T * v * v < 1.0))
    throw PreconditionError("correction diverges: need P_T u^2 < 1 and Q_T v^2 < 1");
}

// 1 - P u^2 - Q v^2 + (P Q + R) u^2 v^2
inline double correction_factor(double u, double v, const TailConstants& tails) {
  double u2 = u * u;
  double v2 = v * v;
  return 1.0 - tails.P_T * u2 - tails.Q_T * v2 + (tails.P_T * tails.Q_T + tails.R_T) * u2 * v2;
}

inline double g_corrected(double u, double v, const ZeroCatalog& cat, const TailConstants& tails) {
  require_correction_converges(u, v, tails);
  return f_truncated(u, v, cat, tails.T) * correction_factor(u, v, tails);
}

// Bound on |prod_{gamma > T} J0(...) - correction_factor(u, v)|.
inline double delta_envelope(double u, double v, const TailConstants& tails) {
  require_correction_converges(u, v, tails);
  double pu = tails.P_T * u * u;
  double qv = tails.Q_T * v * v;
  double num = (1.0 - pu / 2.0) * qv * qv + pu * pu * (1.0 - qv / 2.0) - pu * pu * qv * qv / 2.0;
  return num / (2.0 * (1.0 - pu) * (1.0 - qv));
}

// Precomputed factors for repeated evaluation of F_T at many points. The
// arithmetic matches f_truncated and mu2_hat bit for bit.
class TruncatedProduct {
 public:
  TruncatedProduct(const ZeroCatalog& cat, double T) {
    std::size_t n = detail::checked_count(cat, T);
    g_.resize(n);
    q_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      g_[i] = cat[i];
      q_[i] = 0.25 + cat[i] * cat[i];
    }
  }

  std::size_t size() const { return g_.size(); }

  double operator()(double u, double v) const {
    double v2 = v * v;
    double prod = 1.0;
    for (std::size_t i = 0; i < g_.size(); ++i) {
      double a = g_[i] * u;
      prod *= bessel_j0(std::sqrt(a * a + v2) / q_[i]);
      if (std::fabs(prod) < kUnderflowClamp) return 0.0;
    }
    return prod;
  }

 private:
  std::vector<double> g_;
  std::vector<double> q_;
};

}  // namespace zrace
