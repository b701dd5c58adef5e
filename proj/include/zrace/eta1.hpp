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

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "zrace/bessel.hpp"
#include "zrace/char_functions.hpp"
#include "zrace/eta2.hpp"
#include "zrace/parallel.hpp"
#include "zrace/summation.hpp"

namespace zrace {

struct Eta1Params {
  double epsilon = 1.0;
  double c = 40.0;  // truncation radius of the inversion integral
  double t_height = 7500.0;
  double sigma = 1.0;
  // When false, only the zeros up to t_height contribute, so the result is
  // the law of the truncated sum rather than of the full V1.
  bool tail_correction = true;
};

namespace detail {

// Bound on |mu1_hat(t)| for t >= t0 from |J0(x)| <= sqrt(2/(pi x)) on the
// first J factors, summed over the nodes beyond the truncation radius:
// (eps/pi) sum_{t_k >= t0} |mu1_hat(t_k)| / t_k.
inline double eta1_truncation_bound(double t0, double eps, const std::vector<double>& q) {
  const double pi = std::numbers::pi;
  double best = std::numeric_limits<double>::infinity();
  double log_upsilon = 0.0;
  for (std::size_t j = 0; j < q.size(); ++j) {
    // The bound needs every factor below 1 at t0: sqrt(q_j) <= pi t0.
    if (std::sqrt(q[j]) > pi * t0) break;
    log_upsilon += 0.25 * std::log(q[j]);
    double J = static_cast<double>(j + 1);
    double log_env = log_upsilon - 0.5 * J * std::log(pi * t0);  // at t0
    double b = std::exp(log_env) / pi * (eps / t0 + 2.0 / J);
    best = std::min(best, b);
  }
  return best;
}

}  // namespace detail

// Pr(V1 > sigma) by the sine-kernel inversion
//   1/2 - (1/pi) int_0^inf mu1_hat(t) sin(sigma t)/t dt
// on the midpoint nodes t = (k + 1/2) eps, t <= c.
inline DensityResult<Eta1Params> eta1(const Eta1Params& p, const ZeroCatalog& cat,
                                      unsigned threads = 0) {
  require(p.epsilon > 0.0 && std::isfinite(p.epsilon), "eta1: require ε > 0");
  require(p.c > 0.0 && std::isfinite(p.c), "eta1: require c > 0");
  require(std::isfinite(p.sigma), "eta1: σ must be finite");
  require(p.t_height > 0.0 && p.t_height <= cat.max_ordinate(),
          "eta1: require 0 < T ≤ largest catalogued ordinate");
  const double pi = std::numbers::pi;
  const double sigma = std::fabs(p.sigma);
  if (!(2.0 * pi / p.epsilon - sigma >= 0.14))
    throw PreconditionError("eta1: require 2π/ε − |σ| ≥ 0.14");

  // Zeros above T enter as exp(-a t^2) exp(-delta) with a = sum 1/q and,
  // since log J0(x) + x^2/4 has only negative Taylor coefficients,
  // 0 <= delta <= t^4 sum 1/(4 q^2) / (1 - x^2/j1^2), x = 2t/|rho_T|.
  double a = 0.0;
  double b = 0.0;
  double amp = 1.0;
  if (p.tail_correction) {
    auto tc = tail_constants(cat, p.t_height);
    a = tc.inv_q_tail;
    b = tc.Q_T;
    const double j1 = 2.404825557695773;
    double x = 2.0 * p.c / std::sqrt(0.25 + p.t_height * p.t_height);
    if (!(x < 0.5 * j1)) throw PreconditionError("eta1: require 4c < j1 |rho_T| for the tail correction");
    amp = 1.0 / (1.0 - (x / j1) * (x / j1));
  }

  std::size_t nz = cat.count_up_to(p.t_height);
  std::vector<double> scale(nz);
  std::vector<double> q(nz);
  for (std::size_t i = 0; i < nz; ++i) {
    q[i] = 0.25 + cat[i] * cat[i];
    scale[i] = 2.0 / std::sqrt(q[i]);
  }

  auto nodes = static_cast<std::size_t>(std::floor(p.c / p.epsilon - 0.5)) + 1;
  if (p.c < 0.5 * p.epsilon) nodes = 0;
  std::vector<double> terms(nodes);
  std::vector<double> env(nodes);
  std::vector<double> mags(nodes);
  parallel_blocks(nodes, threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t k = lo; k < hi; ++k) {
      double t = (static_cast<double>(k) + 0.5) * p.epsilon;
      double prod = 1.0;
      for (std::size_t i = 0; i < nz; ++i) {
        prod *= bessel_j0(scale[i] * t);
        if (std::fabs(prod) < kUnderflowClamp) {
          prod = 0.0;
          break;
        }
      }
      double tail = std::exp(-a * t * t);
      double delta = amp * b * t * t * t * t;
      double kernel = std::sin(sigma * t) / t;
      terms[k] = prod * tail * kernel;
      env[k] = std::fabs(prod) * tail * delta * std::fabs(kernel);
      mags[k] = std::fabs(terms[k]);
    }
  });

  const double scale_out = p.epsilon / pi;
  double integral = scale_out * pairwise_sum(terms);
  DensityResult<Eta1Params> r;
  r.params = p;
  r.value = 0.5 - integral;
  if (p.sigma < 0) r.value = 1.0 - r.value;

  // Aliasing of the midpoint rule (Poisson summation) against the tail bound.
  double e1 = 0.0;
  for (int j = 1; j < 1000; ++j) {
    double x = 2.0 * pi * j / p.epsilon - sigma;
    double b = tail_bound(x);
    e1 += b;
    if (b < 1e-300 || b < 1e-18 * e1) break;
  }
  r.err1 = e1;
  double t_first = (static_cast<double>(nodes) + 0.5) * p.epsilon;
  r.err2 = detail::eta1_truncation_bound(t_first, p.epsilon, q);
  // Product truncation envelope plus a rounding allowance.
  r.err3 = scale_out * pairwise_sum(env) + 1e-15 * (scale_out * pairwise_sum(mags) + 1.0);
  r.rigorous_halfwidth = r.err1 + r.err2 + r.err3;
  return r;
}

// Escalates from p, halving eps and doubling c (capped so that the tail
// correction bound applies), until the value moves by less than target/4
// and the certified halfwidth is at most target.
inline DensityResult<Eta1Params> eta1_auto(Eta1Params p, const ZeroCatalog& cat, double target,
                                           unsigned threads = 0, int max_steps = 8) {
  require(target > 0.0, "eta1_auto: target must be positive");
  double c_cap = p.tail_correction ? 0.25 * 2.404825557695773 * std::sqrt(0.25 + p.t_height * p.t_height)
                                    : std::numeric_limits<double>::infinity();
  p.c = std::min(p.c, c_cap);
  auto prev = eta1(p, cat, threads);
  for (int step = 0; step < max_steps; ++step) {
    p.epsilon /= 2.0;
    p.c = std::min(2.0 * p.c, c_cap);
    auto next = eta1(p, cat, threads);
    if (std::fabs(next.value - prev.value) < target / 4.0 && next.rigorous_halfwidth <= target)
      return next;
    prev = next;
  }
  return prev;
}

}  // namespace zrace
