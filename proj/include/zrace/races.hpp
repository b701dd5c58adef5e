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
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "zrace/errors.hpp"
#include "zrace/primes.hpp"
#include "zrace/summation.hpp"
#include "zrace/zero_catalog.hpp"

namespace zrace {

enum class PrimeFunction { psi, theta, Pi, pi, psi_r, theta_r, Pi_r, pi_r, pi_ell };
enum class FunctionClass { standard, reciprocal };

struct PrimeFunctionKind {
  PrimeFunction id;
  const char* name;
  FunctionClass cls;
  int bias;
};

inline constexpr std::array<PrimeFunctionKind, 9> kPrimeFunctions = {{
    {PrimeFunction::psi, "psi", FunctionClass::standard, 0},
    {PrimeFunction::theta, "theta", FunctionClass::standard, -1},
    {PrimeFunction::Pi, "Pi", FunctionClass::standard, 0},
    {PrimeFunction::pi, "pi", FunctionClass::standard, -1},
    {PrimeFunction::psi_r, "psi_r", FunctionClass::reciprocal, 0},
    {PrimeFunction::theta_r, "theta_r", FunctionClass::reciprocal, 1},
    {PrimeFunction::Pi_r, "Pi_r", FunctionClass::reciprocal, 0},
    {PrimeFunction::pi_r, "pi_r", FunctionClass::reciprocal, 1},
    {PrimeFunction::pi_ell, "pi_ell", FunctionClass::reciprocal, 1},
}};

inline const PrimeFunctionKind& kind_info(PrimeFunction f) {
  return kPrimeFunctions[static_cast<std::size_t>(f)];
}

inline PrimeFunction parse_prime_function(const std::string& name) {
  for (const auto& k : kPrimeFunctions)
    if (name == k.name) return k.id;
  throw PreconditionError("unknown prime function '" + name + "'");
}

inline double counting_function(PrimeFunction f, const PrimeSnapshot& s) {
  switch (f) {
    case PrimeFunction::psi: return s.psi;
    case PrimeFunction::theta: return s.theta;
    case PrimeFunction::Pi: return s.Pi;
    case PrimeFunction::pi: return static_cast<double>(s.prime_count);
    case PrimeFunction::psi_r: return s.psi_r;
    case PrimeFunction::theta_r: return s.theta_r;
    case PrimeFunction::Pi_r: return s.Pi_r;
    case PrimeFunction::pi_r: return s.pi_r;
    case PrimeFunction::pi_ell: return s.pi_ell;
  }
  return 0.0;
}

inline double counting_function(PrimeFunction f, double x, const PrimeSieve& sieve) {
  return counting_function(f, sieve.at(x));
}

// li(x) = Ei(log x), principal value.
inline double li(double x) {
  require(x > 1.0, "li: require x > 1");
  return std::expint(std::log(x));
}

inline double normalized_error(PrimeFunction f, const PrimeSnapshot& s, const MertensConstants& c) {
  const double x = s.x;
  require(x >= 2.0, "normalized_error: require x ≥ 2");
  const double lx = std::log(x);
  const double rx = std::sqrt(x);
  switch (f) {
    case PrimeFunction::psi: return (s.psi - x) / rx;
    case PrimeFunction::theta: return (s.theta - x) / rx;
    case PrimeFunction::Pi: return (s.Pi - li(x)) / (rx / lx);
    case PrimeFunction::pi: return (static_cast<double>(s.prime_count) - li(x)) / (rx / lx);
    case PrimeFunction::psi_r: return (s.psi_r - (lx - c.c0)) * rx;
    case PrimeFunction::theta_r: return (s.theta_r - (lx - c.c1)) * rx;
    case PrimeFunction::Pi_r: return (s.Pi_r - (std::log(lx) + c.c0)) * rx * lx;
    case PrimeFunction::pi_r: return (s.pi_r - (std::log(lx) - c.c2)) * rx * lx;
    case PrimeFunction::pi_ell: return (s.pi_ell - (std::log(lx) + c.c0)) * rx * lx;
  }
  return 0.0;
}

inline double normalized_error(PrimeFunction f, double x, const MertensConstants& c,
                               const PrimeSieve& sieve) {
  return normalized_error(f, sieve.at(x), c);
}

// All nine normalized errors, in the order of kPrimeFunctions.
inline std::array<double, 9> normalized_errors(const PrimeSnapshot& s, const MertensConstants& c) {
  std::array<double, 9> e{};
  for (std::size_t i = 0; i < 9; ++i) e[i] = normalized_error(kPrimeFunctions[i].id, s, c);
  return e;
}

// Largest pairwise gap within the standard block and within the reciprocal
// block after removing the bias terms.
inline double affine_gap(const std::array<double, 9>& e) {
  double worst = 0.0;
  for (std::size_t i = 0; i < 9; ++i)
    for (std::size_t j = i + 1; j < 9; ++j) {
      if (kPrimeFunctions[i].cls != kPrimeFunctions[j].cls) continue;
      double gi = e[i] - kPrimeFunctions[i].bias;
      double gj = e[j] - kPrimeFunctions[j].bias;
      worst = std::max(worst, std::fabs(gi - gj));
    }
  return worst;
}

// beta_f - Re sum_{0 < gamma <= X} 2 x^{i gamma} / (+-1/2 + i gamma), with
// +1/2 for standard functions and -1/2 for reciprocal ones.
inline double explicit_formula(PrimeFunction f, double x, double X, const ZeroCatalog& cat) {
  require(x >= 2.0, "explicit_formula: require x ≥ 2");
  require(X >= 0.0, "explicit_formula: require X ≥ 0");
  const auto& k = kind_info(f);
  std::size_t n = X < cat[0] ? 0 : cat.count_up_to(X);
  const double half = k.cls == FunctionClass::standard ? 0.5 : -0.5;
  const double lx = std::log(x);
  Accumulator acc;
  for (std::size_t i = 0; i < n; ++i) {
    double g = cat[i];
    double ph = g * lx;
    // Re (cos + i sin) / (h + i g) = (h cos + g sin) / (h^2 + g^2)
    acc.add(2.0 * (half * std::cos(ph) + g * std::sin(ph)) / (0.25 + g * g));
  }
  return static_cast<double>(k.bias) - acc.value();
}

struct RaceSample {
  double x = 0.0;
  double ef = 0.0;
  double eg = 0.0;
  PrimeFunction f = PrimeFunction::psi;
  PrimeFunction g = PrimeFunction::psi;
};

inline std::vector<double> log_grid(double xmin, double xmax, std::size_t points) {
  require(xmin >= 2.0 && xmax >= xmin, "log_grid: require 2 ≤ xmin ≤ xmax");
  std::vector<double> out(points);
  if (points == 1) {
    out[0] = xmin;
    return out;
  }
  double a = std::log(xmin);
  double b = std::log(xmax);
  for (std::size_t i = 0; i < points; ++i)
    out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(points - 1));
  out.front() = xmin;
  out.back() = xmax;
  return out;
}

inline std::vector<RaceSample> race_scan(PrimeFunction f, PrimeFunction g, std::span<const double> grid,
                                         const PrimeSieve& sieve, const MertensConstants& c) {
  std::vector<RaceSample> out;
  if (grid.empty()) return out;
  auto snaps = sieve.evaluate(grid);
  out.reserve(snaps.size());
  for (const auto& s : snaps) out.push_back({s.x, normalized_error(f, s, c), normalized_error(g, s, c), f, g});
  return out;
}

}  // namespace zrace
