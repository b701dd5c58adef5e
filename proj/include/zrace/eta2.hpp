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
#include <limits>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "zrace/char_functions.hpp"
#include "zrace/errors.hpp"
#include "zrace/parallel.hpp"
#include "zrace/summation.hpp"
#include "zrace/zero_catalog.hpp"

namespace zrace {

struct QuadratureParams {
  double epsilon = 1.5;
  double c_x = 30.0;
  double c_y = 2500.0;
  double t_height = 7500.0;
  int j = 0;  // 0 selects J automatically
  int k = 0;  // 0 selects K automatically
};

inline QuadratureParams paper_profile() { return {1.5, 30.0, 2500.0, 7500.0, 0, 0}; }
inline QuadratureParams fast_profile() { return {1.5, 20.0, 600.0, 2000.0, 0, 0}; }

template <class Params>
struct DensityResult {
  double value = 0.0;
  double rigorous_halfwidth = 0.0;
  double err1 = 0.0;
  double err2 = 0.0;
  double err3 = 0.0;
  Params params{};
};

struct Eta2Result : DensityResult<QuadratureParams> {
  double lattice_sum = 0.0;
  double mu2_q1 = 0.0;
  double mu2_q1_halfwidth = 0.0;
  TailConstants tails{};
  // Published value and the signed difference from it.
  double reference_value = 0.013548;
  double reference_delta = 0.0;
};

inline double scaled_cx(const QuadratureParams& p) { return p.c_x / (p.epsilon * std::numbers::sqrt2); }
inline double scaled_cy(const QuadratureParams& p) { return p.c_y / (p.epsilon * std::numbers::sqrt2); }

inline void validate_epsilon(double eps) {
  if (!(eps > 0.0 && eps <= 13.0)) throw PreconditionError("require 0 < ε ≤ 13");
}

// The invariants shared by err2_bound and eta2.
inline void validate_quadrature(const QuadratureParams& p, const ZeroCatalog& cat) {
  validate_epsilon(p.epsilon);
  if (!(p.c_y > p.c_x && p.c_x >= std::sqrt(2.0 * p.epsilon)))
    throw PreconditionError("require C_y > C_x ≥ √(2ε)");
  if (!(p.t_height > 0.0 && p.t_height <= cat.max_ordinate()))
    throw PreconditionError("require 0 < T ≤ largest catalogued ordinate");
}

inline void validate_tails(const QuadratureParams& p, const TailConstants& tails) {
  if (!(tails.P_T < 1.0 / (8.0 * p.c_x * p.c_x)))
    throw PreconditionError("require P_T < 1/(8 C_x²)");
  if (!(tails.Q_T < 1.0 / (2.0 * p.c_y * p.c_y)))
    throw PreconditionError("require Q_T < 1/(2 C_y²)");
}

// exp(-3.75 (x - 0.14)^2), an upper bound for the mass of mu_1 beyond x.
inline double tail_bound(double x) {
  if (!(x >= 0.14)) throw PreconditionError("tail_bound: require x ≥ 0.14");
  double d = x - 0.14;
  return std::exp(-3.75 * d * d);
}

inline double err1_bound(double epsilon) {
  validate_epsilon(epsilon);
  return 96.0 * std::numbers::pi * std::numbers::pi * tail_bound(2.0 * std::numbers::pi / epsilon);
}

// Maximal J with sqrt((1/4 + g_J^2)/g_J) <= 2^(1/4) pi^(1/2) C_x^(1/2) and
// maximal K with sqrt(1/4 + g_K^2) <= 2^(-1/4) pi^(1/2) C_y^(1/2).
inline std::pair<int, int> select_jk(double c_x, double c_y, const ZeroCatalog& cat) {
  require(c_x > 0.0 && c_y > 0.0, "select_jk: require C_x, C_y > 0");
  double jcap = std::pow(2.0, 0.25) * std::sqrt(std::numbers::pi * c_x);
  double kcap = std::pow(2.0, -0.25) * std::sqrt(std::numbers::pi * c_y);
  std::size_t j = 0;
  std::size_t k = 0;
  // Both criteria increase with gamma, so the admissible indices form prefixes.
  while (j < cat.size() && std::sqrt((0.25 + cat[j] * cat[j]) / cat[j]) <= jcap) ++j;
  while (k < cat.size() && std::sqrt(0.25 + cat[k] * cat[k]) <= kcap) ++k;
  if (j == cat.size() || k == cat.size())
    throw CatalogError("select_jk: catalog exhausted before the J/K criterion fails");
  if (j == 0) throw PreconditionError("select_jk: no valid J (C_x too small)");
  if (k == 0) throw PreconditionError("select_jk: no valid K (C_y too small)");
  return {static_cast<int>(j), static_cast<int>(k)};
}

inline std::pair<int, int> resolve_jk(const QuadratureParams& p, const ZeroCatalog& cat) {
  if (p.j > 0 && p.k > 0) {
    require(static_cast<std::size_t>(std::max(p.j, p.k)) <= cat.size(),
            "J and K must not exceed the catalog length");
    return {p.j, p.k};
  }
  auto jk = select_jk(p.c_x, p.c_y, cat);
  if (p.j > 0) jk.first = p.j;
  if (p.k > 0) jk.second = p.k;
  return jk;
}

// Bound on the lattice truncation error: contributions of lattice points
// outside the rotated rectangle, controlled through |J0(x)| <= sqrt(2/(pi x))
// on the first J (resp. K) zeros.
inline double err2_bound(const QuadratureParams& p, const ZeroCatalog& cat) {
  validate_quadrature(p, cat);
  auto [J, K] = resolve_jk(p, cat);
  const double pi = std::numbers::pi;
  const double eps_r2 = p.epsilon * std::numbers::sqrt2;
  const double cxt = scaled_cx(p);
  const double rx = eps_r2 / p.c_x;
  const double ry = eps_r2 / p.c_y;
  const double dj = J;
  const double dk = K;

  double log_a = 0.0;
  for (int i = 0; i < J; ++i) log_a += 0.5 * std::log((0.25 + cat[i] * cat[i]) / cat[i]);
  log_a -= dj * (0.25 * std::log(2.0) + 0.5 * std::log(pi) + 0.5 * std::log(p.c_x));
  double log_b = 0.0;
  for (int i = 0; i < K; ++i) log_b += 0.5 * std::log(0.25 + cat[i] * cat[i]);
  log_b += dk * (0.25 * std::log(2.0) - 0.5 * std::log(pi) - 0.5 * std::log(p.c_y));

  double lm = std::log(4.0 * cxt - 1.0);
  double lp = std::log(4.0 * cxt + 1.0);
  double inv = 1.0 / (4.0 * cxt - 1.0);
  double bracket_x = 2.0 * rx * (rx + 2.0 / (2.0 + dj)) +
                     8.0 * (rx * (1.0 + inv + 0.5 * lm) + (2.0 / dj) * (1.0 + 1.0 / dj) * (1.0 + inv) +
                            lm / dj) +
                     8.0 * (rx * (1.0 + 0.5 * lp + rx / (4.0 * dj)) + (2.0 / dj) * (1.0 + 1.0 / dj) +
                            lp / dj);
  double cx2 = p.c_x * p.c_x;
  double cy2 = p.c_y * p.c_y;
  double bracket_y = 2.0 * ry * (ry + 2.0 / (2.0 + dk)) +
                     8.0 * ry * (ry + 2.0 / (2.0 + dk)) *
                         (1.0 + cx2 / (cy2 - cx2) + cxt * (1.0 + p.c_x / (p.c_y - p.c_x)));
  return std::exp(log_a) * bracket_x + std::exp(log_b) * bracket_y;
}

namespace detail {

// One of the four sub-sums over the diagonal sublattices.
struct LatticeGroup {
  double coefficient = 0.0;
  std::vector<double> u;
  std::vector<double> v;
  std::vector<double> weight;  // 1/((k+1/2)^2 - l^2) and friends
  void push(double uu, double vv, double denom) {
    if (denom == 0.0) throw ConsistencyError("lattice weight is singular");
    u.push_back(uu);
    v.push_back(vv);
    weight.push_back(1.0 / denom);
  }
};

inline std::vector<LatticeGroup> build_lattice(const QuadratureParams& p) {
  const double eps = p.epsilon;
  const double cxt = scaled_cx(p);
  const double cyt = scaled_cy(p);
  // Counts of k >= 0 with k <= C - 1/2, and of k >= 1 with k <= C.
  auto half_count = [](double c) { return c < 0.5 ? 0L : static_cast<long>(std::floor(c - 0.5)) + 1; };
  auto int_count = [](double c) { return static_cast<long>(std::floor(c)); };
  const long nkh = half_count(cxt);
  const long nlh = half_count(cyt);
  const long nki = int_count(cxt);
  const long nli = int_count(cyt);

  std::vector<LatticeGroup> groups(4);
  groups[0].coefficient = 2.0;
  for (long k = 0; k < nkh; ++k) {
    double kh = k + 0.5;
    groups[0].push(4.0 * eps * kh, 0.0, kh * kh);
  }
  groups[1].coefficient = -2.0;
  for (long l = 0; l < nlh; ++l) {
    double lh = l + 0.5;
    groups[1].push(0.0, 2.0 * eps * lh, lh * lh);
  }
  groups[2].coefficient = 4.0;
  for (long k = 0; k < nkh; ++k) {
    double kh = k + 0.5;
    for (long l = 1; l <= nli; ++l) {
      double dl = static_cast<double>(l);
      groups[2].push(4.0 * eps * kh, 2.0 * eps * dl, kh * kh - dl * dl);
    }
  }
  groups[3].coefficient = 4.0;
  for (long k = 1; k <= nki; ++k) {
    double dk = static_cast<double>(k);
    for (long l = 0; l < nlh; ++l) {
      double lh = l + 0.5;
      groups[3].push(4.0 * eps * dk, 2.0 * eps * lh, dk * dk - lh * lh);
    }
  }
  return groups;
}

struct LatticeTotals {
  double sum = 0.0;       // S
  double envelope = 0.0;  // the Err3 bound
  std::size_t points = 0;
};

inline LatticeTotals evaluate_lattice(const QuadratureParams& p, const ZeroCatalog& cat,
                                      const TailConstants& tails, bool correct_tails,
                                      unsigned threads) {
  auto groups = build_lattice(p);
  TruncatedProduct F(cat, p.t_height);
  LatticeTotals out;
  for (const auto& g : groups) {
    std::size_t n = g.u.size();
    if (n == 0) continue;
    if (correct_tails) {
      double umax = *std::max_element(g.u.begin(), g.u.end());
      double vmax = *std::max_element(g.v.begin(), g.v.end());
      require_correction_converges(umax, vmax, tails);
    }
    std::vector<double> terms(n);
    std::vector<double> env(n);
    parallel_blocks(n, threads, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) {
        double f = F(g.u[i], g.v[i]);
        double corr = correct_tails ? correction_factor(g.u[i], g.v[i], tails) : 1.0;
        terms[i] = f * corr * g.weight[i];
        env[i] = correct_tails ? std::fabs(f) * delta_envelope(g.u[i], g.v[i], tails) *
                                     std::fabs(g.weight[i])
                               : 0.0;
      }
    });
    out.sum += g.coefficient * pairwise_sum(terms);
    out.envelope += std::fabs(g.coefficient) * pairwise_sum(env);
    out.points += n;
  }
  return out;
}

inline void validate_lattice(const QuadratureParams& p, const ZeroCatalog& cat) {
  require(p.epsilon > 0.0 && std::isfinite(p.epsilon), "require ε > 0");
  require(p.c_x > 0.0 && p.c_y > 0.0, "require C_x > 0 and C_y > 0");
  require(p.t_height > 0.0 && p.t_height <= cat.max_ordinate(),
          "require 0 < T ≤ largest catalogued ordinate");
}

}  // namespace detail

// S(eps, C_x, C_y, T): the lattice approximation to the principal-value
// integral, split into the two diagonal sublattices.
inline double lattice_sum(const QuadratureParams& p, const ZeroCatalog& cat, unsigned threads = 0,
                          bool correct_tails = true) {
  detail::validate_lattice(p, cat);
  TailConstants tails = correct_tails ? tail_constants(cat, p.t_height) : TailConstants{};
  tails.T = p.t_height;
  return detail::evaluate_lattice(p, cat, tails, correct_tails, threads).sum;
}

inline double err3_bound(const QuadratureParams& p, const ZeroCatalog& cat, const TailConstants& tails,
                         unsigned threads = 0) {
  detail::validate_lattice(p, cat);
  validate_tails(p, tails);
  QuadratureParams q = p;
  q.t_height = tails.T;
  return detail::evaluate_lattice(q, cat, tails, true, threads).envelope;
}

inline Eta2Result eta2(const QuadratureParams& p, const ZeroCatalog& cat, unsigned threads = 0) {
  validate_quadrature(p, cat);
  Eta2Result r;
  r.tails = tail_constants(cat, p.t_height);
  validate_tails(p, r.tails);
  auto [J, K] = resolve_jk(p, cat);
  r.params = p;
  r.params.j = J;
  r.params.k = K;
  auto totals = detail::evaluate_lattice(p, cat, r.tails, true, threads);
  r.lattice_sum = totals.sum;
  r.err1 = err1_bound(p.epsilon);
  r.err2 = err2_bound(r.params, cat);
  r.err3 = totals.envelope;
  const double four_pi2 = 4.0 * std::numbers::pi * std::numbers::pi;
  r.mu2_q1 = 0.25 - r.lattice_sum / four_pi2;
  r.mu2_q1_halfwidth = (r.err1 + r.err2 + r.err3) / four_pi2;
  r.value = 1.0 - 2.0 * r.mu2_q1;
  r.rigorous_halfwidth = 2.0 * r.mu2_q1_halfwidth;
  r.reference_delta = r.value - r.reference_value;
  return r;
}

// Logarithmic densities of sign patterns for a pair (f, g).
struct DensityRow {
  std::string region;
  double density = 0.0;
  bool same_sign = false;
};

struct DensityCase {
  int beta_f = 0;
  int beta_g = 0;
  bool mixed_classes = false;  // one standard, one reciprocal
  std::string example;
  std::vector<DensityRow> rows;
};

inline std::vector<DensityCase> density_table(double eta1, double eta2) {
  require(eta1 > 0.0 && eta1 < 0.5, "density_table: require 0 < η₁ < ½");
  require(eta2 > 0.0 && eta2 < 1.0, "density_table: require 0 < η₂ < 1");
  const char* kPos = "0 < E^f < E^g";
  const char* kMix = "E^f < 0 < E^g";
  const char* kNeg = "E^f < E^g < 0";
  const char* kBothPos = "0 < E^f and 0 < E^g";
  const char* kBothNeg = "E^f < 0 and E^g < 0";
  double q = (1.0 - eta2) / 4.0;
  return {
      {-1, 0, false, "(pi, psi)", {{kPos, eta1, true}, {kMix, 0.5 - eta1, false}, {kNeg, 0.5, true}}},
      {0, 1, false, "(psi, pi_r)", {{kPos, 0.5, true}, {kMix, 0.5 - eta1, false}, {kNeg, eta1, true}}},
      {-1, 1, false, "(pi, pi_r)",
       {{kPos, eta1, true}, {kMix, 1.0 - 2.0 * eta1, false}, {kNeg, eta1, true}}},
      {-1, -1, false, "(pi, theta)", {{kBothPos, eta1, true}, {kBothNeg, 1.0 - eta1, true}}},
      {0, 0, false, "(psi, Pi)", {{kBothPos, 0.5, true}, {kBothNeg, 0.5, true}}},
      {1, 1, false, "(theta_r, pi_r)", {{kBothPos, 1.0 - eta1, true}, {kBothNeg, eta1, true}}},
      {0, 0, true, "(psi, psi_r)",
       {{kMix, eta2 / 2.0, false},
        {"E^g < 0 < E^f", eta2 / 2.0, false},
        {kNeg, q, true},
        {"E^g < E^f < 0", q, true},
        {kPos, q, true},
        {"0 < E^g < E^f", q, true}}},
  };
}

inline double same_sign_density(const DensityCase& c) {
  double s = 0.0;
  for (const auto& r : c.rows)
    if (r.same_sign) s += r.density;
  return s;
}

}  // namespace zrace
