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
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "zrace/constants.hpp"
#include "zrace/errors.hpp"
#include "zrace/parallel.hpp"
#include "zrace/zero_catalog.hpp"

namespace zrace {

// SplitMix64 (Steele, Lea, Flood). Sample i of a run with seed s draws
// from its own stream, seeded with mix(s ^ mix(i + golden)), so results do
// not depend on how samples are spread over threads.
class SplitMix64 {
 public:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  static SplitMix64 substream(std::uint64_t seed, std::uint64_t index) {
    return SplitMix64(mix(seed ^ mix(index + kGolden)));
  }

  std::uint64_t next() {
    state_ += kGolden;
    return mix(state_);
  }

  // A uniform point on the unit circle: a point (a, b) uniform in the unit
  // disc by rejection, mapped to (cos 2phi, sin 2phi).
  void unit_circle(double& c, double& s) {
    constexpr double kScale = 1.0 / 2147483648.0;
    for (;;) {
      std::uint64_t r = next();
      double a = static_cast<double>(static_cast<std::int32_t>(r >> 32)) * kScale;
      double b = static_cast<double>(static_cast<std::int32_t>(r & 0xffffffffU)) * kScale;
      double rr = a * a + b * b;
      if (rr >= 1.0 || rr == 0.0) continue;
      c = (a * a - b * b) / rr;
      s = 2.0 * a * b / rr;
      return;
    }
  }

 private:
  std::uint64_t state_;
};

// Streaming mean and variance with a pairwise merge (Chan et al.).
struct RunningStats {
  std::uint64_t n = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x) {
    ++n;
    double d = x - mean;
    mean += d / static_cast<double>(n);
    m2 += d * (x - mean);
  }

  void merge(const RunningStats& o) {
    if (o.n == 0) return;
    if (n == 0) {
      *this = o;
      return;
    }
    double na = static_cast<double>(n);
    double nb = static_cast<double>(o.n);
    double d = o.mean - mean;
    double tot = na + nb;
    mean += d * nb / tot;
    m2 += o.m2 + d * d * na * nb / tot;
    n += o.n;
  }

  double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }
  double std_error() const { return n > 1 ? std::sqrt(variance() / static_cast<double>(n)) : 0.0; }
};

struct Estimate {
  double mean = 0.0;
  double std_error = 0.0;
};

struct SampleBatch {
  std::uint64_t n_samples = 0;
  std::size_t n_zeros = 0;
  std::uint64_t seed = 0;
  std::map<std::string, Estimate> estimates;
  std::map<std::string, std::uint64_t> counts;
  // 2 sum_{m > n_zeros} 1/(1/4 + gamma_m^2): size of the omitted part.
  double truncation_bias = 0.0;
  // 2 sum_{m <= n_zeros} 1/(1/4 + gamma_m^2), the support half-width of X - Y.
  double support_bound = 0.0;
  std::uint64_t support_violations = 0;
  double max_affine_deviation = 0.0;
};

namespace detail {

inline constexpr std::uint64_t kSampleBlock = 4096;

struct ZeroCoefficients {
  std::vector<double> cos_coef;  // 1/q
  std::vector<double> sin_coef;  // 2 gamma / q
  double support = 0.0;
  double bias = 0.0;
};

inline ZeroCoefficients zero_coefficients(const ZeroCatalog& cat, std::size_t n_zeros) {
  require(n_zeros >= 1 && n_zeros <= cat.size(), "n_zeros must be between 1 and the catalog size");
  ZeroCoefficients z;
  z.cos_coef.resize(n_zeros);
  z.sin_coef.resize(n_zeros);
  Accumulator acc;
  for (std::size_t i = 0; i < n_zeros; ++i) {
    double g = cat[i];
    double q = 0.25 + g * g;
    z.cos_coef[i] = 1.0 / q;
    z.sin_coef[i] = 2.0 * g / q;
    acc.add(1.0 / q);
  }
  z.support = 2.0 * acc.value();
  z.bias = std::max(0.0, constants().w - z.support);
  return z;
}

// Draws (D, S) = (sum cos/q, sum 2 gamma sin/q) for one sample, so that
// X = S + D and Y = S - D.
inline void draw_pair(SplitMix64& rng, const ZeroCoefficients& z, double& d, double& s) {
  double dd = 0.0;
  double ss = 0.0;
  const std::size_t n = z.cos_coef.size();
  for (std::size_t i = 0; i < n; ++i) {
    double c, sn;
    rng.unit_circle(c, sn);
    dd += z.cos_coef[i] * c;
    ss += z.sin_coef[i] * sn;
  }
  d = dd;
  s = ss;
}

// Runs body(rng, local) for every sample, block by block, and merges the
// per-block results in block order.
template <class Local, class Body>
Local run_blocks(std::uint64_t n_samples, std::uint64_t seed, unsigned threads, Body&& body) {
  std::uint64_t blocks = (n_samples + kSampleBlock - 1) / kSampleBlock;
  std::vector<Local> partial(blocks);
  parallel_blocks(blocks, threads, [&](std::size_t lo, std::size_t hi) {
    for (std::size_t b = lo; b < hi; ++b) {
      std::uint64_t first = b * kSampleBlock;
      std::uint64_t last = std::min(n_samples, first + kSampleBlock);
      for (std::uint64_t i = first; i < last; ++i) {
        SplitMix64 rng = SplitMix64::substream(seed, i);
        body(rng, partial[b]);
      }
    }
  });
  Local total;
  for (const auto& p : partial) total.merge(p);
  return total;
}

inline Estimate indicator_estimate(std::uint64_t hits, std::uint64_t n) {
  double p = static_cast<double>(hits) / static_cast<double>(n);
  double var = n > 1 ? p * (1.0 - p) * static_cast<double>(n) / static_cast<double>(n - 1) : 0.0;
  return {p, std::sqrt(var / static_cast<double>(n))};
}

}  // namespace detail

// V1 = sum 2 cos(phi_m) / sqrt(1/4 + gamma_m^2), truncated at n_zeros.
inline SampleBatch sample_v1(std::uint64_t n_samples, std::size_t n_zeros, std::uint64_t seed,
                             const ZeroCatalog& cat, const std::vector<double>& thresholds = {0.5, 1.0, 1.5, 2.0},
                             unsigned threads = 0) {
  require(n_samples >= 2, "n_samples must be at least 2");
  require(n_zeros >= 1 && n_zeros <= cat.size(), "n_zeros must be between 1 and the catalog size");
  std::vector<double> coef(n_zeros);
  for (std::size_t i = 0; i < n_zeros; ++i) coef[i] = 2.0 / std::sqrt(0.25 + cat[i] * cat[i]);
  auto z = detail::zero_coefficients(cat, n_zeros);

  struct Local {
    RunningStats value;
    std::vector<std::uint64_t> above;
    double max_abs = 0.0;
    void merge(const Local& o) {
      value.merge(o.value);
      if (above.size() < o.above.size()) above.resize(o.above.size(), 0);
      for (std::size_t i = 0; i < o.above.size(); ++i) above[i] += o.above[i];
      max_abs = std::max(max_abs, o.max_abs);
    }
  };
  Local total = detail::run_blocks<Local>(n_samples, seed, threads, [&](SplitMix64& rng, Local& loc) {
    if (loc.above.empty()) loc.above.assign(thresholds.size(), 0);
    double v = 0.0;
    for (std::size_t i = 0; i < n_zeros; ++i) {
      double c, s;
      rng.unit_circle(c, s);
      v += coef[i] * c;
    }
    loc.value.add(v);
    loc.max_abs = std::max(loc.max_abs, std::fabs(v));
    for (std::size_t t = 0; t < thresholds.size(); ++t)
      if (v > thresholds[t]) ++loc.above[t];
  });
  total.above.resize(thresholds.size(), 0);

  SampleBatch out;
  out.n_samples = n_samples;
  out.n_zeros = n_zeros;
  out.seed = seed;
  out.truncation_bias = z.bias;
  out.support_bound = z.support;
  out.estimates["mean"] = {total.value.mean, total.value.std_error()};
  out.estimates["max_abs"] = {total.max_abs, 0.0};
  for (std::size_t t = 0; t < thresholds.size(); ++t) {
    char name[64];
    std::snprintf(name, sizeof name, "P(V1>%g)", thresholds[t]);
    out.estimates[name] = detail::indicator_estimate(total.above[t], n_samples);
    out.counts[name] = total.above[t];
  }
  return out;
}

// V2 = (X, Y) truncated at n_zeros. Quadrants are open; ties at zero go to
// the quadrant on the non-negative side and have probability zero.
inline SampleBatch sample_v2(std::uint64_t n_samples, std::size_t n_zeros, std::uint64_t seed,
                             const ZeroCatalog& cat, unsigned threads = 0) {
  require(n_samples >= 2, "n_samples must be at least 2");
  auto z = detail::zero_coefficients(cat, n_zeros);
  const double w = constants().w;

  struct Local {
    std::uint64_t quad[4] = {0, 0, 0, 0};
    std::uint64_t violations = 0;
    double max_diff = 0.0;
    void merge(const Local& o) {
      for (int i = 0; i < 4; ++i) quad[i] += o.quad[i];
      violations += o.violations;
      max_diff = std::max(max_diff, o.max_diff);
    }
  };
  Local total = detail::run_blocks<Local>(n_samples, seed, threads, [&](SplitMix64& rng, Local& loc) {
    double d, s;
    detail::draw_pair(rng, z, d, s);
    double x = s + d;
    double y = s - d;
    int q = x >= 0.0 ? (y >= 0.0 ? 0 : 3) : (y >= 0.0 ? 1 : 2);
    ++loc.quad[q];
    double diff = std::fabs(x - y);
    loc.max_diff = std::max(loc.max_diff, diff);
    if (diff > w) ++loc.violations;
  });

  SampleBatch out;
  out.n_samples = n_samples;
  out.n_zeros = n_zeros;
  out.seed = seed;
  out.truncation_bias = z.bias;
  out.support_bound = z.support;
  out.support_violations = total.violations;
  const char* names[4] = {"Q1", "Q2", "Q3", "Q4"};
  for (int i = 0; i < 4; ++i) {
    out.estimates[names[i]] = detail::indicator_estimate(total.quad[i], n_samples);
    out.counts[names[i]] = total.quad[i];
  }
  out.estimates["eta2"] = detail::indicator_estimate(total.quad[1] + total.quad[3], n_samples);
  out.counts["eta2"] = total.quad[1] + total.quad[3];
  out.estimates["max_abs_diff"] = {total.max_diff, 0.0};
  return out;
}

// Bias vector of the nine normalized error terms, in the order
// psi, theta, Pi, pi, psi_r, theta_r, Pi_r, pi_r, pi_ell.
inline constexpr double kNineBias[9] = {0, -1, 0, -1, 0, 1, 0, 1, 1};

inline std::array<double, 9> nine_vector(double y1, double y2) {
  std::array<double, 9> e{};
  for (int i = 0; i < 9; ++i) e[i] = kNineBias[i] + (i < 4 ? y1 : y2);
  return e;
}

// Largest violation of the affine-plane structure, measured as the gap
// between coordinate differences and bias differences within each block.
inline double affine_deviation(const std::array<double, 9>& e) {
  double worst = 0.0;
  for (int i = 1; i < 9; ++i) {
    int base = i < 4 ? 0 : 4;
    if (i == base) continue;
    double gap = (e[i] - e[base]) - (kNineBias[i] - kNineBias[base]);
    worst = std::max(worst, std::fabs(gap));
  }
  return worst;
}

// The nine-component vector bias + Y1 (1,1,1,1,0,...) + Y2 (0,...,1,1,1,1,1)
// with (Y1, Y2) distributed as V2 truncated at n_zeros.
inline SampleBatch sample_nine(std::uint64_t n_samples, std::size_t n_zeros, std::uint64_t seed,
                               const ZeroCatalog& cat, unsigned threads = 0) {
  require(n_samples >= 2, "n_samples must be at least 2");
  auto z = detail::zero_coefficients(cat, n_zeros);

  struct Local {
    std::array<RunningStats, 9> coord;
    std::uint64_t opposite = 0;
    double max_dev = 0.0;
    void merge(const Local& o) {
      for (int i = 0; i < 9; ++i) coord[i].merge(o.coord[i]);
      opposite += o.opposite;
      max_dev = std::max(max_dev, o.max_dev);
    }
  };
  Local total = detail::run_blocks<Local>(n_samples, seed, threads, [&](SplitMix64& rng, Local& loc) {
    double d, s;
    detail::draw_pair(rng, z, d, s);
    auto e = nine_vector(s + d, s - d);
    for (int i = 0; i < 9; ++i) loc.coord[i].add(e[i]);
    if ((e[0] > 0.0) != (e[4] > 0.0)) ++loc.opposite;
    loc.max_dev = std::max(loc.max_dev, affine_deviation(e));
  });

  SampleBatch out;
  out.n_samples = n_samples;
  out.n_zeros = n_zeros;
  out.seed = seed;
  out.truncation_bias = z.bias;
  out.support_bound = z.support;
  out.max_affine_deviation = total.max_dev;
  const char* names[9] = {"E_psi", "E_theta", "E_Pi", "E_pi", "E_psi_r", "E_theta_r", "E_Pi_r", "E_pi_r", "E_pi_ell"};
  for (int i = 0; i < 9; ++i) out.estimates[std::string("mean_") + names[i]] = {total.coord[i].mean, total.coord[i].std_error()};
  out.estimates["eta2"] = detail::indicator_estimate(total.opposite, n_samples);
  out.counts["eta2"] = total.opposite;
  return out;
}

}  // namespace zrace
