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
#include <functional>
#include <span>
#include <vector>

#include "zrace/constants.hpp"
#include "zrace/errors.hpp"
#include "zrace/summation.hpp"

namespace zrace {

inline constexpr int kMaxPower = 64;

// Values of the prime sums at one point x.
struct PrimeSnapshot {
  double x = 0.0;
  std::uint64_t prime_count = 0;                  // pi(x)
  std::array<std::uint64_t, kMaxPower> power_count{};  // #{p : p^k <= x}, index k
  std::array<double, kMaxPower> log_power_sum{};       // sum_{p^k <= x} log p, index k
  double psi = 0.0;
  double theta = 0.0;
  double Pi = 0.0;
  double psi_r = 0.0;
  double theta_r = 0.0;
  double Pi_r = 0.0;
  double pi_r = 0.0;
  double pi_ell = 0.0;
  // pi_ell - pi_r = sum_{p <= x} sum_{k >= 2} 1/(k p^k), accumulated directly.
  double pi_ell_minus_pi_r = 0.0;
};

namespace detail {

// sum_{k>=2} y^k / k = -log(1 - y) - y, without cancellation for small y.
inline double log_series_tail(double y) {
  if (y > 0.01) return -std::log1p(-y) - y;
  double term = y * y;
  double sum = 0.0;
  for (int k = 2; k < 40; ++k) {
    sum += term / k;
    term *= y;
    if (term < 1e-20 * sum) break;
  }
  return sum;
}

inline std::vector<std::uint32_t> simple_primes(std::uint64_t n) {
  std::vector<bool> composite(n + 1, false);
  std::vector<std::uint32_t> out;
  for (std::uint64_t i = 2; i <= n; ++i) {
    if (composite[i]) continue;
    out.push_back(static_cast<std::uint32_t>(i));
    for (std::uint64_t j = i * i; j <= n; j += i) composite[j] = true;
  }
  return out;
}

inline std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

}  // namespace detail

// Largest r with r^k <= n.
inline std::uint64_t integer_root(std::uint64_t n, int k) {
  require(k >= 1, "integer_root: k must be positive");
  if (k == 1 || n < 2) return n;
  auto r = static_cast<std::uint64_t>(std::pow(static_cast<double>(n), 1.0 / k));
  auto pow_le = [&](std::uint64_t b) {
    // b^k <= n without overflow
    std::uint64_t acc = 1;
    for (int i = 0; i < k; ++i) {
      if (acc > n / b) return false;
      acc *= b;
    }
    return acc <= n;
  };
  while (r > 1 && !pow_le(r)) --r;
  while (pow_le(r + 1)) ++r;
  return r;
}

// Segmented sieve of Eratosthenes up to a fixed limit. Each evaluation
// streams over the primes once and accumulates all the prime sums.
class PrimeSieve {
 public:
  static constexpr std::uint64_t kSegment = 1u << 20;

  explicit PrimeSieve(std::uint64_t limit) : limit_(limit) {
    require(limit >= 2, "PrimeSieve: limit must be at least 2");
    base_ = detail::simple_primes(detail::isqrt(limit));
  }

  std::uint64_t limit() const { return limit_; }

  // Calls f(p) for every prime p <= hi in increasing order.
  template <class F>
  void for_each_prime(std::uint64_t hi, F&& f) const {
    if (hi > limit_) throw PreconditionError("sieve range exceeded");
    std::vector<std::uint8_t> seg(kSegment);
    for (std::uint64_t lo = 2; lo <= hi; lo += kSegment) {
      std::uint64_t top = std::min(hi, lo + kSegment - 1);
      std::size_t len = static_cast<std::size_t>(top - lo + 1);
      std::fill(seg.begin(), seg.begin() + len, std::uint8_t{1});
      for (std::uint32_t p : base_) {
        std::uint64_t pp = static_cast<std::uint64_t>(p) * p;
        if (pp > top) break;
        std::uint64_t start = std::max(pp, (lo + p - 1) / p * p);
        for (std::uint64_t m = start; m <= top; m += p) seg[m - lo] = 0;
      }
      for (std::size_t i = 0; i < len; ++i)
        if (seg[i]) f(lo + i);
    }
  }

  // Snapshots at the given points, which must be sorted ascending and lie
  // in [2, limit].
  std::vector<PrimeSnapshot> evaluate(std::span<const double> xs) const {
    if (!std::is_sorted(xs.begin(), xs.end())) throw PreconditionError("query points must be sorted");
    std::vector<PrimeSnapshot> out;
    out.reserve(xs.size());
    if (xs.empty()) return out;
    if (xs.front() < 2.0) throw PreconditionError("counting functions need x ≥ 2");
    if (xs.back() > static_cast<double>(limit_)) throw PreconditionError("sieve range exceeded");
    const auto hi = static_cast<std::uint64_t>(std::floor(xs.back()));

    // Prime powers p^k, k >= 2, in increasing order.
    struct Power {
      std::uint64_t n;
      std::uint32_t p;
      int k;
    };
    std::vector<Power> powers;
    for (std::uint32_t p : base_) {
      std::uint64_t n = static_cast<std::uint64_t>(p) * p;
      for (int k = 2; n <= hi; ++k) {
        powers.push_back({n, p, k});
        if (n > hi / p) break;
        n *= p;
      }
    }
    std::sort(powers.begin(), powers.end(), [](const Power& a, const Power& b) { return a.n < b.n; });

    State st;
    std::size_t qi = 0;
    std::size_t pi_idx = 0;
    auto flush = [&](double below) {
      while (qi < xs.size() && xs[qi] < below) out.push_back(st.snapshot(xs[qi++]));
    };
    auto apply_powers_upto = [&](std::uint64_t n) {
      while (pi_idx < powers.size() && powers[pi_idx].n < n) {
        const Power& pw = powers[pi_idx++];
        flush(static_cast<double>(pw.n));
        st.add_power(pw.p, pw.k, pw.n);
      }
    };
    for_each_prime(hi, [&](std::uint64_t p) {
      apply_powers_upto(p);
      flush(static_cast<double>(p));
      st.add_prime(p);
    });
    apply_powers_upto(hi + 1);
    flush(std::numeric_limits<double>::infinity());
    return out;
  }

  PrimeSnapshot at(double x) const {
    double xs[1] = {x};
    return evaluate(xs).front();
  }

 private:
  struct State {
    std::uint64_t count = 0;
    std::array<std::uint64_t, kMaxPower> power_count{};
    std::array<Accumulator, kMaxPower> log_power{};
    Accumulator theta_r, Pi_r, pi_r, pi_ell, ell_minus_r, psi_r;

    void add_prime(std::uint64_t p) {
      double dp = static_cast<double>(p);
      double lp = std::log(dp);
      double ip = 1.0 / dp;
      ++count;
      ++power_count[1];
      log_power[1].add(lp);
      psi_r.add(lp * ip);
      theta_r.add(lp * ip);
      Pi_r.add(ip);
      pi_r.add(ip);
      double tail = detail::log_series_tail(ip);
      pi_ell.add(ip);
      pi_ell.add(tail);
      ell_minus_r.add(tail);
    }

    void add_power(std::uint32_t p, int k, std::uint64_t n) {
      double lp = std::log(static_cast<double>(p));
      double in = 1.0 / static_cast<double>(n);
      ++power_count[k];
      log_power[k].add(lp);
      psi_r.add(lp * in);
      Pi_r.add(in / k);
    }

    PrimeSnapshot snapshot(double x) const {
      PrimeSnapshot s;
      s.x = x;
      s.prime_count = count;
      s.power_count = power_count;
      Accumulator psi, Pi;
      for (int k = 1; k < kMaxPower; ++k) {
        s.log_power_sum[k] = log_power[k].value();
        if (power_count[k] == 0) continue;
        psi.add(s.log_power_sum[k]);
        Pi.add(static_cast<double>(power_count[k]) / k);
      }
      s.psi = psi.value();
      s.theta = s.log_power_sum[1];
      s.Pi = Pi.value();
      s.psi_r = psi_r.value();
      s.theta_r = theta_r.value();
      s.Pi_r = Pi_r.value();
      s.pi_r = pi_r.value();
      s.pi_ell = pi_ell.value();
      s.pi_ell_minus_pi_r = ell_minus_r.value();
      return s;
    }
  };

  std::uint64_t limit_;
  std::vector<std::uint32_t> base_;
};

struct MertensConstants {
  double c0 = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double c1_remainder = 0.0;  // certified bound on |c1 - true C1| from the tail
  double c2_remainder = 0.0;
  std::uint64_t limit = 0;
};

namespace detail {

// zeta(s) - 1 and -zeta'(s)/zeta(s) for s = 2..16 (mpmath, 20 digits).
struct ZetaRow {
  int s;
  double zeta_minus_one;
  double log_deriv;
};
inline constexpr ZetaRow kZetaTable[] = {
    {2, 0.64493406684822643647, 0.5699609930945328064},
    {3, 0.2020569031595942854, 0.16482268215827724019},
    {4, 0.082323233711138191516, 0.063669764955371126496},
    {5, 0.036927755143369926331, 0.027556192191530470545},
    {6, 0.017343061984449139715, 0.012633069032511060824},
    {7, 0.0083492773819228268398, 0.0059835585706383961538},
    {8, 0.0040773561979443393787, 0.0028901683080467563835},
    {9, 0.0020083928260822144179, 0.001413144078811703121},
    {10, 0.00099457512781808533715, 0.0006963404452840204366},
    {11, 0.0004941886041194645587, 0.00034485180053842732751},
    {12, 0.00024608655330804829864, 0.00017134068121667170303},
    {13, 0.00012271334757848914675, 0.0000853134395581688407},
    {14, 0.000061248135058704829259, 0.000042538887954226155498},
    {15, 0.000030588236307020493552, 0.000021230436131403052931},
    {16, 0.000015282259408651871733, 0.000010602280005720943388},
};
inline constexpr int kZetaMaxS = 16;

inline int moebius(int m) {
  int mu = 1;
  for (int p = 2; p * p <= m; ++p) {
    if (m % p) continue;
    m /= p;
    if (m % p == 0) return 0;
    mu = -mu;
  }
  return m > 1 ? -mu : mu;
}

}  // namespace detail

// C1 = C0 + sum_p log p/(p(p-1)) and C2 = -C0 + sum_p sum_{k>=2} 1/(k p^k).
// Primes up to the limit are summed directly; the rest comes from the
// Moebius-inverted identities
//   sum_{p>L} p^-s        = sum_m mu(m)/m log zeta_L(ms),
//   sum_{p>L} log p p^-s  = sum_m mu(m) (-zeta_L'/zeta_L)(ms),
// where zeta_L is zeta with the Euler factors of p <= L removed.
inline MertensConstants mertens_constants(std::uint64_t limit) {
  if (limit < 1000000) throw PreconditionError("mertens_constants: limit must be at least 10^6");
  const int S = detail::kZetaMaxS;
  std::array<Accumulator, detail::kZetaMaxS + 1> log_factor{};  // sum log(1 - p^-s)
  std::array<Accumulator, detail::kZetaMaxS + 1> log_deriv{};   // sum log p p^-s/(1 - p^-s)
  Accumulator head1, head2;
  PrimeSieve sieve(limit);
  sieve.for_each_prime(limit, [&](std::uint64_t p) {
    double dp = static_cast<double>(p);
    double lp = std::log(dp);
    double ip = 1.0 / dp;
    head1.add(lp * ip / (dp - 1.0));
    head2.add(detail::log_series_tail(ip));
    double pw = ip;
    for (int s = 2; s <= S; ++s) {
      pw *= ip;
      if (pw < 1e-40) break;
      log_factor[s].add(std::log1p(-pw));
      log_deriv[s].add(lp * pw / (1.0 - pw));
    }
  });

  std::array<double, 2 * detail::kZetaMaxS + 1> log_zeta_rest{};
  std::array<double, 2 * detail::kZetaMaxS + 1> lambda_rest{};
  for (const auto& row : detail::kZetaTable) {
    log_zeta_rest[row.s] = std::log1p(row.zeta_minus_one) + log_factor[row.s].value();
    lambda_rest[row.s] = row.log_deriv - log_deriv[row.s].value();
  }
  const double L = static_cast<double>(limit);
  const double logL = std::log(L);
  // |log zeta_L(s)| and |zeta_L'/zeta_L(s)| for s > 16.
  auto omitted = [&](int s) { return 2.0 * std::pow(L, 1.0 - s) * (logL + 1.0); };

  Accumulator tail1, tail2;
  double trunc = 0.0;
  for (int k = 2; k <= S; ++k) {
    for (int m = 1; m * k <= 2 * S; ++m) {
      int mu = detail::moebius(m);
      if (mu == 0) continue;
      int s = m * k;
      if (s > S) {
        trunc += omitted(s);
        continue;
      }
      tail1.add(mu * lambda_rest[s]);
      tail2.add(mu * log_zeta_rest[s] / (m * static_cast<double>(k)));
    }
  }
  // Terms with k > 16, or m k > 32, are below L^(1-k) log L each.
  trunc += 4.0 * std::pow(L, -static_cast<double>(S)) * (logL + 1.0);

  MertensConstants c;
  c.limit = limit;
  c.c0 = constants().euler_gamma;
  c.c1 = c.c0 + (head1.value() + tail1.value());
  c.c2 = -c.c0 + (head2.value() + tail2.value());
  // Truncation plus a rounding allowance for the compensated sums and the
  // 20-digit literals.
  double rounding = 64.0 * std::numeric_limits<double>::epsilon();
  c.c1_remainder = trunc + rounding;
  c.c2_remainder = trunc + rounding;
  return c;
}

}  // namespace zrace
