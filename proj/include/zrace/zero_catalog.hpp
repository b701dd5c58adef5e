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
#include <bit>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <string>
#include <type_traits>
#include <vector>

#include "zrace/errors.hpp"
#include "zrace/precision.hpp"
#include "zrace/summation.hpp"

namespace zrace {

// Smooth part of the zero counting function,
// (T/2pi) log(T/2pi) - T/2pi + 7/8.
inline double smooth_zero_count(double T) {
  double u = T / (2.0 * std::numbers::pi);
  return u * std::log(u) - u + 0.875;
}

// Positive ordinates of the nontrivial zeros of zeta, ascending. Each
// ordinate is held as hi + lo so that the decimal source survives to about
// 32 significant digits.
class ZeroCatalog {
 public:
  static constexpr double kFirstZero = 14.134725141734693;
  static constexpr double kCountSlack = 2.0;

  ZeroCatalog() = default;

  ZeroCatalog(std::vector<double> hi, std::vector<double> lo, int digits)
      : hi_(std::move(hi)), lo_(std::move(lo)), digits_(digits) {
    if (lo_.empty()) lo_.assign(hi_.size(), 0.0);
    validate();
  }

  std::size_t size() const { return hi_.size(); }
  bool empty() const { return hi_.empty(); }
  int source_digits() const { return digits_; }
  double operator[](std::size_t i) const { return hi_[i]; }
  const std::vector<double>& ordinates() const { return hi_; }
  const std::vector<double>& residuals() const { return lo_; }
  double max_ordinate() const { return hi_.back(); }

  HighPrecision exact(std::size_t i) const {
    return HighPrecision(hi_[i]) + HighPrecision(lo_[i]);
  }

  // Number of stored ordinates <= T, with multiplicity.
  std::size_t count_up_to(double T) const {
    require(T >= 0.0, "count_up_to: T must be non-negative");
    if (T > max_ordinate())
      throw CatalogError("catalog too short: T = " + std::to_string(T) +
                         " exceeds the largest ordinate " +
                         std::to_string(max_ordinate()));
    return static_cast<std::size_t>(
        std::upper_bound(hi_.begin(), hi_.end(), T) - hi_.begin());
  }

  // A catalog restricted to its first n ordinates.
  ZeroCatalog prefix(std::size_t n) const {
    require(n >= 1 && n <= size(), "prefix: length out of range");
    return ZeroCatalog(std::vector<double>(hi_.begin(), hi_.begin() + n),
                       std::vector<double>(lo_.begin(), lo_.begin() + n), digits_);
  }

  // FNV-1a 64 over the little-endian bytes of hi then lo.
  std::uint64_t fingerprint() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto eat = [&h](double x) {
      auto bits = std::bit_cast<std::uint64_t>(x);
      for (int b = 0; b < 8; ++b) {
        h ^= (bits >> (8 * b)) & 0xffU;
        h *= 0x100000001b3ULL;
      }
    };
    for (double x : hi_) eat(x);
    for (double x : lo_) eat(x);
    return h;
  }

 private:
  void validate() const {
    if (hi_.empty()) throw CatalogError("empty catalog");
    if (lo_.size() != hi_.size()) throw CatalogError("residual array length mismatch");
    if (std::fabs(hi_.front() - kFirstZero) > 0.01)
      throw CatalogError("first ordinate is not the first zeta zero");
    for (std::size_t i = 0; i < hi_.size(); ++i) {
      if (!(hi_[i] > 0.0) || !std::isfinite(hi_[i]))
        throw CatalogError("ordinate " + std::to_string(i + 1) + " is not positive");
      if (i > 0 && hi_[i] < hi_[i - 1])
        throw CatalogError("ordinates not ascending at entry " + std::to_string(i + 1));
      // Just before and just after the n-th zero the count is n-1 and n.
      double smooth = smooth_zero_count(hi_[i]);
      double n = static_cast<double>(i + 1);
      if (std::fabs(n - smooth) > kCountSlack || std::fabs(n - 1.0 - smooth) > kCountSlack)
        throw CatalogError("zero count disagrees with the smooth count near ordinate " +
                           std::to_string(hi_[i]) + " (missing or spurious zeros)");
    }
  }

  std::vector<double> hi_;
  std::vector<double> lo_;
  int digits_ = 0;
};

namespace detail {

inline std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

// Digits after the decimal point, or -1 if s is not a plain decimal.
inline int decimal_places(const std::string& s) {
  std::size_t i = 0;
  std::size_t int_digits = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++int_digits;
  if (int_digits == 0) return -1;
  if (i == s.size()) return 0;
  if (s[i] != '.') return -1;
  ++i;
  int frac = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++frac;
  return i == s.size() && frac > 0 ? frac : -1;
}

inline void put_u32(std::ostream& os, std::uint32_t v) {
  for (int b = 0; b < 4; ++b) os.put(static_cast<char>((v >> (8 * b)) & 0xffU));
}

inline void put_u64(std::ostream& os, std::uint64_t v) {
  for (int b = 0; b < 8; ++b) os.put(static_cast<char>((v >> (8 * b)) & 0xffU));
}

inline std::uint64_t get_uint(std::istream& is, int bytes) {
  std::uint64_t v = 0;
  for (int b = 0; b < bytes; ++b) {
    int c = is.get();
    if (c == EOF) throw CatalogError("truncated binary cache");
    v |= static_cast<std::uint64_t>(static_cast<unsigned char>(c)) << (8 * b);
  }
  return v;
}

}  // namespace detail

// Reads one ordinate per line. Blank lines are ignored. Every line must
// carry at least min_digits digits after the decimal point.
inline ZeroCatalog load_zeros(std::istream& in, int min_digits = 9) {
  std::vector<double> hi;
  std::vector<double> lo;
  int digits = 1 << 30;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = detail::trim(line);
    if (s.empty()) continue;
    int places = detail::decimal_places(s);
    if (places < 0)
      throw CatalogError("line " + std::to_string(lineno) + ": not a decimal number: '" + s + "'");
    if (places < min_digits)
      throw CatalogError("line " + std::to_string(lineno) + ": only " + std::to_string(places) +
                         " decimal digits, need " + std::to_string(min_digits));
    HighPrecision exact(s);
    double h = static_cast<double>(exact);
    hi.push_back(h);
    lo.push_back(static_cast<double>(exact - HighPrecision(h)));
    digits = std::min(digits, places);
  }
  if (hi.empty()) throw CatalogError("empty catalog");
  return ZeroCatalog(std::move(hi), std::move(lo), digits);
}

inline constexpr char kCacheMagic[4] = {'Z', 'C', 'A', 'T'};
inline constexpr std::uint32_t kCacheVersion = 2;

// Layout: "ZCAT", u32 version, u32 digits, u64 count, count hi doubles,
// then (version 2) count lo doubles. All little-endian.
inline void write_cache(const ZeroCatalog& cat, std::ostream& os) {
  os.write(kCacheMagic, 4);
  detail::put_u32(os, kCacheVersion);
  detail::put_u32(os, static_cast<std::uint32_t>(cat.source_digits()));
  detail::put_u64(os, cat.size());
  for (double x : cat.ordinates()) detail::put_u64(os, std::bit_cast<std::uint64_t>(x));
  for (double x : cat.residuals()) detail::put_u64(os, std::bit_cast<std::uint64_t>(x));
  if (!os) throw CatalogError("failed writing binary cache");
}

inline ZeroCatalog read_cache(std::istream& is) {
  char magic[4] = {};
  is.read(magic, 4);
  if (!is || !std::equal(magic, magic + 4, kCacheMagic)) throw CatalogError("bad cache magic");
  auto version = static_cast<std::uint32_t>(detail::get_uint(is, 4));
  if (version != 1 && version != 2)
    throw CatalogError("unsupported cache version " + std::to_string(version));
  auto digits = static_cast<int>(detail::get_uint(is, 4));
  auto count = detail::get_uint(is, 8);
  if (count == 0) throw CatalogError("empty catalog");
  if (count > (1ULL << 32)) throw CatalogError("implausible cache length");
  std::vector<double> hi(count);
  std::vector<double> lo(count, 0.0);
  for (auto& x : hi) x = std::bit_cast<double>(detail::get_uint(is, 8));
  if (version == 2)
    for (auto& x : lo) x = std::bit_cast<double>(detail::get_uint(is, 8));
  return ZeroCatalog(std::move(hi), std::move(lo), digits);
}

// Opens either a text catalog or a binary cache, by magic.
inline ZeroCatalog load_zeros_file(const std::string& path, int min_digits = 9) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CatalogError("cannot open zero catalog '" + path + "'");
  char magic[4] = {};
  in.read(magic, 4);
  bool binary = in.gcount() == 4 && std::equal(magic, magic + 4, kCacheMagic);
  in.clear();
  in.seekg(0);
  if (binary) {
    ZeroCatalog cat = read_cache(in);
    if (cat.source_digits() < min_digits)
      throw CatalogError("cached catalog has too few digits");
    return cat;
  }
  return load_zeros(in, min_digits);
}

// Sums over 0 < gamma <= T with q = 1/4 + gamma^2:
// 1/q, gamma^2/q^2, 1/q^2 and gamma^2/q^4.
template <class Real = double>
struct ZeroSums {
  Real inv_q{};
  Real g2_over_q2{};
  Real inv_q2{};
  Real g2_over_q4{};
};

template <class Real = double>
ZeroSums<Real> partial_sums(const ZeroCatalog& cat, double T) {
  std::size_t n = cat.count_up_to(T);
  ZeroSums<Real> out;
  if constexpr (std::is_same_v<Real, double>) {
    Accumulator a, b, c, d;
    for (std::size_t i = 0; i < n; ++i) {
      double g = cat[i];
      double g2 = g * g;
      double q = 0.25 + g2;
      double iq = 1.0 / q;
      double iq2 = iq * iq;
      a.add(iq);
      b.add(g2 * iq2);
      c.add(iq2);
      d.add(g2 * iq2 * iq2);
    }
    out = {a.value(), b.value(), c.value(), d.value()};
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      Real g = Real(cat[i]) + Real(cat.residuals()[i]);
      Real g2 = g * g;
      Real iq = 1 / (Real(0.25) + g2);
      Real iq2 = iq * iq;
      out.inv_q += iq;
      out.g2_over_q2 += g2 * iq2;
      out.inv_q2 += iq2;
      out.g2_over_q4 += g2 * iq2 * iq2;
    }
  }
  return out;
}

}  // namespace zrace
