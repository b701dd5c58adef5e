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

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include <gtest/gtest.h>

#include <zrace/zero_catalog.hpp>

#include "oracles.hpp"

using zrace::CatalogError;
using zrace::ZeroCatalog;

namespace {

std::string first_lines(int n) {
  std::ifstream in(oracle::data_path("zeros_300.txt"));
  std::string line, out;
  for (int i = 0; i < n && std::getline(in, line); ++i) out += line + "\n";
  return out;
}

ZeroCatalog parse(const std::string& text, int min_digits = 9) {
  std::istringstream in(text);
  return zrace::load_zeros(in, min_digits);
}

}  // namespace

TEST(ZeroCatalog, LoadsReferenceTable) {
  const auto& cat = oracle::small_catalog();
  EXPECT_EQ(cat.size(), 300u);
  EXPECT_EQ(cat[0], 14.1347251417346937904572519836);
  EXPECT_GE(cat.source_digits(), 27);
}

TEST(ZeroCatalog, AcceptsCrlfAndBlankLines) {
  auto cat = parse("14.134725141734693790\r\n\r\n21.022039638771554993\r\n");
  EXPECT_EQ(cat.size(), 2u);
  EXPECT_EQ(cat.source_digits(), 18);
}

TEST(ZeroCatalog, RejectsEmptyInput) { EXPECT_THROW(parse(""), CatalogError); }

TEST(ZeroCatalog, RejectsWrongFirstZero) {
  EXPECT_THROW(parse("15.000000000000\n21.022039638771\n"), CatalogError);
}

TEST(ZeroCatalog, RejectsDescendingOrdinates) {
  EXPECT_THROW(parse("14.134725141734\n25.010857580145\n21.022039638771\n"), CatalogError);
}

TEST(ZeroCatalog, RejectsMalformedLines) {
  EXPECT_THROW(parse("14.134725141734\nabc\n"), CatalogError);
  EXPECT_THROW(parse("14.134725141734\n-21.022039638771\n"), CatalogError);
  EXPECT_THROW(parse("14.134725141734\n2.1e1\n"), CatalogError);
}

TEST(ZeroCatalog, RejectsTooFewDigits) {
  EXPECT_THROW(parse("14.1347\n"), CatalogError);
  EXPECT_NO_THROW(parse("14.1347\n", 4));
}

TEST(ZeroCatalog, DetectsMissingZeros) {
  // Keep every other zero: the counting check must notice the gap.
  std::ifstream in(oracle::data_path("zeros_300.txt"));
  std::string line, text;
  for (int i = 0; std::getline(in, line); ++i)
    if (i % 2 == 0 || i < 10) text += line + "\n";
  EXPECT_THROW(parse(text), CatalogError);
}

TEST(ZeroCatalog, ResidualCarriesDigitsBeyondDouble) {
  auto cat = parse("14.1347251417346937904572519836\n");
  zrace::HighPrecision exact("14.1347251417346937904572519836");
  EXPECT_LT(static_cast<double>(abs(cat.exact(0) - exact)), 1e-28);
  EXPECT_NE(cat.residuals()[0], 0.0);
}

TEST(ZeroCatalog, CountUpToIsMonotoneAndExact) {
  const auto& cat = oracle::small_catalog();
  EXPECT_EQ(cat.count_up_to(0.0), 0u);
  EXPECT_EQ(cat.count_up_to(14.0), 0u);
  EXPECT_EQ(cat.count_up_to(14.2), 1u);
  EXPECT_EQ(cat.count_up_to(cat[99]), 100u);
  std::size_t prev = 0;
  for (double t = 0.0; t <= cat.max_ordinate(); t += 0.37) {
    auto c = cat.count_up_to(t);
    ASSERT_GE(c, prev);
    prev = c;
  }
  EXPECT_EQ(cat.count_up_to(cat.max_ordinate()), cat.size());
}

TEST(ZeroCatalog, CountBeyondCatalogIsAnError) {
  const auto& cat = oracle::small_catalog();
  EXPECT_THROW(cat.count_up_to(cat.max_ordinate() + 1e-9), CatalogError);
  EXPECT_THROW(cat.count_up_to(-1.0), zrace::PreconditionError);
}

TEST(ZeroCatalog, SmoothCountTracksTrueCount) {
  const auto& cat = oracle::small_catalog();
  for (std::size_t i = 0; i < cat.size(); ++i) {
    double s = zrace::smooth_zero_count(cat[i]);
    ASSERT_LE(std::fabs(s - (static_cast<double>(i) + 0.5)), 2.0) << i;
  }
}

TEST(ZeroCatalog, CacheRoundTripIsBitExact) {
  const auto& cat = oracle::small_catalog();
  std::stringstream buf;
  zrace::write_cache(cat, buf);
  auto back = zrace::read_cache(buf);
  ASSERT_EQ(back.size(), cat.size());
  EXPECT_EQ(back.fingerprint(), cat.fingerprint());
  EXPECT_EQ(back.source_digits(), cat.source_digits());
  for (std::size_t i = 0; i < cat.size(); ++i) {
    ASSERT_EQ(back[i], cat[i]);
    ASSERT_EQ(back.residuals()[i], cat.residuals()[i]);
  }
}

TEST(ZeroCatalog, CacheHeaderLayout) {
  auto cat = parse(first_lines(3));
  std::stringstream buf;
  zrace::write_cache(cat, buf);
  std::string bytes = buf.str();
  ASSERT_EQ(bytes.size(), 4u + 4u + 4u + 8u + 2u * 3u * 8u);
  EXPECT_EQ(bytes.substr(0, 4), "ZCAT");
  EXPECT_EQ(static_cast<unsigned char>(bytes[4]), 2);
  EXPECT_EQ(static_cast<unsigned char>(bytes[12]), 3);
}

TEST(ZeroCatalog, CacheRejectsCorruption) {
  std::stringstream bad("ZCAX\x02");
  EXPECT_THROW(zrace::read_cache(bad), CatalogError);
  auto cat = parse(first_lines(3));
  std::stringstream buf;
  zrace::write_cache(cat, buf);
  std::string truncated = buf.str().substr(0, 30);
  std::stringstream t(truncated);
  EXPECT_THROW(zrace::read_cache(t), CatalogError);
}

TEST(ZeroCatalog, FileLoaderDetectsFormat) {
  const auto& cat = oracle::small_catalog();
  std::string path = ::testing::TempDir() + "zrace_cache.bin";
  {
    std::ofstream f(path, std::ios::binary);
    zrace::write_cache(cat, f);
  }
  auto back = zrace::load_zeros_file(path);
  EXPECT_EQ(back.fingerprint(), cat.fingerprint());
  EXPECT_THROW(zrace::load_zeros_file(path + ".missing"), CatalogError);
}

TEST(ZeroCatalog, PrefixKeepsLeadingOrdinates) {
  const auto& cat = oracle::small_catalog();
  auto p = cat.prefix(50);
  EXPECT_EQ(p.size(), 50u);
  EXPECT_EQ(p.max_ordinate(), cat[49]);
  EXPECT_THROW(cat.prefix(0), zrace::PreconditionError);
}

TEST(ZeroCatalog, PartialSumsAgreeAcrossPrecisions) {
  const auto& cat = oracle::small_catalog();
  auto d = zrace::partial_sums(cat, cat.max_ordinate());
  auto h = zrace::partial_sums<zrace::HighPrecision>(cat, cat.max_ordinate());
  EXPECT_NEAR(d.inv_q, static_cast<double>(h.inv_q), 1e-16);
  EXPECT_NEAR(d.g2_over_q2, static_cast<double>(h.g2_over_q2), 1e-16);
  EXPECT_NEAR(d.inv_q2, static_cast<double>(h.inv_q2), 1e-19);
  EXPECT_NEAR(d.g2_over_q4, static_cast<double>(h.g2_over_q4), 1e-21);
}

TEST(ZeroCatalog, FullCatalogIsValidAndCoversReferenceHeight) {
  const auto& cat = oracle::full_catalog();
  EXPECT_GE(cat.size(), 10000u);
  EXPECT_GT(cat.max_ordinate(), 7500.0);
  // Spot values against the independent mpmath table.
  const auto& ref = oracle::small_catalog();
  for (std::size_t i = 0; i < ref.size(); ++i) ASSERT_NEAR(cat[i], ref[i], 1e-9) << i;
}
