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
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include <zrace/bessel.hpp>
#include <zrace/constants.hpp>

#include "oracles.hpp"

using zrace::bessel_j0;

TEST(BesselJ0, TrivialValues) {
  EXPECT_EQ(bessel_j0(0.0), 1.0);
  EXPECT_EQ(bessel_j0(-3.7), bessel_j0(3.7));
}

TEST(BesselJ0, MpmathSpotValues) {
  EXPECT_NEAR(bessel_j0(8.5), 0.04193925184293450355, 1e-16);
  EXPECT_NEAR(bessel_j0(20.0), 0.1670246643405831547, 1e-16);
  EXPECT_NEAR(bessel_j0(100.0), 0.01998585030422312242, 1e-16);
  EXPECT_NEAR(bessel_j0(2.404825557695773), 0.0, 1e-15);
}

TEST(BesselJ0, LargeArgumentsAgainstMpmath) {
  EXPECT_NEAR(bessel_j0(50.5), 0.09551989154970056708, 1e-15);
  EXPECT_NEAR(bessel_j0(1000.0), 0.02478668615242017456, 1e-15);
  EXPECT_NEAR(bessel_j0(12345.678), 0.00003058671332275824744, 1e-14);
  EXPECT_NEAR(bessel_j0(99999.5), -0.0006233556179769665192, 1e-13);
  EXPECT_NEAR(bessel_j0(1e5), -0.001719201116235972193, 1e-13);
}

TEST(BesselJ0, BoundHoldsOnRandomArguments) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1e4, 1e4);
  for (int i = 0; i < 1000000; ++i) {
    double x = u(rng);
    double j = bessel_j0(x);
    ASSERT_LE(std::fabs(j), zrace::bessel_j0_bound(x) + 1e-12) << x;
    ASSERT_EQ(j, bessel_j0(-x));
  }
}

TEST(BesselJ0, MatchesWideSeriesAcrossRegions) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 60.0);
  double worst = 0.0;
  for (int i = 0; i < 3000; ++i) {
    double x = u(rng);
    double err = std::fabs(bessel_j0(x) - oracle::bessel_j0(x));
    worst = std::max(worst, err);
  }
  EXPECT_LT(worst, 1e-15);
}

TEST(BesselJ0, ContinuousAcrossRegionSeams) {
  for (double seam : {4.0, 20.0}) {
    double below = bessel_j0(std::nextafter(seam, 0.0));
    double at = bessel_j0(seam);
    EXPECT_NEAR(below, oracle::bessel_j0(seam), 1e-15);
    EXPECT_NEAR(at, oracle::bessel_j0(seam), 1e-15);
  }
}

TEST(BesselJ0, EnvelopeBoundHolds) {
  for (double x = 0.0; x < 400.0; x += 0.0137) {
    ASSERT_LE(std::fabs(bessel_j0(x)), zrace::bessel_j0_bound(x) + 1e-15) << x;
    ASSERT_LE(std::fabs(bessel_j0(x)), 1.0);
  }
  EXPECT_EQ(zrace::bessel_j0_bound(0.1), 1.0);
}

TEST(BesselJ0, RejectsNonFinite) {
  EXPECT_THROW(bessel_j0(std::numeric_limits<double>::quiet_NaN()), zrace::PreconditionError);
  EXPECT_THROW(bessel_j0(std::numeric_limits<double>::infinity()), zrace::PreconditionError);
}

TEST(Constants, WidthValue) {
  auto c = zrace::constants();
  EXPECT_NEAR(c.w, 0.0461914, 5e-8);
  EXPECT_EQ(c.w, c.B1);
  // 2 + C0 - log 4pi evaluated in 40 digits (mpmath), correctly rounded.
  EXPECT_EQ(c.w, 0.0461914179322420676286205);
}

TEST(Constants, SquareSumRelations) {
  auto c = zrace::constants();
  EXPECT_NEAR(c.B1 + c.B2, 3.71006e-5, 5e-10);
  EXPECT_NEAR((c.B1 - c.B2) / 4.0, 0.0230864, 5e-8);
}

TEST(Constants, FourthPowerSumFromPublishedSums) {
  // B4 = 4((B1 + B2)/2 - sum gamma^2/q^4), with the published 1.43512e-7.
  double b4 = 4.0 * (3.71006e-5 / 2.0 - 1.43512e-7);
  EXPECT_NEAR(zrace::constants().B4, b4, 5e-9);
  EXPECT_NEAR(zrace::constants().B4, 7.363e-5, 5e-9);
}

TEST(Constants, SecondPowerSumMatchesStieltjesForm) {
  // sum 1/rho^2 = 1 + C0^2 + 2 gamma_1 - pi^2/8, evaluated with mpmath.
  EXPECT_NEAR(zrace::constants().B2, -0.0461543172958046027571, 1e-17);
}

TEST(Constants, ClosedFormsMatchZeroSumsWithinCertifiedTail) {
  const auto& cat = oracle::small_catalog();
  auto closed = zrace::zero_sum_closed_forms();
  auto partial = zrace::partial_sums(cat, cat.max_ordinate());
  struct Row {
    zrace::ZeroSummand s;
    double closed;
    double partial;
  } rows[] = {{zrace::ZeroSummand::inv_q, closed.inv_q, partial.inv_q},
              {zrace::ZeroSummand::g2_over_q2, closed.g2_over_q2, partial.g2_over_q2},
              {zrace::ZeroSummand::inv_q2, closed.inv_q2, partial.inv_q2},
              {zrace::ZeroSummand::g2_over_q4, closed.g2_over_q4, partial.g2_over_q4}};
  for (const auto& r : rows) {
    auto tail = zrace::zero_sum_tail(cat, r.s);
    EXPECT_GT(tail.estimate, 0.0);
    EXPECT_LE(std::fabs(r.partial + tail.estimate - r.closed), tail.bound + 1e-15 * r.closed)
        << static_cast<int>(r.s);
  }
}

TEST(Constants, TailBoundShrinksWithHeight) {
  const auto& cat = oracle::small_catalog();
  auto a = zrace::zero_sum_tail(cat.prefix(100), zrace::ZeroSummand::inv_q);
  auto b = zrace::zero_sum_tail(cat, zrace::ZeroSummand::inv_q);
  EXPECT_LT(b.bound, a.bound);
  EXPECT_LT(b.estimate, a.estimate);
}

TEST(Constants, SummandDerivativeMatchesFiniteDifference) {
  for (auto s : {zrace::ZeroSummand::inv_q, zrace::ZeroSummand::g2_over_q2, zrace::ZeroSummand::inv_q2,
                 zrace::ZeroSummand::g2_over_q4}) {
    for (double t : {14.0, 100.0, 5000.0}) {
      double h = 1e-4 * t;
      double fd = (zrace::summand_value(s, t + h) - zrace::summand_value(s, t - h)) / (2 * h);
      EXPECT_NEAR(zrace::summand_derivative(s, t), fd, 1e-6 * std::fabs(fd));
    }
  }
}

TEST(Constants, WidthFromFullCatalog) {
  const auto& cat = oracle::full_catalog();
  auto partial = zrace::partial_sums(cat, cat.max_ordinate());
  auto tail = zrace::zero_sum_tail(cat, zrace::ZeroSummand::inv_q);
  double w = 2.0 * (partial.inv_q + tail.estimate);
  EXPECT_NEAR(w, 0.0461914, 5e-8);
  EXPECT_LE(std::fabs(w - zrace::constants().w), 2.0 * tail.bound);
}
