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
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <zrace/parallel.hpp>
#include <zrace/summation.hpp>

using zrace::Accumulator;

TEST(Accumulator, RecoversSmallTermsLostByNaiveSum) {
  Accumulator acc;
  double naive = 0.0;
  acc.add(1.0);
  naive += 1.0;
  for (int i = 0; i < 1000; ++i) {
    acc.add(1e-17);
    naive += 1e-17;
  }
  EXPECT_EQ(naive, 1.0);
  EXPECT_NEAR(acc.value(), 1.0 + 1e-14, 1e-16);
}

TEST(Accumulator, MergeMatchesSequentialWithinRounding) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> xs(10000);
  for (auto& x : xs) x = u(rng) * std::pow(10.0, static_cast<int>(u(rng) * 8));
  Accumulator all, left, right;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    all.add(xs[i]);
    (i < 5000 ? left : right).add(xs[i]);
  }
  left.merge(right);
  boost::multiprecision::cpp_bin_float_100 exact = 0;
  for (double x : xs) exact += x;
  double ref = static_cast<double>(exact);
  EXPECT_NEAR(all.value(), ref, 1e-12 * std::fabs(ref) + 1e-9);
  EXPECT_NEAR(left.value(), ref, 1e-12 * std::fabs(ref) + 1e-9);
}

TEST(PairwiseSum, AgreesWithWideReference) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> xs(100000);
  boost::multiprecision::cpp_bin_float_100 exact = 0;
  for (auto& x : xs) {
    x = 1.0 / (1.0 + 1e6 * u(rng));
    exact += x;
  }
  double ref = static_cast<double>(exact);
  EXPECT_NEAR(zrace::pairwise_sum(xs), ref, 4e-16 * ref);
}

TEST(PairwiseSum, EmptyIsZero) { EXPECT_EQ(zrace::pairwise_sum({}), 0.0); }

TEST(DoubleDouble, TwoSumAndTwoProdAreExact) {
  auto s = zrace::two_sum(1.0, 1e-20);
  EXPECT_EQ(s.hi, 1.0);
  EXPECT_EQ(s.lo, 1e-20);
  double a = 1.0 + std::ldexp(1.0, -30);
  auto p = zrace::two_prod(a, a);
  boost::multiprecision::cpp_bin_float_100 exact = boost::multiprecision::cpp_bin_float_100(a) * a;
  EXPECT_EQ(static_cast<double>(exact - p.hi), p.lo);
}

TEST(DoubleDouble, DivisionCarriesExtraDigits) {
  auto q = zrace::dd_div({1.0, 0.0}, 3.0);
  boost::multiprecision::cpp_bin_float_100 third = boost::multiprecision::cpp_bin_float_100(1) / 3;
  boost::multiprecision::cpp_bin_float_100 got = boost::multiprecision::cpp_bin_float_100(q.hi) + q.lo;
  EXPECT_LT(static_cast<double>(abs(got - third)), 1e-30);
}

TEST(ParallelBlocks, CoversRangeExactlyOnceForAnyThreadCount) {
  for (unsigned threads : {1u, 2u, 3u, 8u}) {
    std::vector<int> hits(1001, 0);
    zrace::parallel_blocks(hits.size(), threads, [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) hits[i] += 1;
    });
    for (int h : hits) ASSERT_EQ(h, 1);
  }
}

TEST(ParallelBlocks, PropagatesExceptions) {
  EXPECT_THROW(zrace::parallel_blocks(100, 4,
                                      [](std::size_t lo, std::size_t) {
                                        if (lo == 0) throw std::runtime_error("boom");
                                      }),
               std::runtime_error);
}
