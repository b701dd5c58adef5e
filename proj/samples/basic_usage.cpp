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

// Loads a zero catalog, prints the closed-form constants next to their
// partial sums, then runs the fast eta2 profile and a short prime race.
#include <cstdio>

#include <zrace/zrace.hpp>

int main(int argc, char** argv) {
  const char* path = argc > 1 ? argv[1] : ZRACE_DEFAULT_ZEROS;
  zrace::ZeroCatalog cat = zrace::load_zeros_file(path);
  std::printf("catalog: %zu zeros up to %.6f\n", cat.size(), cat.max_ordinate());

  zrace::ConstantSet c = zrace::constants();
  auto tail = zrace::zero_sum_tail(cat, zrace::ZeroSummand::inv_q);
  auto sums = zrace::partial_sums(cat, cat.max_ordinate());
  std::printf("w = %.12f (closed form), %.12f (zero sum + tail)\n", c.w, 2.0 * (sums.inv_q + tail.estimate));

  zrace::Eta2Result r = zrace::eta2(zrace::fast_profile(), cat);
  std::printf("eta2 = %.6f +- %.2e\n", r.value, r.rigorous_halfwidth);

  zrace::PrimeSieve sieve(1000000);
  zrace::MertensConstants m = zrace::mertens_constants(1000000);
  auto s = sieve.at(1e6);
  std::printf("E^pi(1e6) = %.6f, E^pi_r(1e6) = %.6f\n", zrace::normalized_error(zrace::PrimeFunction::pi, s, m),
              zrace::normalized_error(zrace::PrimeFunction::pi_r, s, m));
  return 0;
}
