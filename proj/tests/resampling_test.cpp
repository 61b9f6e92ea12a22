// Copyright 2026 The ssmkit Authors
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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "oracles.hpp"
#include "ssmkit/resampling.hpp"

using namespace ssmkit;

namespace {

std::vector<int> offspring_counts(const std::vector<int>& ancestors, int num_particles) {
  std::vector<int> counts(static_cast<std::size_t>(num_particles), 0);
  for (const int a : ancestors) ++counts[static_cast<std::size_t>(a)];
  return counts;
}

}  // namespace

TEST_CASE("effective sample size of uniform weights is N") {
  CHECK(effective_sample_size<double>(Vector::Constant(4, -std::log(4.0))) ==
        doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("effective sample size of one-hot weights is 1") {
  Vector lw = Vector::Constant(5, -std::numeric_limits<double>::infinity());
  lw[2] = 0.0;
  CHECK(effective_sample_size<double>(lw) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("effective sample size of (1/2, 1/4, 1/4) is 8/3") {
  Vector lw(3);
  lw << std::log(0.5), std::log(0.25), std::log(0.25);
  CHECK(effective_sample_size<double>(lw) == doctest::Approx(8.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("all-zero weights raise a degenerate-ensemble error") {
  const Vector lw = Vector::Constant(3, -std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(effective_sample_size<double>(lw), DegenerateEnsembleError);
  Rng rng(1);
  CHECK_THROWS_AS(resample_systematic<double>(lw, 3, rng), DegenerateEnsembleError);
}

TEST_CASE("a one-hot weight sends every ancestor to that index") {
  Vector lw = Vector::Constant(6, -std::numeric_limits<double>::infinity());
  lw[3] = -1.2;
  Rng rng(2);
  for (const int a : resample_multinomial<double>(lw, 6, rng)) CHECK(a == 3);
  for (const int a : resample_systematic<double>(lw, 6, rng)) CHECK(a == 3);
}

TEST_CASE("systematic resampling of uniform weights is a permutation-free copy") {
  const int n = 16;
  const Vector lw = Vector::Constant(n, -std::log(double(n)));
  Rng rng(3);
  const auto ancestors = resample_systematic<double>(lw, n, rng);
  auto counts = offspring_counts(ancestors, n);
  for (const int c : counts) CHECK(c == 1);
}

TEST_CASE("systematic offspring counts for (0.7, 0.3) into 10 slots are (7, 3)") {
  Vector lw(2);
  lw << std::log(0.7), std::log(0.3);
  // midpoint offset grid at resolution 1e-4 over [0, 1)
  for (int k = 0; k < 10000; ++k) {
    const double offset = (k + 0.5) * 1e-4;
    const auto ancestors = resample_systematic_with_offset<double>(lw, 10, offset);
    const auto counts = offspring_counts(ancestors, 2);
    REQUIRE(counts[0] == 7);
    REQUIRE(counts[1] == 3);
  }
}

TEST_CASE("systematic counts stay within one of their expectation and come out sorted") {
  Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 32;
    Vector lw(n);
    for (int i = 0; i < n; ++i) lw[i] = 2.0 * draw_normal(rng);
    const auto ancestors = resample_systematic<double>(lw, n, rng);
    CHECK(std::is_sorted(ancestors.begin(), ancestors.end()));
    const auto counts = offspring_counts(ancestors, n);
    const Vector weights = normalized_weights<double>(lw);
    for (int i = 0; i < n; ++i) {
      const double expected = n * weights[i];
      CHECK(counts[static_cast<std::size_t>(i)] >= static_cast<int>(std::floor(expected)) - 0);
      CHECK(counts[static_cast<std::size_t>(i)] <= static_cast<int>(std::ceil(expected)));
    }
  }
}

TEST_CASE("both schemes are unbiased: mean offspring matches N times the weight") {
  const int n = 8;
  Vector lw(n);
  Rng weight_rng(7);
  for (int i = 0; i < n; ++i) lw[i] = draw_normal(weight_rng);
  const Vector weights = normalized_weights<double>(lw);

  const int num_draws = 100000;
  for (const auto scheme : {ResamplingScheme::kMultinomial, ResamplingScheme::kSystematic}) {
    Rng rng(11);
    std::vector<std::vector<double>> counts(static_cast<std::size_t>(n));
    for (int draw = 0; draw < num_draws; ++draw) {
      const auto ancestors = resample(Resampler{scheme, 1.0}, lw, n, rng);
      const auto c = offspring_counts(ancestors, n);
      for (int i = 0; i < n; ++i) {
        counts[static_cast<std::size_t>(i)].push_back(static_cast<double>(c[static_cast<std::size_t>(i)]));
      }
    }
    for (int i = 0; i < n; ++i) {
      const auto m = oracles::moments(counts[static_cast<std::size_t>(i)]);
      const double expected = n * weights[i];
      CHECK(std::abs(m.mean - expected) < 3.0 * std::max(m.standard_error, 1e-6));
    }
  }
}

TEST_CASE("log-weight shift invariance") {
  const int n = 12;
  Vector lw(n);
  Rng weight_rng(13);
  for (int i = 0; i < n; ++i) lw[i] = draw_normal(weight_rng);
  const Vector shifted = (lw.array() + 123.456).matrix();

  CHECK(effective_sample_size<double>(lw) ==
        doctest::Approx(effective_sample_size<double>(shifted)).epsilon(1e-12));

  Rng rng_a(17), rng_b(17);
  const auto anc_a = resample_systematic<double>(lw, n, rng_a);
  const auto anc_b = resample_systematic<double>(shifted, n, rng_b);
  CHECK(anc_a == anc_b);

  Rng rng_c(19), rng_d(19);
  const auto anc_c = resample_multinomial<double>(lw, n, rng_c);
  const auto anc_d = resample_multinomial<double>(shifted, n, rng_d);
  CHECK(anc_c == anc_d);
}

TEST_CASE("the ESS threshold policy treats 1 as always-resample") {
  Resampler always{ResamplingScheme::kSystematic, 1.0};
  CHECK(always.triggers(1024.0, 1024));
  Resampler half{ResamplingScheme::kSystematic, 0.5};
  CHECK_FALSE(half.triggers(1024.0, 1024));
  CHECK(half.triggers(511.0, 1024));
  Resampler bad{ResamplingScheme::kSystematic, 1.5};
  CHECK_THROWS_AS(bad.triggers(10.0, 10), Error);
}
