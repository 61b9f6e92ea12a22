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

#include "oracles.hpp"
#include "ssmkit/filter.hpp"
#include "ssmkit/kalman.hpp"
#include "ssmkit/particle.hpp"

using namespace ssmkit;

namespace {

LinearGaussianModel<double> scalar_model(double a, double b, double q, double h, double r,
                                         double mu0, double var0) {
  return make_linear_gaussian_model<double>(
      Matrix::Constant(1, 1, a), Vector::Constant(1, b), Matrix::Constant(1, 1, q),
      Vector::Constant(1, mu0), Matrix::Constant(1, 1, var0), Matrix::Constant(1, 1, h),
      Matrix::Constant(1, 1, r));
}

ParticleContainer<Vector, double> container_with(std::vector<double> values,
                                                 std::vector<double> log_weights) {
  ParticleContainer<Vector, double> container;
  const int n = static_cast<int>(values.size());
  container.filtered.particles.reserve(values.size());
  for (const double v : values) container.filtered.particles.push_back(Vector::Constant(1, v));
  container.filtered.log_weights = Eigen::Map<Vector>(log_weights.data(), n);
  container.proposed = container.filtered;
  container.ancestors.resize(values.size());
  return container;
}

}  // namespace

TEST_CASE("deterministic dynamics propagate particles through the transition map") {
  auto model = scalar_model(2.0, 1.0, 0.0, 1.0, 1.0, 0.0, 1.0);
  StateSpaceModel<double> generic = model;
  BootstrapFilter alg{4, Resampler{ResamplingScheme::kSystematic, 0.5}};
  auto container = container_with({1.0, 2.0, 3.0, 4.0},
                                  std::vector<double>(4, -std::log(4.0)));
  Rng rng(1);
  container = predict(rng, generic, alg, 1, std::move(container));
  // uniform weights at threshold 0.5: no resampling, identity ancestors
  for (int i = 0; i < 4; ++i) CHECK(container.ancestors[static_cast<std::size_t>(i)] == i);
  for (int i = 0; i < 4; ++i) {
    CHECK(container.proposed.particles[static_cast<std::size_t>(i)][0] ==
          doctest::Approx(2.0 * (i + 1) + 1.0).epsilon(1e-14));
  }
}

TEST_CASE("one-hot weights make every proposal descend from the survivor") {
  auto model = scalar_model(1.0, 0.0, 0.1, 1.0, 1.0, 0.0, 1.0);
  StateSpaceModel<double> generic = model;
  BootstrapFilter alg{4, Resampler{ResamplingScheme::kSystematic, 0.5}};
  const double neg_inf = -std::numeric_limits<double>::infinity();
  auto container = container_with({1.0, 2.0, 3.0, 4.0}, {neg_inf, neg_inf, -0.5, neg_inf});
  Rng rng(2);
  container = predict(rng, generic, alg, 1, std::move(container));
  for (const int a : container.ancestors) CHECK(a == 2);
  for (int i = 0; i < 4; ++i) {
    CHECK(container.proposed.log_weights[i] == doctest::Approx(-std::log(4.0)));
  }
}

TEST_CASE("proposal mean matches the Kalman prediction") {
  auto model = scalar_model(0.9, 0.5, 0.4, 1.0, 0.3, 0.2, 1.0);
  StateSpaceModel<double> generic = model;
  const int n = 100000;
  BootstrapFilter alg{n, Resampler{ResamplingScheme::kSystematic, 0.5}};
  Rng rng(3);
  auto container = initialise(rng, generic, alg);
  container = predict(rng, generic, alg, 1, std::move(container));

  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(n));
  for (const auto& particle : container.proposed.particles) values.push_back(particle[0]);
  const auto m = oracles::moments(values);

  const auto reference = kalman_predict(
      GaussianBelief<double>{Vector::Constant(1, 0.2), Matrix::Identity(1, 1)}, 1,
      model.dynamics());
  CHECK(std::abs(m.mean - reference.mean[0]) < 3.0 * m.standard_error);
}

TEST_CASE("a constant likelihood shifts the increment and keeps the ranking") {
  // observation density independent of the state: H = 0, so every particle
  // sees N(y; 0, r)
  auto model = scalar_model(1.0, 0.0, 0.1, 0.0, 0.5, 0.0, 1.0);
  StateSpaceModel<double> generic = model;
  BootstrapFilter alg{3, Resampler{}};
  auto container = container_with({1.0, 2.0, 3.0}, {-0.1, -1.0, -2.5});
  const Vector y = Vector::Constant(1, 0.7);
  const auto [updated, increment] = update(generic, alg, 1, std::move(container), y);
  const double expected = oracles::log_normal_density(0.7, 0.0, 0.5);
  CHECK(increment == doctest::Approx(expected).epsilon(1e-12));
  CHECK(updated.filtered.log_weights[0] > updated.filtered.log_weights[1]);
  CHECK(updated.filtered.log_weights[1] > updated.filtered.log_weights[2]);
}

TEST_CASE("two particles, one impossible: one-hot posterior and log(1/2) increment") {
  auto model = scalar_model(1.0, 0.0, 0.1, 1.0, 1e-12, 0.0, 1.0);
  StateSpaceModel<double> generic = model;
  BootstrapFilter alg{2, Resampler{}};
  auto container = container_with({0.0, 1000.0}, std::vector<double>(2, -std::log(2.0)));
  const Vector y = Vector::Constant(1, 0.0);
  const auto [updated, increment] = update(generic, alg, 1, std::move(container), y);
  const Vector weights = normalized_weights(updated.filtered.log_weights);
  CHECK(weights[0] == doctest::Approx(1.0).epsilon(1e-9));
  // increment = log(0.5) + log N(0; 0, r); the constant density factors out
  const double expected = std::log(0.5) + oracles::log_normal_density(0.0, 0.0, 1e-12);
  CHECK(increment == doctest::Approx(expected).epsilon(1e-9));
}

TEST_CASE("bootstrap evidence sits near the Kalman value") {
  auto model = scalar_model(0.9, 0.1, 0.5, 1.0, 0.4, 0.0, 1.0);
  Rng rng(5);
  const auto observations = sample_trajectory(rng, model, 50).second;
  const double kalman_evidence = filter(rng, model, KalmanFilter{}, observations).second;

  StateSpaceModel<double> generic = model;
  Rng pf_rng(99);
  const double particle_evidence =
      filter(pf_rng, generic, BootstrapFilter{1 << 14, Resampler{}}, observations).second;
  CHECK(std::abs(particle_evidence - kalman_evidence) < 0.15);
}

TEST_CASE("step composes predict and update") {
  auto model = scalar_model(0.8, 0.0, 0.3, 1.0, 0.2, 0.0, 1.0);
  StateSpaceModel<double> generic = model;
  BootstrapFilter alg{64, Resampler{}};
  const Vector y = Vector::Constant(1, 0.4);

  Rng rng_a(7);
  auto state_a = initialise(rng_a, generic, alg);
  const auto via_step = step(rng_a, generic, alg, 1, std::move(state_a), y);

  Rng rng_b(7);
  auto state_b = initialise(rng_b, generic, alg);
  auto proposed = predict(rng_b, generic, alg, 1, std::move(state_b));
  const auto direct = update(generic, alg, 1, std::move(proposed), y);

  CHECK(via_step.second == direct.second);
  for (int i = 0; i < 64; ++i) {
    CHECK(via_step.first.filtered.particles[static_cast<std::size_t>(i)][0] ==
          direct.first.filtered.particles[static_cast<std::size_t>(i)][0]);
  }
}

TEST_CASE("particle filtering is deterministic given the seed") {
  auto model = scalar_model(0.9, 0.0, 0.5, 1.0, 0.4, 0.0, 1.0);
  StateSpaceModel<double> generic = model;
  Rng data_rng(11);
  const auto observations = sample_trajectory(data_rng, model, 20).second;
  Rng rng_a(13), rng_b(13);
  const BootstrapFilter alg{256, Resampler{}};
  CHECK(filter(rng_a, generic, alg, observations).second ==
        filter(rng_b, generic, alg, observations).second);
}

TEST_CASE("data-parallel execution reproduces the serial results bitwise") {
  auto model = scalar_model(0.9, 0.0, 0.5, 1.0, 0.4, 0.0, 1.0);
  StateSpaceModel<double> generic = model;
  Rng data_rng(17);
  const auto observations = sample_trajectory(data_rng, model, 30).second;
  Rng rng_serial(23), rng_parallel(23);
  const double serial =
      filter(rng_serial, generic, BootstrapFilter{1024, Resampler{}, 1}, observations).second;
  const double parallel =
      filter(rng_parallel, generic, BootstrapFilter{1024, Resampler{}, 4}, observations).second;
  CHECK(serial == parallel);
}

TEST_CASE("stepwise increments sum to the filter total") {
  auto model = scalar_model(0.9, 0.0, 0.5, 1.0, 0.4, 0.0, 1.0);
  StateSpaceModel<double> generic = model;
  Rng data_rng(29);
  const auto observations = sample_trajectory(data_rng, model, 15).second;
  const BootstrapFilter alg{128, Resampler{}};

  Rng rng_total(31);
  const double total = filter(rng_total, generic, alg, observations).second;

  Rng rng_steps(31);
  auto state = initialise(rng_steps, generic, alg);
  double sum = 0.0;
  for (int t = 1; t <= 15; ++t) {
    auto [next, increment] = step(rng_steps, generic, alg, t, std::move(state),
                                  observations[static_cast<std::size_t>(t - 1)]);
    state = std::move(next);
    sum += increment;
  }
  CHECK(sum == doctest::Approx(total).epsilon(1e-13));
}

TEST_CASE("a single-particle filter reproduces one importance-weighted trajectory") {
  auto model = scalar_model(0.8, 0.2, 0.4, 1.0, 0.3, 0.0, 1.0);
  StateSpaceModel<double> generic = model;
  Rng data_rng(37);
  const auto observations = sample_trajectory(data_rng, model, 12).second;

  const BootstrapFilter alg{1, Resampler{}};
  std::vector<Vector> path;
  Rng rng(41);
  auto observer = [&path](int, const ParticleContainer<Vector, double>& container) {
    path.push_back(container.filtered.particles[0]);
  };
  const double total = filter(rng, generic, alg, observations, {}, observer).second;

  double expected = 0.0;
  for (int t = 1; t <= 12; ++t) {
    expected += model.observation().logdensity_observation(
        t, path[static_cast<std::size_t>(t)], observations[static_cast<std::size_t>(t - 1)], {});
  }
  CHECK(total == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("evidence variance shrinks as the particle count grows") {
  auto model = scalar_model(0.9, 0.0, 0.5, 1.0, 0.4, 0.0, 1.0);
  StateSpaceModel<double> generic = model;
  Rng data_rng(43);
  const auto observations = sample_trajectory(data_rng, model, 30).second;

  std::vector<double> spreads;
  for (const int n : {1 << 7, 1 << 9, 1 << 11}) {
    std::vector<double> estimates;
    for (int seed = 0; seed < 100; ++seed) {
      Rng rng(mix64(1000, static_cast<std::uint64_t>(seed)));
      estimates.push_back(filter(rng, generic, BootstrapFilter{n, Resampler{}},
                                 observations).second);
    }
    spreads.push_back(oracles::moments(estimates).std_dev);
  }
  CHECK(spreads[0] > spreads[1]);
  CHECK(spreads[1] > spreads[2]);
}

TEST_CASE("adding a constant to all weights leaves later increments unchanged") {
  auto model = scalar_model(1.0, 0.0, 0.1, 1.0, 0.5, 0.0, 1.0);
  StateSpaceModel<double> generic = model;
  BootstrapFilter alg{3, Resampler{}};
  const Vector y = Vector::Constant(1, 0.3);

  auto base = container_with({0.5, 1.0, 1.5}, {-0.2, -0.9, -1.7});
  auto shifted = container_with({0.5, 1.0, 1.5}, {-0.2 + 50.0, -0.9 + 50.0, -1.7 + 50.0});
  const double inc_base = update(generic, alg, 1, std::move(base), y).second;
  const double inc_shifted = update(generic, alg, 1, std::move(shifted), y).second;
  CHECK(inc_base == doctest::Approx(inc_shifted).epsilon(1e-12));
}

TEST_CASE("an all-impossible update names the failing step") {
  auto model = scalar_model(1.0, 0.0, 0.1, 1.0, 0.5, 0.0, 1.0);
  StateSpaceModel<double> generic = model;
  BootstrapFilter alg{2, Resampler{}};
  // squared residuals overflow to +inf, so both densities are exactly zero
  auto container = container_with({1e160, -1e160}, std::vector<double>(2, -std::log(2.0)));
  const Vector y = Vector::Constant(1, 0.0);
  try {
    update(generic, alg, 7, std::move(container), y);
    FAIL("expected DegenerateEnsembleError");
  } catch (const DegenerateEnsembleError& err) {
    CHECK(err.step() == 7);
  }
}
