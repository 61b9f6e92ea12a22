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
#include "ssmkit/hmm.hpp"

using namespace ssmkit;

namespace {

// 3-state chain with Gaussian emissions around per-state means.
DiscreteModel<double> three_state_model(const Matrix& transition, const Vector& means,
                                        double obs_var) {
  DiscreteModel<double> model;
  model.initial_log_probabilities = Vector::Constant(3, std::log(1.0 / 3.0));
  model.transition = [transition](int, const Context&) { return transition; };
  model.emission_logdensities = [means, obs_var](int, const Vector& y, const Context&) {
    Vector out(means.size());
    for (Eigen::Index k = 0; k < means.size(); ++k) {
      out[k] = oracles::log_normal_density(y[0], means[k], obs_var);
    }
    return out;
  };
  return model;
}

}  // namespace

TEST_CASE("identity transition makes predict a no-op") {
  DiscreteBelief<double> belief{Vector(3)};
  belief.log_probabilities << std::log(0.2), std::log(0.5), std::log(0.3);
  const auto predicted = forward_predict(belief, 1, Matrix::Identity(3, 3));
  CHECK((predicted.log_probabilities - belief.log_probabilities).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("two-state update from a uniform prior") {
  DiscreteBelief<double> belief{Vector::Constant(2, std::log(0.5))};
  Vector emissions(2);
  emissions << std::log(0.8), std::log(0.2);
  const auto [posterior, increment] = forward_update(belief, emissions);
  CHECK(std::exp(posterior.log_probabilities[0]) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(std::exp(posterior.log_probabilities[1]) == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(increment == doctest::Approx(std::log(0.5)).epsilon(1e-12));
}

TEST_CASE("posterior stays normalised after every update") {
  Matrix transition(2, 2);
  transition << 0.9, 0.1, 0.3, 0.7;
  DiscreteBelief<double> belief{Vector::Constant(2, std::log(0.5))};
  Rng rng(3);
  for (int t = 1; t <= 50; ++t) {
    belief = forward_predict(belief, t, transition);
    Vector emissions(2);
    emissions << oracles::log_normal_density(draw_normal(rng), 0.0, 1.0),
        oracles::log_normal_density(draw_normal(rng), 1.0, 1.0);
    belief = forward_update(belief, emissions).first;
    REQUIRE(std::abs(logsumexp(belief.log_probabilities)) < 1e-10);
  }
}

TEST_CASE("forward log-evidence equals the exhaustive path sum") {
  Rng rng(5);
  Matrix transition(3, 3);
  transition << 0.6, 0.3, 0.1, 0.2, 0.5, 0.3, 0.25, 0.25, 0.5;
  Vector means(3);
  means << -1.0, 0.5, 2.0;
  const double obs_var = 0.7;
  auto model = three_state_model(transition, means, obs_var);

  std::vector<Vector> observations;
  for (int t = 0; t < 5; ++t) observations.push_back(Vector::Constant(1, 2.0 * draw_normal(rng)));

  const auto [belief, log_evidence] = filter(rng, model, ForwardAlgorithm{}, observations);

  std::vector<std::vector<double>> likelihoods;
  for (const auto& y : observations) {
    std::vector<double> row(3);
    for (int k = 0; k < 3; ++k) {
      row[static_cast<std::size_t>(k)] =
          std::exp(oracles::log_normal_density(y[0], means[k], obs_var));
    }
    likelihoods.push_back(std::move(row));
  }
  const double reference =
      oracles::path_sum_evidence({1.0 / 3, 1.0 / 3, 1.0 / 3}, transition, likelihoods);
  CHECK(log_evidence == doctest::Approx(reference).epsilon(1e-10));
}

TEST_CASE("impossible observations raise an error") {
  DiscreteBelief<double> belief{Vector::Constant(2, std::log(0.5))};
  Vector emissions = Vector::Constant(2, -std::numeric_limits<double>::infinity());
  CHECK_THROWS_WITH_AS(forward_update(belief, emissions),
                       "observation impossible under model: all emission densities are zero",
                       Error);
}

TEST_CASE("non-stochastic transition rows are rejected") {
  Matrix bad(2, 2);
  bad << 0.9, 0.2, 0.3, 0.7;
  DiscreteBelief<double> belief{Vector::Constant(2, std::log(0.5))};
  CHECK_THROWS_AS(forward_predict(belief, 1, bad), Error);
}

TEST_CASE("stepwise increments sum to the filter total") {
  Matrix transition(3, 3);
  transition << 0.7, 0.2, 0.1, 0.1, 0.8, 0.1, 0.3, 0.3, 0.4;
  Vector means(3);
  means << 0.0, 1.0, -1.0;
  auto model = three_state_model(transition, means, 0.5);

  Rng rng(9);
  std::vector<Vector> observations;
  for (int t = 0; t < 10; ++t) observations.push_back(Vector::Constant(1, draw_normal(rng)));

  Rng rng_filter(11);
  const double total = filter(rng_filter, model, ForwardAlgorithm{}, observations).second;

  Rng rng_steps(11);
  auto state = initialise(rng_steps, model, ForwardAlgorithm{});
  double sum = 0.0;
  for (int t = 1; t <= 10; ++t) {
    auto [next, increment] = step(rng_steps, model, ForwardAlgorithm{}, t, std::move(state),
                                  observations[static_cast<std::size_t>(t - 1)]);
    state = std::move(next);
    sum += increment;
  }
  CHECK(sum == doctest::Approx(total).epsilon(1e-14));
}
