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
#include "ssmkit/block_model.hpp"
#include "ssmkit/hierarchical.hpp"
#include "ssmkit/linear_gaussian.hpp"
#include "ssmkit/model.hpp"

using namespace ssmkit;

namespace {

LinearGaussianModel<double> scalar_model(double a, double b, double q, double h, double r,
                                         double mu0, double var0) {
  return make_linear_gaussian_model<double>(
      Matrix::Constant(1, 1, a), Vector::Constant(1, b), Matrix::Constant(1, 1, q),
      Vector::Constant(1, mu0), Matrix::Constant(1, 1, var0), Matrix::Constant(1, 1, h),
      Matrix::Constant(1, 1, r));
}

// Dense-normal log-pdf via explicit inverse and determinant; shares nothing
// with the library's Cholesky route.
double dense_mvn_logpdf(const Vector& x, const Vector& mean, const Matrix& cov) {
  const Vector d = x - mean;
  return -0.5 * d.dot(cov.inverse() * d) - 0.5 * std::log(cov.determinant()) -
         0.5 * static_cast<double>(x.size()) * std::log(2.0 * kPi);
}

}  // namespace

TEST_CASE("noise-free identity dynamics keep the state constant") {
  auto model = scalar_model(1.0, 0.0, 0.0, 1.0, 0.1, 5.0, 0.0);
  Rng rng(1);
  const auto [states, observations] = sample_trajectory(rng, model, 10);
  REQUIRE(states.size() == 11);
  REQUIRE(observations.size() == 10);
  for (const auto& state : states) CHECK(state[0] == doctest::Approx(5.0).epsilon(1e-14));
}

TEST_CASE("trajectories are deterministic given the seed") {
  auto model = scalar_model(0.9, 0.1, 0.3, 1.0, 0.2, 0.0, 1.0);
  Rng rng_a(7);
  Rng rng_b(7);
  const auto run_a = sample_trajectory(rng_a, model, 25);
  const auto run_b = sample_trajectory(rng_b, model, 25);
  for (std::size_t t = 0; t < run_a.first.size(); ++t) {
    CHECK((run_a.first[t] - run_b.first[t]).cwiseAbs().maxCoeff() == 0.0);
  }
  for (std::size_t t = 0; t < run_a.second.size(); ++t) {
    CHECK((run_a.second[t] - run_b.second[t]).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("sampled first-step moments match closed-form propagation") {
  Matrix a(2, 2);
  a << 0.9, 0.2, -0.1, 0.7;
  Vector b(2);
  b << 0.5, -0.3;
  Matrix q(2, 2);
  q << 0.4, 0.1, 0.1, 0.3;
  Vector mu0(2);
  mu0 << 1.0, -1.0;
  Matrix sigma0(2, 2);
  sigma0 << 0.6, 0.2, 0.2, 0.5;
  auto model = make_linear_gaussian_model<double>(a, b, q, mu0, sigma0,
                                                  Matrix::Identity(2, 2),
                                                  Matrix::Identity(2, 2));

  const int num_draws = 10000;
  std::vector<double> first(num_draws), second(num_draws);
  Rng rng(11);
  for (int k = 0; k < num_draws; ++k) {
    const auto states = sample_trajectory(rng, model, 1).first;
    first[static_cast<std::size_t>(k)] = states[1][0];
    second[static_cast<std::size_t>(k)] = states[1][1];
  }
  const Vector expected_mean = a * mu0 + b;
  const Matrix expected_cov = a * sigma0 * a.transpose() + q;

  const auto m0 = oracles::moments(first);
  const auto m1 = oracles::moments(second);
  CHECK(std::abs(m0.mean - expected_mean[0]) < 3.0 * m0.standard_error);
  CHECK(std::abs(m1.mean - expected_mean[1]) < 3.0 * m1.standard_error);
  // variance of the sample variance ~ 2 sigma^4 / n for Gaussians
  const double var0_se = expected_cov(0, 0) * std::sqrt(2.0 / num_draws);
  CHECK(std::abs(m0.std_dev * m0.std_dev - expected_cov(0, 0)) < 3.0 * var0_se);
}

TEST_CASE("joint log-density of a standard-normal chain") {
  // T=1, all three factors standard normal at zero
  auto model = scalar_model(0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0);
  const std::vector<Vector> states{Vector::Zero(1), Vector::Zero(1)};
  const std::vector<Vector> observations{Vector::Zero(1)};
  const double expected = 3.0 * (-0.5 * std::log(2.0 * kPi));
  CHECK(joint_logdensity(model, states, observations) ==
        doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("joint log-density with no observations is the initial density") {
  auto model = scalar_model(0.9, 0.0, 0.5, 1.0, 0.5, 0.3, 2.0);
  const std::vector<Vector> states{Vector::Constant(1, 1.0)};
  const double expected = oracles::log_normal_density(1.0, 0.3, 2.0);
  CHECK(joint_logdensity(model, states, {}) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("impossible path propagates minus infinity without aborting") {
  auto model = scalar_model(1.0, 0.0, 0.0, 1.0, 1.0, 5.0, 0.0);
  // zero initial variance makes any other starting point impossible
  std::vector<Vector> states{Vector::Constant(1, 4.0), Vector::Constant(1, 4.0)};
  std::vector<Vector> observations{Vector::Constant(1, 4.0)};
  CHECK(std::isinf(joint_logdensity(model, states, observations)));
  CHECK(joint_logdensity(model, states, observations) < 0);
}

TEST_CASE("hierarchical joint density equals the flattened model") {
  Rng rng(3);
  const auto block = make_block_model(rng);
  const auto flattened = block.flattened();
  const auto hierarchical = block.hierarchical();

  Rng sim(5);
  const auto [states, observations] = sample_trajectory(sim, flattened, 6);
  std::vector<Vector> outer_states, inner_states;
  for (const auto& state : states) {
    outer_states.push_back(state.head(block.outer_dim));
    inner_states.push_back(state.tail(block.inner_dim));
  }
  const double flat = joint_logdensity(flattened, states, observations);
  const double assembled = joint_logdensity(hierarchical, outer_states, inner_states, observations);
  CHECK(flat == doctest::Approx(assembled).epsilon(1e-10));
}

TEST_CASE("linear-Gaussian transition density matches a dense-normal oracle") {
  Matrix a(2, 2);
  a << 0.8, 0.1, -0.2, 0.9;
  Vector b(2);
  b << 0.2, -0.1;
  Matrix q(2, 2);
  q << 0.5, 0.1, 0.1, 0.4;
  LinearGaussianDynamics<double> dynamics(a, b, q, Vector::Zero(2), Matrix::Identity(2, 2));

  Rng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    Vector x(2), next(2);
    for (int i = 0; i < 2; ++i) {
      x[i] = 3.0 * draw_normal(rng);
      next[i] = 3.0 * draw_normal(rng);
    }
    const double expected = dense_mvn_logpdf(next, a * x + b, q);
    CHECK(dynamics.logdensity_transition(1, x, next, {}) ==
          doctest::Approx(expected).epsilon(1e-10));
  }
}

TEST_CASE("transition density is finite at sampled states") {
  auto model = scalar_model(0.8, 0.1, 0.4, 1.0, 0.3, 0.0, 1.0);
  Rng rng(23);
  Vector state = Vector::Zero(1);
  for (int t = 1; t <= 100; ++t) {
    const Vector next = model.dynamics().sample_transition(rng, t, state, {});
    CHECK(std::isfinite(model.dynamics().logdensity_transition(t, state, next, {})));
    state = next;
  }
}

TEST_CASE("float and double instantiations agree to single precision") {
  MatrixX<float> af = MatrixX<float>::Constant(1, 1, 0.9f);
  LinearGaussianDynamics<float> dyn_f(af, VectorX<float>::Zero(1),
                                      MatrixX<float>::Constant(1, 1, 0.5f),
                                      VectorX<float>::Zero(1), MatrixX<float>::Identity(1, 1));
  LinearGaussianDynamics<double> dyn_d(Matrix::Constant(1, 1, 0.9), Vector::Zero(1),
                                       Matrix::Constant(1, 1, 0.5), Vector::Zero(1),
                                       Matrix::Identity(1, 1));
  Rng rng_f(9), rng_d(9);
  VectorX<float> xf = VectorX<float>::Constant(1, 0.3f);
  Vector xd = Vector::Constant(1, 0.3);
  for (int t = 1; t <= 20; ++t) {
    xf = dyn_f.sample_transition(rng_f, t, xf, {});
    xd = dyn_d.sample_transition(rng_d, t, xd, {});
    CHECK(std::abs(static_cast<double>(xf[0]) - xd[0]) < 1e-4 * (1.0 + std::abs(xd[0])));
  }
  const float ld_f = dyn_f.logdensity_transition(1, VectorX<float>::Zero(1), xf, {});
  const double ld_d = dyn_d.logdensity_transition(1, Vector::Zero(1), xd, {});
  CHECK(std::abs(static_cast<double>(ld_f) - ld_d) < 1e-3 * (1.0 + std::abs(ld_d)));
}

TEST_CASE("dimension mismatch between dynamics and observation fails at construction") {
  auto dynamics = std::make_shared<const LinearGaussianDynamics<double>>(
      Matrix::Identity(2, 2), Vector::Zero(2), Matrix::Identity(2, 2), Vector::Zero(2),
      Matrix::Identity(2, 2));
  auto observation = std::make_shared<const LinearGaussianObservation<double>>(
      Matrix::Identity(3, 3), Matrix::Identity(3, 3));
  CHECK_THROWS_AS(StateSpaceModel<double>(dynamics, observation), DimensionError);
}

TEST_CASE("covariances failing the PSD tolerance are rejected") {
  Matrix bad(2, 2);
  bad << 1.0, 0.0, 0.0, -0.5;
  CHECK_THROWS_AS(LinearGaussianDynamics<double>(Matrix::Identity(2, 2), Vector::Zero(2), bad,
                                                 Vector::Zero(2), Matrix::Identity(2, 2)),
                  NotPositiveSemiDefiniteError);
  // slight asymmetry within tolerance is symmetrised, not rejected
  Matrix nearly(2, 2);
  nearly << 1.0, 1e-12, -1e-12, 1.0;
  CHECK_NOTHROW(LinearGaussianDynamics<double>(Matrix::Identity(2, 2), Vector::Zero(2), nearly,
                                               Vector::Zero(2), Matrix::Identity(2, 2)));
}

TEST_CASE("contexts must match the trajectory length") {
  auto model = scalar_model(0.9, 0.0, 0.5, 1.0, 0.5, 0.0, 1.0);
  Rng rng(1);
  std::vector<Context> contexts(3);
  CHECK_THROWS_AS(sample_trajectory(rng, model, 5, contexts), DimensionError);
}
