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

using namespace ssmkit;

namespace {

LinearGaussianModel<double> scalar_model(const oracles::ScalarModel& m) {
  return make_linear_gaussian_model<double>(
      Matrix::Constant(1, 1, m.transition), Vector::Constant(1, m.offset),
      Matrix::Constant(1, 1, m.noise_var), Vector::Constant(1, m.initial_mean),
      Matrix::Constant(1, 1, m.initial_var), Matrix::Constant(1, 1, m.observation),
      Matrix::Constant(1, 1, m.obs_noise_var));
}

}  // namespace

TEST_CASE("identity dynamics leave the belief unchanged") {
  LinearGaussianDynamics<double> dynamics(Matrix::Identity(2, 2), Vector::Zero(2),
                                          Matrix::Zero(2, 2), Vector::Zero(2),
                                          Matrix::Identity(2, 2));
  GaussianBelief<double> belief{Vector::Constant(2, 1.5), 0.7 * Matrix::Identity(2, 2)};
  const auto predicted = kalman_predict(belief, 1, dynamics);
  CHECK((predicted.mean - belief.mean).cwiseAbs().maxCoeff() == 0.0);
  CHECK((predicted.covariance - belief.covariance).cwiseAbs().maxCoeff() <= 1e-15);
}

TEST_CASE("scalar moment propagation: N(0,1) through (2, 1, 3) gives N(1, 7)") {
  LinearGaussianDynamics<double> dynamics(Matrix::Constant(1, 1, 2.0), Vector::Constant(1, 1.0),
                                          Matrix::Constant(1, 1, 3.0), Vector::Zero(1),
                                          Matrix::Identity(1, 1));
  GaussianBelief<double> belief{Vector::Zero(1), Matrix::Identity(1, 1)};
  const auto predicted = kalman_predict(belief, 1, dynamics);
  CHECK(predicted.mean[0] == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(predicted.covariance(0, 0) == doctest::Approx(7.0).epsilon(1e-14));
}

TEST_CASE("predicted moments match a Monte-Carlo push-forward") {
  Matrix a(2, 2);
  a << 0.6, 0.3, -0.2, 0.8;
  Vector b(2);
  b << 0.1, 0.4;
  Matrix q(2, 2);
  q << 0.3, 0.05, 0.05, 0.2;
  LinearGaussianDynamics<double> dynamics(a, b, q, Vector::Zero(2), Matrix::Identity(2, 2));
  Vector mean(2);
  mean << 0.7, -0.4;
  Matrix cov(2, 2);
  cov << 0.5, 0.1, 0.1, 0.6;
  const auto predicted = kalman_predict(GaussianBelief<double>{mean, cov}, 1, dynamics);

  const int num_draws = 1000000;
  const Matrix cov_sqrt = psd_sqrt<double>(cov);
  Rng rng(31);
  std::vector<double> first(num_draws);
  for (int k = 0; k < num_draws; ++k) {
    Vector z(2);
    z << draw_normal(rng), draw_normal(rng);
    const Vector x = mean + cov_sqrt * z;
    first[static_cast<std::size_t>(k)] = (dynamics.sample_transition(rng, 1, x, {}))[0];
  }
  const auto m = oracles::moments(first);
  CHECK(std::abs(m.mean - predicted.mean[0]) < 3.0 * m.standard_error);
}

TEST_CASE("an uninformative observation leaves the posterior at the prior") {
  LinearGaussianObservation<double> obs(Matrix::Identity(2, 2), 1e12 * Matrix::Identity(2, 2));
  GaussianBelief<double> belief{Vector::Constant(2, 0.5), Matrix::Identity(2, 2)};
  Vector y(2);
  y << 3.0, -2.0;
  const auto [posterior, increment] = kalman_update(belief, 1, obs, y);
  CHECK(posterior.mean[0] == doctest::Approx(belief.mean[0]).epsilon(1e-4));
  CHECK(posterior.covariance(0, 0) == doctest::Approx(1.0).epsilon(1e-4));
  // increment ~ log N(y; mean, R) since S ~= R
  double expected = 0.0;
  for (int i = 0; i < 2; ++i) {
    expected += oracles::log_normal_density(y[i], belief.mean[i], 1e12);
  }
  CHECK(increment == doctest::Approx(expected).epsilon(1e-4));
}

TEST_CASE("scalar conjugate update: prior N(0,1), unit noise, y = 2") {
  LinearGaussianObservation<double> obs(Matrix::Identity(1, 1), Matrix::Identity(1, 1));
  GaussianBelief<double> belief{Vector::Zero(1), Matrix::Identity(1, 1)};
  const auto [posterior, increment] = kalman_update(belief, 1, obs, Vector::Constant(1, 2.0));
  CHECK(posterior.mean[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(posterior.covariance(0, 0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(increment == doctest::Approx(oracles::log_normal_density(2.0, 0.0, 2.0)).epsilon(1e-12));
}

TEST_CASE("filter log-evidence matches grid quadrature") {
  oracles::ScalarModel m;
  m.transition = 0.9;
  m.offset = 0.3;
  m.noise_var = 0.5;
  m.observation = 1.2;
  m.obs_noise_var = 0.4;
  m.initial_mean = 0.5;
  m.initial_var = 1.0;
  auto model = scalar_model(m);

  Rng rng(41);
  const auto observations = sample_trajectory(rng, model, 20).second;
  const auto [state, log_evidence] = filter(rng, model, KalmanFilter{}, observations);

  std::vector<double> flat;
  for (const auto& y : observations) flat.push_back(y[0]);
  const double reference = oracles::grid_evidence(m, flat);
  CHECK(log_evidence == doctest::Approx(reference).epsilon(1e-6));
}

TEST_CASE("filtered moments agree with the information-filter formulation") {
  Rng rng(47);
  Matrix a(2, 2);
  a << 0.7, 0.2, -0.1, 0.6;
  Vector b(2);
  b << 0.3, -0.2;
  Matrix q(2, 2);
  q << 0.4, 0.1, 0.1, 0.5;
  Matrix h(2, 2);
  h << 1.0, 0.2, 0.0, 0.9;
  Matrix r(2, 2);
  r << 0.3, 0.05, 0.05, 0.4;
  Vector mu0(2);
  mu0 << 0.2, -0.5;
  Matrix sigma0 = Matrix::Identity(2, 2);
  auto model = make_linear_gaussian_model<double>(a, b, q, mu0, sigma0, h, r);

  const auto observations = sample_trajectory(rng, model, 15).second;
  const auto [belief, log_evidence] = filter(rng, model, KalmanFilter{}, observations);
  const auto reference = oracles::information_filter(a, b, q, h, r, mu0, sigma0, observations);

  CHECK((belief.mean - reference.mean).cwiseAbs().maxCoeff() < 1e-8);
  CHECK((belief.covariance - reference.covariance).cwiseAbs().maxCoeff() < 1e-8);
  CHECK(log_evidence == doctest::Approx(reference.log_evidence).epsilon(1e-8));
}

TEST_CASE("Joseph-form updates keep the covariance symmetric over long runs") {
  Rng rng(53);
  Matrix a(3, 3);
  a << 0.8, 0.1, 0.0, -0.1, 0.7, 0.1, 0.0, 0.2, 0.6;
  Matrix q = 0.2 * Matrix::Identity(3, 3);
  Matrix h(1, 3);
  h << 1.0, 0.5, -0.5;
  Matrix r = Matrix::Constant(1, 1, 0.3);
  auto model = make_linear_gaussian_model<double>(a, Vector::Zero(3), q, Vector::Zero(3),
                                                  Matrix::Identity(3, 3), h, r);
  auto belief = initialise(rng, model, KalmanFilter{});
  for (int t = 1; t <= 1000; ++t) {
    belief = predict(rng, model, KalmanFilter{}, t, std::move(belief));
    const Vector y = Vector::Constant(1, std::sin(0.1 * t));
    belief = update(model, KalmanFilter{}, t, std::move(belief), y).first;
    const double asymmetry = (belief.covariance - belief.covariance.transpose())
                                 .cwiseAbs()
                                 .maxCoeff();
    REQUIRE(asymmetry < 1e-12);
  }
}

TEST_CASE("a singular innovation covariance is reported") {
  // the observation covariance contract already rejects a zero R at the API
  LinearGaussianObservation<double> obs(
      MatrixCoefficient<double>([](int, const Context&) { return Matrix::Identity(2, 2); }),
      MatrixCoefficient<double>([](int, const Context&) { return Matrix::Zero(2, 2); }), 2, 2);
  GaussianBelief<double> belief{Vector::Zero(2), Matrix::Zero(2, 2)};
  CHECK_THROWS_AS(kalman_update(belief, 1, obs, Vector::Zero(2)),
                  NotPositiveSemiDefiniteError);
  // and the factorisation itself gives up after one jitter retry
  Matrix singular(2, 2);
  singular << 1.0, 1.0, 1.0, 1.0;
  singular(1, 1) = 1.0 - 1e-3;  // indefinite enough that jitter cannot save it
  singular(0, 1) = 2.0;
  singular(1, 0) = 2.0;
  CHECK_THROWS_AS(detail::cholesky_with_jitter<double>(singular, "innovation covariance"),
                  SingularMatrixError);
}

TEST_CASE("a predict producing an indefinite covariance is rejected with the eigenvalue") {
  LinearGaussianDynamics<double> dynamics(
      MatrixCoefficient<double>([](int, const Context&) { return Matrix::Identity(2, 2); }),
      Vector::Zero(2),
      MatrixCoefficient<double>([](int, const Context&) {
        Matrix q(2, 2);
        q << 1.0, 0.0, 0.0, -2.0;
        return q;
      }),
      Vector::Zero(2), Matrix::Identity(2, 2));
  GaussianBelief<double> belief{Vector::Zero(2), Matrix::Identity(2, 2)};
  try {
    kalman_predict(belief, 1, dynamics);
    FAIL("expected NotPositiveSemiDefiniteError");
  } catch (const NotPositiveSemiDefiniteError& err) {
    CHECK(err.min_eigenvalue() == doctest::Approx(-2.0).epsilon(1e-9));
  }
}
