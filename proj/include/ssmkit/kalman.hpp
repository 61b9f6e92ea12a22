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

#pragma once

#include <utility>

#include "ssmkit/linear_gaussian.hpp"

namespace ssmkit {

/// Gaussian filtering distribution: mean and (symmetric PSD) covariance.
template <class Scalar>
struct GaussianBelief {
  VectorX<Scalar> mean;
  MatrixX<Scalar> covariance;
};

/// Closed-form filtering of linear-Gaussian models.
struct KalmanFilter {};

namespace detail {

/// Cholesky with a single jitter retry: survives borderline-PSD inputs
/// without masking genuine singularity.
template <class Scalar>
Eigen::LLT<MatrixX<Scalar>> cholesky_with_jitter(const MatrixX<Scalar>& m, const char* what) {
  Eigen::LLT<MatrixX<Scalar>> llt(m);
  if (llt.info() == Eigen::Success) return llt;
  const Scalar jitter = Scalar(1e-9) * m.trace() / Scalar(m.rows());
  MatrixX<Scalar> bumped = m;
  bumped.diagonal().array() += jitter;
  llt.compute(bumped);
  if (llt.info() != Eigen::Success) {
    throw SingularMatrixError(std::string(what) + " is singular (Cholesky failed after jitter)");
  }
  return llt;
}

}  // namespace detail

/// Moment propagation through the linear-Gaussian transition:
/// mean' = A mean + b, cov' = A cov A' + Q.
template <class Scalar>
GaussianBelief<Scalar> kalman_predict(const GaussianBelief<Scalar>& belief, int step,
                                      const LinearGaussianDynamics<Scalar>& dynamics,
                                      const Context& ctx = {}) {
  const MatrixX<Scalar> a = dynamics.transition_matrix(step, ctx);
  if (a.cols() != belief.mean.size()) {
    throw DimensionError("kalman_predict: belief does not match the dynamics dimension");
  }
  GaussianBelief<Scalar> predicted;
  predicted.mean = a * belief.mean + dynamics.transition_offset(step, ctx);
  predicted.covariance = ensure_psd<Scalar>(
      a * belief.covariance * a.transpose() + dynamics.transition_cov(step, ctx));
  return predicted;
}

/// Conjugate measurement update with Joseph-form covariance. Returns the
/// posterior belief and the incremental log-likelihood log p(y_t | y_{1:t-1}).
template <class Scalar>
std::pair<GaussianBelief<Scalar>, Scalar> kalman_update(
    const GaussianBelief<Scalar>& belief, int step,
    const LinearGaussianObservation<Scalar>& obs_process, const VectorX<Scalar>& observation,
    const Context& ctx = {}) {
  const MatrixX<Scalar> h = obs_process.observation_matrix(step, ctx);
  const MatrixX<Scalar> r = obs_process.observation_cov(step, ctx);
  if (observation.size() != h.rows()) {
    throw DimensionError("kalman_update: observation has the wrong dimension");
  }

  const VectorX<Scalar> innovation =
      observation - h * belief.mean - obs_process.observation_offset(step, ctx);
  const MatrixX<Scalar> innovation_cov =
      symmetrized<Scalar>(h * belief.covariance * h.transpose() + r);
  const auto chol = detail::cholesky_with_jitter<Scalar>(innovation_cov, "innovation covariance");

  const MatrixX<Scalar> gain = chol.solve(h * belief.covariance).transpose();

  GaussianBelief<Scalar> posterior;
  posterior.mean = belief.mean + gain * innovation;
  const MatrixX<Scalar> identity_minus_gain_h =
      MatrixX<Scalar>::Identity(belief.mean.size(), belief.mean.size()) - gain * h;
  posterior.covariance =
      symmetrized<Scalar>(identity_minus_gain_h * belief.covariance *
                              identity_minus_gain_h.transpose() +
                          gain * r * gain.transpose());

  // log N(y; H mean + c, S) via the Cholesky factor of S
  const MatrixX<Scalar> chol_lower = chol.matrixL();
  const VectorX<Scalar> whitened =
      chol_lower.template triangularView<Eigen::Lower>().solve(innovation);
  Scalar log_det{0};
  for (Eigen::Index i = 0; i < chol_lower.rows(); ++i) log_det += std::log(chol_lower(i, i));
  const Scalar log_increment = -Scalar{0.5} * whitened.squaredNorm() - log_det -
                               Scalar{0.5} * Scalar(observation.size()) *
                                   std::log(Scalar{2} * Scalar(kPi));

  return {std::move(posterior), log_increment};
}

// --- predict/update interface -----------------------------------------------

template <class Scalar>
GaussianBelief<Scalar> initialise(Rng&, const LinearGaussianModel<Scalar>& model,
                                  const KalmanFilter&, const Context& = {}) {
  return {model.dynamics().initial_mean(), model.dynamics().initial_cov()};
}

template <class Scalar>
GaussianBelief<Scalar> predict(Rng&, const LinearGaussianModel<Scalar>& model,
                               const KalmanFilter&, int step, GaussianBelief<Scalar> state,
                               const Context& ctx = {}) {
  return kalman_predict(state, step, model.dynamics(), ctx);
}

template <class Scalar>
std::pair<GaussianBelief<Scalar>, Scalar> update(const LinearGaussianModel<Scalar>& model,
                                                 const KalmanFilter&, int step,
                                                 GaussianBelief<Scalar> state,
                                                 const VectorX<Scalar>& observation,
                                                 const Context& ctx = {}) {
  return kalman_update(state, step, model.observation(), observation, ctx);
}

}  // namespace ssmkit
