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

#include "ssmkit/tracking.hpp"

#include <algorithm>
#include <cmath>

namespace ssmkit::tracking {

ConstantVelocityModel constant_velocity_matrices(double tau) {
  if (tau < 0.0) throw Error("time interval must be non-negative");
  ConstantVelocityModel model;
  model.transition = Matrix::Identity(4, 4);
  model.transition(0, 1) = tau;
  model.transition(2, 3) = tau;

  model.process_noise = Matrix::Zero(4, 4);
  Matrix block(2, 2);
  block << 1.0 / 3.0, 1.0 / 2.0, 1.0 / 2.0, 1.0;
  model.process_noise.block(0, 0, 2, 2) = block;
  model.process_noise.block(2, 2, 2, 2) = block;

  model.observation = Matrix::Zero(2, 4);
  model.observation(0, 0) = 1.0;
  model.observation(1, 2) = 1.0;

  model.measurement_noise = 0.3 * Matrix::Identity(2, 2);
  return model;
}

Scan simulate_scan(Rng& rng, const std::vector<Vector>& target_states, const SensorModel& sensor,
                   const ClutterModel& clutter, int time_index) {
  if (clutter.volume() <= 0.0) throw Error("clutter region must have positive area");
  Scan scan;
  scan.time_index = time_index;

  const Matrix noise_sqrt = psd_sqrt<double>(sensor.measurement_noise);
  for (const Vector& state : target_states) {
    if (draw_uniform(rng) >= sensor.detection_probability) continue;
    Vector z(2);
    z << draw_normal(rng), draw_normal(rng);
    scan.measurements.push_back(sensor.observation * state + noise_sqrt * z);
  }

  const int num_clutter = draw_poisson(rng, clutter.rate);
  for (int i = 0; i < num_clutter; ++i) {
    Vector point(2);
    point << draw_uniform(rng, clutter.x_min, clutter.x_max),
        draw_uniform(rng, clutter.y_min, clutter.y_max);
    scan.measurements.push_back(std::move(point));
  }

  std::shuffle(scan.measurements.begin(), scan.measurements.end(), rng);
  return scan;
}

TrackStepResult gnn_track_step(const std::vector<GaussianBelief<double>>& beliefs,
                               const Scan& scan, const SensorModel& sensor,
                               const ClutterModel& clutter,
                               const LinearGaussianDynamics<double>& dynamics) {
  const int num_targets = static_cast<int>(beliefs.size());
  const int num_measurements = static_cast<int>(scan.measurements.size());
  const Context ctx;
  const double p_detect = sensor.detection_probability;
  if (!(p_detect > 0.0) || p_detect > 1.0) throw Error("detection probability must be in (0, 1]");

  std::vector<GaussianBelief<double>> predicted;
  predicted.reserve(beliefs.size());
  for (const auto& belief : beliefs) {
    predicted.push_back(kalman_predict(belief, scan.time_index, dynamics, ctx));
  }

  // Log-likelihood-ratio cost: associating target i with measurement j trades
  // a clutter explanation for a detection one. The clutter density enters as
  // a constant per pairing, so it never changes which pairing wins, only the
  // association-versus-miss tradeoff.
  const double log_clutter_density =
      clutter.rate > 0.0 ? std::log(clutter.rate / clutter.volume()) : -1e9;
  const double miss_cost = p_detect < 1.0 ? -std::log1p(-p_detect)
                                          : std::numeric_limits<double>::infinity();

  Matrix cost(num_targets, num_measurements);
  for (int i = 0; i < num_targets; ++i) {
    const Vector mean = sensor.observation * predicted[static_cast<std::size_t>(i)].mean;
    const Matrix innovation_cov = symmetrized<double>(
        sensor.observation * predicted[static_cast<std::size_t>(i)].covariance *
            sensor.observation.transpose() +
        sensor.measurement_noise);
    const Eigen::LLT<Matrix> chol(innovation_cov);
    if (chol.info() != Eigen::Success) {
      throw SingularMatrixError("innovation covariance is singular in association");
    }
    const Matrix chol_lower = chol.matrixL();
    double log_det = 0.0;
    for (Eigen::Index k = 0; k < chol_lower.rows(); ++k) log_det += std::log(chol_lower(k, k));
    for (int j = 0; j < num_measurements; ++j) {
      const Vector whitened = chol_lower.triangularView<Eigen::Lower>().solve(
          scan.measurements[static_cast<std::size_t>(j)] - mean);
      const double mahalanobis_sq = whitened.squaredNorm();
      if (mahalanobis_sq > kGateThreshold) {
        cost(i, j) = std::numeric_limits<double>::infinity();
        continue;
      }
      const double log_likelihood =
          -0.5 * mahalanobis_sq - log_det - std::log(2.0 * kPi);
      cost(i, j) = -log_likelihood - std::log(p_detect) + log_clutter_density;
    }
  }

  TrackStepResult result;
  result.association = associate(cost, Vector::Constant(num_targets, miss_cost));

  const LinearGaussianObservation<double> obs_process(sensor.observation,
                                                      sensor.measurement_noise);
  result.beliefs.reserve(predicted.size());
  for (int i = 0; i < num_targets; ++i) {
    const int entry = result.association[static_cast<std::size_t>(i)];
    if (entry == 0) {
      if (p_detect >= 1.0) {
        throw Error(
            "a target found no measurement but the detection probability is 1; "
            "set it below 1 to allow missed detections");
      }
      result.beliefs.push_back(predicted[static_cast<std::size_t>(i)]);
      continue;
    }
    auto posterior =
        kalman_update(predicted[static_cast<std::size_t>(i)], scan.time_index, obs_process,
                      scan.measurements[static_cast<std::size_t>(entry - 1)], ctx)
            .first;
    result.beliefs.push_back(std::move(posterior));
  }
  return result;
}

}  // namespace ssmkit::tracking
