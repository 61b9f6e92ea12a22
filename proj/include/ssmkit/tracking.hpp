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

#include <memory>
#include <vector>

#include "ssmkit/hungarian.hpp"
#include "ssmkit/kalman.hpp"

namespace ssmkit::tracking {

/// Near-constant-velocity single-target matrices over state
/// (position_x, velocity_x, position_y, velocity_y).
struct ConstantVelocityModel {
  Matrix transition;         // 4x4
  Matrix process_noise;      // 4x4
  Matrix observation;        // 2x4, selects positions
  Matrix measurement_noise;  // 2x2
};

/// Builds the near-constant-velocity matrices for time interval tau.
ConstantVelocityModel constant_velocity_matrices(double tau);

/// Detection model: each target is detected independently with probability
/// detection_probability; a detection is a linear-Gaussian measurement of the
/// target state.
struct SensorModel {
  double detection_probability = 0.9;
  Matrix observation;        // 2x4
  Matrix measurement_noise;  // 2x2
};

/// Homogeneous Poisson clutter over a rectangular surveillance region. The
/// region volume is always derived from the bounds.
struct ClutterModel {
  double rate = 0.0;  // expected clutter count per scan
  double x_min = 0.0, x_max = 1.0, y_min = 0.0, y_max = 1.0;

  double volume() const { return (x_max - x_min) * (y_max - y_min); }
};

/// All measurements received at one time step, in shuffled order.
struct Scan {
  int time_index = 0;
  std::vector<Vector> measurements;  // 2-vectors
};

/// Simulates one scan: per-target detections followed by Poisson clutter,
/// concatenated and then shuffled.
Scan simulate_scan(Rng& rng, const std::vector<Vector>& target_states, const SensorModel& sensor,
                   const ClutterModel& clutter, int time_index);

struct TrackStepResult {
  std::vector<GaussianBelief<double>> beliefs;
  AssociationVector association;
};

/// One global-nearest-neighbour tracking step: Kalman-predict every target,
/// associate predictions to measurements by minimising the summed
/// log-likelihood-ratio cost, then Kalman-update the associated targets.
/// Unassociated targets keep their predicted belief.
TrackStepResult gnn_track_step(const std::vector<GaussianBelief<double>>& beliefs,
                               const Scan& scan, const SensorModel& sensor,
                               const ClutterModel& clutter,
                               const LinearGaussianDynamics<double>& dynamics);

/// Squared Mahalanobis gate beyond which a target/measurement pair is
/// excluded from association.
inline constexpr double kGateThreshold = 25.0;

}  // namespace ssmkit::tracking
