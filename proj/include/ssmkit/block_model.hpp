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

#include "ssmkit/hierarchical.hpp"
#include "ssmkit/linear_gaussian.hpp"

namespace ssmkit {

/// Linear-Gaussian model whose transition matrix is lower-block-triangular,
/// whose noise is block-diagonal, and whose observation reads only the lower
/// block. Such a model factorises hierarchically — an autonomous outer chain
/// u with a conditionally linear-Gaussian inner chain z — so the exact
/// flattened Kalman filter and a Rao-Blackwellised filter target the same
/// joint law. Default dimensions (2, 3, 2).
struct BlockHierarchicalModel {
  int outer_dim = 2;
  int inner_dim = 3;
  int obs_dim = 2;

  Matrix outer_transition;   // upper-left block
  Matrix cross_transition;   // lower-left block, couples u into z
  Matrix inner_transition;   // lower-right block
  Matrix inner_observation;  // observation of z only
  Matrix outer_noise;
  Matrix inner_noise;
  Matrix obs_noise;
  Vector initial_mean;       // stacked (u, z)
  Matrix initial_cov;        // block-diagonal

  /// Exact full-state view for the Kalman filter and joint densities.
  LinearGaussianModel<double> flattened() const;

  /// Outer-chain + conditional-inner-model view for Rao-Blackwellised
  /// filtering; the inner offset reads `prev_outer` from the context.
  HierarchicalModel<double, LinearGaussianModel<double>> hierarchical() const;
};

/// Randomly generated dense blocks with the transition's spectral radius
/// scaled below one and Gram-constructed noise covariances.
BlockHierarchicalModel make_block_model(Rng& rng, int outer_dim = 2, int inner_dim = 3,
                                        int obs_dim = 2);

}  // namespace ssmkit
