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

#include "ssmkit/block_model.hpp"

namespace ssmkit {

namespace {

Matrix random_matrix(Rng& rng, int rows, int cols) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = draw_normal(rng);
  }
  return m;
}

// M M^T / cols + floor * I: dense, symmetric, comfortably positive definite.
Matrix random_spd(Rng& rng, int dim, double floor = 0.1) {
  const Matrix m = random_matrix(rng, dim, dim);
  return (m * m.transpose() / dim + floor * Matrix::Identity(dim, dim)).eval();
}

}  // namespace

LinearGaussianModel<double> BlockHierarchicalModel::flattened() const {
  const int state_dim = outer_dim + inner_dim;
  Matrix transition = Matrix::Zero(state_dim, state_dim);
  transition.topLeftCorner(outer_dim, outer_dim) = outer_transition;
  transition.bottomLeftCorner(inner_dim, outer_dim) = cross_transition;
  transition.bottomRightCorner(inner_dim, inner_dim) = inner_transition;

  Matrix noise = Matrix::Zero(state_dim, state_dim);
  noise.topLeftCorner(outer_dim, outer_dim) = outer_noise;
  noise.bottomRightCorner(inner_dim, inner_dim) = inner_noise;

  Matrix observation = Matrix::Zero(obs_dim, state_dim);
  observation.rightCols(inner_dim) = inner_observation;

  return make_linear_gaussian_model<double>(transition, Vector::Zero(state_dim), noise,
                                            initial_mean, initial_cov, observation, obs_noise);
}

HierarchicalModel<double, LinearGaussianModel<double>> BlockHierarchicalModel::hierarchical()
    const {
  auto outer = std::make_shared<const LinearGaussianDynamics<double>>(
      outer_transition, Vector::Zero(outer_dim), outer_noise, initial_mean.head(outer_dim).eval(),
      initial_cov.topLeftCorner(outer_dim, outer_dim).eval());

  // z_t | z_{t-1}, u_{t-1} ~ N(A22 z_{t-1} + A21 u_{t-1}, Q22): the coupling
  // arrives through the conditioning context.
  const Matrix coupling = cross_transition;
  auto inner_offset = [coupling](int, const Context& ctx) -> Vector {
    return coupling * ctx.get<Vector>(kPrevOuterKey);
  };
  auto inner_dynamics = std::make_shared<const LinearGaussianDynamics<double>>(
      inner_transition, VectorCoefficient<double>(inner_offset), inner_noise,
      initial_mean.tail(inner_dim).eval(),
      initial_cov.bottomRightCorner(inner_dim, inner_dim).eval());
  auto inner_observation_process = std::make_shared<const LinearGaussianObservation<double>>(
      inner_observation, obs_noise);

  LinearGaussianModel<double> inner_model(inner_dynamics, inner_observation_process);
  return HierarchicalModel<double, LinearGaussianModel<double>>(std::move(outer),
                                                                std::move(inner_model));
}

BlockHierarchicalModel make_block_model(Rng& rng, int outer_dim, int inner_dim, int obs_dim) {
  if (outer_dim < 1 || inner_dim < 1 || obs_dim < 1) {
    throw Error("block model dimensions must be at least one");
  }
  BlockHierarchicalModel model;
  model.outer_dim = outer_dim;
  model.inner_dim = inner_dim;
  model.obs_dim = obs_dim;

  const int state_dim = outer_dim + inner_dim;
  model.outer_transition = random_matrix(rng, outer_dim, outer_dim);
  model.cross_transition = random_matrix(rng, inner_dim, outer_dim);
  model.inner_transition = random_matrix(rng, inner_dim, inner_dim);

  // Scale the whole transition so its spectral radius sits at 0.9; scaling
  // every block by the same factor keeps the two views consistent.
  Matrix transition = Matrix::Zero(state_dim, state_dim);
  transition.topLeftCorner(outer_dim, outer_dim) = model.outer_transition;
  transition.bottomLeftCorner(inner_dim, outer_dim) = model.cross_transition;
  transition.bottomRightCorner(inner_dim, inner_dim) = model.inner_transition;
  const double spectral_radius = transition.eigenvalues().cwiseAbs().maxCoeff();
  if (spectral_radius > 0.0) {
    const double scale = 0.9 / spectral_radius;
    model.outer_transition *= scale;
    model.cross_transition *= scale;
    model.inner_transition *= scale;
  }

  model.inner_observation = random_matrix(rng, obs_dim, inner_dim);
  model.outer_noise = random_spd(rng, outer_dim);
  model.inner_noise = random_spd(rng, inner_dim);
  model.obs_noise = random_spd(rng, obs_dim);

  model.initial_mean = random_matrix(rng, state_dim, 1);
  model.initial_cov = Matrix::Zero(state_dim, state_dim);
  model.initial_cov.topLeftCorner(outer_dim, outer_dim) = random_spd(rng, outer_dim);
  model.initial_cov.bottomRightCorner(inner_dim, inner_dim) = random_spd(rng, inner_dim);
  return model;
}

}  // namespace ssmkit
