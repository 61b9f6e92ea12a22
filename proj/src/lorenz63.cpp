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

#include "ssmkit/lorenz63.hpp"

#include <cmath>

#include "ssmkit/filter.hpp"
#include "ssmkit/genealogy.hpp"
#include "ssmkit/particle.hpp"

namespace ssmkit::lorenz {

Vector lorenz_derivative(const Vector& state, const Lorenz63Params& params) {
  Vector deriv(3);
  deriv[0] = params.sigma * (state[1] - state[0]);
  deriv[1] = state[0] * (params.rho - state[2]) - state[1];
  deriv[2] = state[0] * state[1] - params.beta * state[2];
  return deriv;
}

Lorenz63Dynamics::Lorenz63Dynamics(Lorenz63Params params, double dynamics_std,
                                   Vector initial_mean, double initial_std)
    : params_(params),
      dynamics_std_(dynamics_std),
      initial_mean_(std::move(initial_mean)),
      initial_std_(initial_std) {
  if (!(params_.dt > 0.0)) throw Error("step size must be positive");
  if (!(dynamics_std_ > 0.0)) throw Error("dynamics noise std must be positive");
  if (initial_mean_.size() != 3) throw DimensionError("initial mean must be 3-dimensional");
}

Vector Lorenz63Dynamics::sample_initial(Rng& rng, const Context&) const {
  Vector state(3);
  for (int i = 0; i < 3; ++i) state[i] = initial_mean_[i] + initial_std_ * draw_normal(rng);
  return state;
}

double Lorenz63Dynamics::logdensity_initial(const Vector& state, const Context&) const {
  const double variance = initial_std_ * initial_std_;
  double total = 0.0;
  for (int i = 0; i < 3; ++i) total += normal_logpdf<double>(state[i], initial_mean_[i], variance);
  return total;
}

Vector Lorenz63Dynamics::sample_transition(Rng& rng, int /*step*/, const Vector& prev_state,
                                           const Context&) const {
  Vector next = rk4_step([this](const Vector& x) { return lorenz_derivative(x, params_); },
                         prev_state, params_.dt);
  for (int i = 0; i < 3; ++i) next[i] += dynamics_std_ * draw_normal(rng);
  return next;
}

double Lorenz63Dynamics::logdensity_transition(int /*step*/, const Vector& prev_state,
                                               const Vector& new_state, const Context&) const {
  const Vector image = rk4_step([this](const Vector& x) { return lorenz_derivative(x, params_); },
                                prev_state, params_.dt);
  const double variance = dynamics_std_ * dynamics_std_;
  double total = 0.0;
  for (int i = 0; i < 3; ++i) total += normal_logpdf<double>(new_state[i], image[i], variance);
  return total;
}

namespace {

class FirstComponentObservation final : public ObservationProcess<double> {
 public:
  explicit FirstComponentObservation(double noise_std) : noise_std_(noise_std) {
    if (!(noise_std_ > 0.0)) throw Error("observation noise std must be positive");
  }

  int state_dim() const override { return 3; }
  int obs_dim() const override { return 1; }

  Vector sample_observation(Rng& rng, int, const Vector& state, const Context&) const override {
    return Vector::Constant(1, state[0] + noise_std_ * draw_normal(rng));
  }

  double logdensity_observation(int, const Vector& state, const Vector& observation,
                                const Context&) const override {
    return normal_logpdf<double>(observation[0], state[0], noise_std_ * noise_std_);
  }

 private:
  double noise_std_;
};

}  // namespace

StateSpaceModel<double> lorenz_ssm(const Lorenz63Params& params, const AssimilationNoise& noise,
                                   Vector initial_mean, double initial_std) {
  return StateSpaceModel<double>(
      std::make_shared<const Lorenz63Dynamics>(params, noise.dynamics_std,
                                               std::move(initial_mean), initial_std),
      std::make_shared<const FirstComponentObservation>(noise.observation_std));
}

Vector attractor_point(const Lorenz63Params& params) {
  Vector state = Vector::Ones(3);
  const int burn_in_steps = static_cast<int>(std::ceil(10.0 / params.dt));
  for (int i = 0; i < burn_in_steps; ++i) {
    state = rk4_step([&params](const Vector& x) { return lorenz_derivative(x, params); }, state,
                     params.dt);
  }
  return state;
}

AssimilationRun run_assimilation(Rng& rng, const AssimilationConfig& config) {
  const Vector initial_mean = attractor_point(config.params);
  const auto model = lorenz_ssm(config.params, config.noise, initial_mean, config.initial_std);

  AssimilationRun run;
  auto [states, observations] = sample_trajectory(rng, model, config.num_steps);
  run.reference = std::move(states);
  run.observations.reserve(observations.size());
  for (const Vector& obs : observations) run.observations.push_back(obs[0]);

  BootstrapFilter alg{config.num_particles, config.resampler, config.num_threads};
  AncestryTree<Vector> tree;
  run.filtered_means.reserve(static_cast<std::size_t>(config.num_steps));
  auto observer = [&](int t, const ParticleContainer<Vector, double>& container) {
    if (t == 0) {
      tree.record_roots(container.filtered.particles);
      return;
    }
    tree.record_generation(container.filtered.particles, container.ancestors);
    const Vector weights = normalized_weights(container.filtered.log_weights);
    Vector mean = Vector::Zero(3);
    for (int i = 0; i < container.size(); ++i) {
      mean += weights[i] * container.filtered.particles[static_cast<std::size_t>(i)];
    }
    run.filtered_means.push_back(std::move(mean));
  };

  run.log_evidence = filter(rng, model, alg, observations, {}, observer).second;

  run.rmse = Vector::Zero(3);
  for (int t = 1; t <= config.num_steps; ++t) {
    const Vector error = run.filtered_means[static_cast<std::size_t>(t - 1)] -
                         run.reference[static_cast<std::size_t>(t)];
    run.rmse += error.cwiseProduct(error);
  }
  run.rmse = (run.rmse / config.num_steps).cwiseSqrt();

  run.particle_paths.reserve(static_cast<std::size_t>(config.num_particles));
  for (int leaf = 0; leaf < config.num_particles; ++leaf) {
    run.particle_paths.push_back(tree.extract_path(leaf));
  }
  return run;
}

}  // namespace ssmkit::lorenz
