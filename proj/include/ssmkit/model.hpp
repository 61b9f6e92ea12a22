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
#include <utility>
#include <vector>

#include "ssmkit/context.hpp"
#include "ssmkit/errors.hpp"
#include "ssmkit/numeric.hpp"
#include "ssmkit/random.hpp"
#include "ssmkit/types.hpp"

namespace ssmkit {

/// Latent Markov chain of a state space model: initial distribution plus
/// one-step transitions, each with paired sampling and log-density methods.
/// Implementations must keep both consistent — the log-density of a sampled
/// state is finite.
template <class Scalar>
class LatentDynamics {
 public:
  using Vec = VectorX<Scalar>;

  virtual ~LatentDynamics() = default;

  virtual int state_dim() const = 0;

  virtual Vec sample_initial(Rng& rng, const Context& ctx) const = 0;
  virtual Scalar logdensity_initial(const Vec& state, const Context& ctx) const = 0;

  /// Draws x_t given x_{t-1}. `step` is the index t of the new state.
  virtual Vec sample_transition(Rng& rng, int step, const Vec& prev_state,
                                const Context& ctx) const = 0;
  virtual Scalar logdensity_transition(int step, const Vec& prev_state, const Vec& new_state,
                                       const Context& ctx) const = 0;
};

/// Conditional distribution of an observation given the current latent state.
template <class Scalar>
class ObservationProcess {
 public:
  using Vec = VectorX<Scalar>;

  virtual ~ObservationProcess() = default;

  virtual int state_dim() const = 0;
  virtual int obs_dim() const = 0;

  virtual Vec sample_observation(Rng& rng, int step, const Vec& state,
                                 const Context& ctx) const = 0;
  virtual Scalar logdensity_observation(int step, const Vec& state, const Vec& observation,
                                        const Context& ctx) const = 0;
};

/// A state space model is the pairing of latent dynamics with an observation
/// process over the same scalar type. The Dynamics/Observation parameters
/// expose refined interfaces (e.g. linear-Gaussian coefficient access) to
/// algorithms that can exploit them; the defaults erase them.
template <class Scalar_, class Dynamics = LatentDynamics<Scalar_>,
          class Observation = ObservationProcess<Scalar_>>
class StateSpaceModel {
 public:
  using Scalar = Scalar_;
  using Vec = VectorX<Scalar>;

  StateSpaceModel(std::shared_ptr<const Dynamics> dynamics,
                  std::shared_ptr<const Observation> observation)
      : dynamics_(std::move(dynamics)), observation_(std::move(observation)) {
    if (!dynamics_ || !observation_) throw Error("state space model components must be non-null");
    if (dynamics_->state_dim() != observation_->state_dim()) {
      throw DimensionError("dynamics and observation disagree on the state dimension");
    }
  }

  /// Widening conversion, e.g. from a linear-Gaussian model to the generic
  /// form accepted by particle filters.
  template <class D2, class O2,
            class = std::enable_if_t<std::is_convertible_v<const D2*, const Dynamics*> &&
                                     std::is_convertible_v<const O2*, const Observation*>>>
  StateSpaceModel(const StateSpaceModel<Scalar, D2, O2>& other)
      : dynamics_(other.dynamics_ptr()), observation_(other.observation_ptr()) {}

  const Dynamics& dynamics() const { return *dynamics_; }
  const Observation& observation() const { return *observation_; }

  std::shared_ptr<const Dynamics> dynamics_ptr() const { return dynamics_; }
  std::shared_ptr<const Observation> observation_ptr() const { return observation_; }

  int state_dim() const { return dynamics_->state_dim(); }
  int obs_dim() const { return observation_->obs_dim(); }

 private:
  std::shared_ptr<const Dynamics> dynamics_;
  std::shared_ptr<const Observation> observation_;
};

/// Simulates states x_{0:T} and observations y_{1:T} forward. `contexts` is
/// either empty or holds one entry per step t = 1..T.
template <class Scalar, class D, class O>
std::pair<std::vector<VectorX<Scalar>>, std::vector<VectorX<Scalar>>> sample_trajectory(
    Rng& rng, const StateSpaceModel<Scalar, D, O>& model, int num_steps,
    const std::vector<Context>& contexts = {}) {
  if (num_steps < 1) throw Error("sample_trajectory: need at least one step");
  if (!contexts.empty() && static_cast<int>(contexts.size()) != num_steps) {
    throw DimensionError("sample_trajectory: contexts must match the number of steps");
  }
  const Context empty;
  std::vector<VectorX<Scalar>> states;
  std::vector<VectorX<Scalar>> observations;
  states.reserve(static_cast<std::size_t>(num_steps) + 1);
  observations.reserve(static_cast<std::size_t>(num_steps));
  states.push_back(model.dynamics().sample_initial(rng, empty));
  for (int t = 1; t <= num_steps; ++t) {
    const Context& ctx = contexts.empty() ? empty : contexts[static_cast<std::size_t>(t - 1)];
    states.push_back(model.dynamics().sample_transition(rng, t, states.back(), ctx));
    observations.push_back(model.observation().sample_observation(rng, t, states.back(), ctx));
  }
  return {std::move(states), std::move(observations)};
}

/// Joint log-density log p(x_{0:T}, y_{1:T}) under the model's factorisation.
/// Any zero-probability factor collapses the result to -inf.
template <class Scalar, class D, class O>
Scalar joint_logdensity(const StateSpaceModel<Scalar, D, O>& model,
                        const std::vector<VectorX<Scalar>>& states,
                        const std::vector<VectorX<Scalar>>& observations,
                        const std::vector<Context>& contexts = {}) {
  const int num_steps = static_cast<int>(observations.size());
  if (static_cast<int>(states.size()) != num_steps + 1) {
    throw DimensionError("joint_logdensity: need one more state than observations");
  }
  if (!contexts.empty() && static_cast<int>(contexts.size()) != num_steps) {
    throw DimensionError("joint_logdensity: contexts must match the number of steps");
  }
  const Context empty;
  Scalar total = model.dynamics().logdensity_initial(states[0], empty);
  if (total == negative_infinity<Scalar>()) return total;
  for (int t = 1; t <= num_steps; ++t) {
    const Context& ctx = contexts.empty() ? empty : contexts[static_cast<std::size_t>(t - 1)];
    const Scalar transition = model.dynamics().logdensity_transition(t, states[t - 1], states[t], ctx);
    if (transition == negative_infinity<Scalar>()) return transition;
    const Scalar observation =
        model.observation().logdensity_observation(t, states[t], observations[t - 1], ctx);
    if (observation == negative_infinity<Scalar>()) return observation;
    total += transition + observation;
  }
  return total;
}

}  // namespace ssmkit
