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

#include "ssmkit/model.hpp"

namespace ssmkit {

/// A hierarchical state space model: an autonomous outer chain u_t wrapped
/// around an inner model for (z_t, y_t) whose components may condition on the
/// outer values through the `prev_outer` / `new_outer` context entries. The
/// joint density factorises as
///   p(x_0) prod_t p(u_t|u_{t-1}) p(z_t|z_{t-1}, u_t, u_{t-1}) p(y_t|z_t, u_t).
template <class Scalar_, class InnerModel = StateSpaceModel<Scalar_>>
class HierarchicalModel {
 public:
  using Scalar = Scalar_;
  using Inner = InnerModel;

  HierarchicalModel(std::shared_ptr<const LatentDynamics<Scalar>> outer_dynamics,
                    InnerModel inner_model)
      : outer_dynamics_(std::move(outer_dynamics)), inner_model_(std::move(inner_model)) {
    if (!outer_dynamics_) throw Error("hierarchical model requires outer dynamics");
  }

  const LatentDynamics<Scalar>& outer_dynamics() const { return *outer_dynamics_; }
  const InnerModel& inner_model() const { return inner_model_; }
  int outer_dim() const { return outer_dynamics_->state_dim(); }

 private:
  std::shared_ptr<const LatentDynamics<Scalar>> outer_dynamics_;
  InnerModel inner_model_;
};

/// Joint log-density of a hierarchical model assembled from its factors.
/// Used to cross-check hierarchical definitions against a flattened model of
/// the same joint law.
template <class Scalar, class D, class O>
Scalar joint_logdensity(const HierarchicalModel<Scalar, StateSpaceModel<Scalar, D, O>>& model,
                        const std::vector<VectorX<Scalar>>& outer_states,
                        const std::vector<VectorX<Scalar>>& inner_states,
                        const std::vector<VectorX<Scalar>>& observations,
                        const std::vector<Context>& contexts = {}) {
  const int num_steps = static_cast<int>(observations.size());
  if (static_cast<int>(outer_states.size()) != num_steps + 1 ||
      static_cast<int>(inner_states.size()) != num_steps + 1) {
    throw DimensionError("joint_logdensity: need one more state than observations");
  }
  const Context empty;
  const auto& inner = model.inner_model();
  Scalar total = model.outer_dynamics().logdensity_initial(outer_states[0], empty);
  total += inner.dynamics().logdensity_initial(
      inner_states[0], empty.with(kNewOuterKey, outer_states[0]));
  for (int t = 1; t <= num_steps; ++t) {
    const Context& base = contexts.empty() ? empty : contexts[static_cast<std::size_t>(t - 1)];
    const Context ctx = base.with(kPrevOuterKey, outer_states[t - 1])
                            .with(kNewOuterKey, outer_states[t]);
    total += model.outer_dynamics().logdensity_transition(t, outer_states[t - 1], outer_states[t],
                                                          base);
    total += inner.dynamics().logdensity_transition(t, inner_states[t - 1], inner_states[t], ctx);
    total += inner.observation().logdensity_observation(t, inner_states[t], observations[t - 1],
                                                        ctx);
    if (total == negative_infinity<Scalar>()) return negative_infinity<Scalar>();
  }
  return total;
}

}  // namespace ssmkit
