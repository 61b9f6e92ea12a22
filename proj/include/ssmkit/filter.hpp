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
#include <vector>

#include "ssmkit/context.hpp"
#include "ssmkit/errors.hpp"
#include "ssmkit/random.hpp"

namespace ssmkit {

struct NullObserver {
  template <class... Args>
  void operator()(Args&&...) const {}
};

/// One combined predict/update step. Written once against the unified
/// contract — every (model, algorithm) pair providing predict/update
/// overloads runs through this same code path.
template <class Model, class Alg, class State, class Obs>
auto step(Rng& rng, const Model& model, const Alg& alg, int iter, State state,
          const Obs& observation, const Context& ctx = {}) {
  auto proposed = predict(rng, model, alg, iter, std::move(state), ctx);
  return update(model, alg, iter, std::move(proposed), observation, ctx);
}

/// Folds `step` over the observations from the algorithm's initial state and
/// accumulates the incremental log-likelihoods into the log-evidence
/// log p(y_{1:T}). `contexts` is empty or one entry per observation. The
/// observer is invoked as observer(t, state) after initialisation (t = 0) and
/// after every step; genealogy recording hooks in here.
template <class Model, class Alg, class Obs, class Observer = NullObserver>
auto filter(Rng& rng, const Model& model, const Alg& alg, const std::vector<Obs>& observations,
            const std::vector<Context>& contexts = {}, Observer&& observer = Observer{}) {
  const int num_steps = static_cast<int>(observations.size());
  if (num_steps < 1) throw Error("filter: need at least one observation");
  if (!contexts.empty() && static_cast<int>(contexts.size()) != num_steps) {
    throw DimensionError("filter: contexts must match the number of observations");
  }
  const Context empty;

  auto state = initialise(rng, model, alg);
  observer(0, state);

  auto [next, total] =
      step(rng, model, alg, 1, std::move(state), observations[0], contexts.empty() ? empty : contexts[0]);
  state = std::move(next);
  observer(1, state);

  for (int t = 2; t <= num_steps; ++t) {
    const Context& ctx = contexts.empty() ? empty : contexts[static_cast<std::size_t>(t - 1)];
    auto [updated, increment] =
        step(rng, model, alg, t, std::move(state), observations[static_cast<std::size_t>(t - 1)], ctx);
    state = std::move(updated);
    total += increment;
    observer(t, state);
  }
  return std::make_pair(std::move(state), total);
}

}  // namespace ssmkit
