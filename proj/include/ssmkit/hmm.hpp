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

#include <functional>
#include <utility>

#include "ssmkit/context.hpp"
#include "ssmkit/numeric.hpp"
#include "ssmkit/random.hpp"

namespace ssmkit {

/// Filtering distribution over K discrete states, kept normalised in log
/// space (the forward algorithm never leaves it).
template <class Scalar>
struct DiscreteBelief {
  VectorX<Scalar> log_probabilities;
  int num_states() const { return static_cast<int>(log_probabilities.size()); }
};

/// Discrete-state model (hidden Markov model). The transition matrix is in
/// probability space and row-stochastic; emissions are supplied as a function
/// producing per-state observation log-densities.
template <class Scalar, class Obs = VectorX<Scalar>>
struct DiscreteModel {
  using TransitionFn = std::function<MatrixX<Scalar>(int, const Context&)>;
  using EmissionFn = std::function<VectorX<Scalar>(int, const Obs&, const Context&)>;

  VectorX<Scalar> initial_log_probabilities;
  TransitionFn transition;
  EmissionFn emission_logdensities;

  int num_states() const { return static_cast<int>(initial_log_probabilities.size()); }
};

/// Exact filtering of discrete-state models in log space.
struct ForwardAlgorithm {};

namespace detail {

template <class Scalar>
void check_row_stochastic(const MatrixX<Scalar>& transition, int num_states) {
  if (transition.rows() != num_states || transition.cols() != num_states) {
    throw DimensionError("transition matrix does not match the number of states");
  }
  if ((transition.array() < Scalar{0}).any()) {
    throw Error("transition matrix has negative entries");
  }
  for (int i = 0; i < num_states; ++i) {
    if (std::abs(transition.row(i).sum() - Scalar{1}) > Scalar(1e-10)) {
      throw Error("transition matrix row does not sum to one");
    }
  }
}

}  // namespace detail

template <class Scalar>
DiscreteBelief<Scalar> forward_predict(const DiscreteBelief<Scalar>& belief, int /*step*/,
                                       const MatrixX<Scalar>& transition, const Context& = {}) {
  const int num_states = belief.num_states();
  detail::check_row_stochastic(transition, num_states);
  DiscreteBelief<Scalar> predicted{VectorX<Scalar>(num_states)};
  VectorX<Scalar> terms(num_states);
  for (int j = 0; j < num_states; ++j) {
    for (int i = 0; i < num_states; ++i) {
      terms[i] = transition(i, j) > Scalar{0}
                     ? belief.log_probabilities[i] + std::log(transition(i, j))
                     : negative_infinity<Scalar>();
    }
    predicted.log_probabilities[j] = logsumexp<Scalar>(terms);
  }
  return predicted;
}

/// Bayes update with per-state emission log-densities. The increment is the
/// log normalising constant, i.e. log p(y_t | y_{1:t-1}) for a normalised
/// input belief.
template <class Scalar>
std::pair<DiscreteBelief<Scalar>, Scalar> forward_update(
    const DiscreteBelief<Scalar>& belief, const VectorX<Scalar>& emission_logdensities) {
  if (emission_logdensities.size() != belief.log_probabilities.size()) {
    throw DimensionError("emission vector does not match the number of states");
  }
  VectorX<Scalar> unnormalised = belief.log_probabilities + emission_logdensities;
  const Scalar log_normaliser = logsumexp<Scalar>(unnormalised);
  if (log_normaliser == negative_infinity<Scalar>()) {
    throw Error("observation impossible under model: all emission densities are zero");
  }
  const Scalar log_increment = log_normaliser - logsumexp<Scalar>(belief.log_probabilities);
  DiscreteBelief<Scalar> posterior{(unnormalised.array() - log_normaliser).matrix()};
  return {std::move(posterior), log_increment};
}

// --- predict/update interface -----------------------------------------------

template <class Scalar, class Obs>
DiscreteBelief<Scalar> initialise(Rng&, const DiscreteModel<Scalar, Obs>& model,
                                  const ForwardAlgorithm&, const Context& = {}) {
  VectorX<Scalar> log_probs = model.initial_log_probabilities;
  const Scalar normaliser = logsumexp<Scalar>(log_probs);
  if (normaliser == negative_infinity<Scalar>()) {
    throw Error("initial distribution has no support");
  }
  return {(log_probs.array() - normaliser).matrix()};
}

template <class Scalar, class Obs>
DiscreteBelief<Scalar> predict(Rng&, const DiscreteModel<Scalar, Obs>& model,
                               const ForwardAlgorithm&, int step, DiscreteBelief<Scalar> state,
                               const Context& ctx = {}) {
  return forward_predict(state, step, model.transition(step, ctx), ctx);
}

template <class Scalar, class Obs>
std::pair<DiscreteBelief<Scalar>, Scalar> update(const DiscreteModel<Scalar, Obs>& model,
                                                 const ForwardAlgorithm&, int step,
                                                 DiscreteBelief<Scalar> state,
                                                 const Obs& observation, const Context& ctx = {}) {
  return forward_update(state, model.emission_logdensities(step, observation, ctx));
}

}  // namespace ssmkit
