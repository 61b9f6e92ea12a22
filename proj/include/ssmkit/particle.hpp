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

#include <numeric>
#include <sstream>
#include <utility>
#include <vector>

#include "ssmkit/model.hpp"
#include "ssmkit/parallel.hpp"
#include "ssmkit/resampling.hpp"

namespace ssmkit {

/// Weighted particle approximation of a filtering distribution.
template <class State, class Scalar>
struct ParticleEnsemble {
  std::vector<State> particles;
  VectorX<Scalar> log_weights;

  int size() const { return static_cast<int>(particles.size()); }
};

/// Pre-allocated per-step storage: the proposed and filtered ensembles plus
/// the ancestor index of each particle in the previous filtered generation.
/// Buffers are reused across steps; an identity ancestor vector is recorded
/// even when resampling is skipped so genealogy consumers see a uniform
/// stream.
template <class State, class Scalar>
struct ParticleContainer {
  ParticleEnsemble<State, Scalar> proposed;
  ParticleEnsemble<State, Scalar> filtered;
  std::vector<int> ancestors;

  int size() const { return filtered.size(); }
};

/// Particle filter with the transition distribution as proposal.
struct BootstrapFilter {
  int num_particles = 1024;
  Resampler resampler{};
  int num_threads = 1;
};

namespace detail {

/// Applies the conditional-resampling policy: fills `ancestors` (resampled or
/// identity) and the post-resampling log-weights of the proposal.
template <class State, class Scalar>
void prepare_ancestors(Rng& rng, const Resampler& resampler,
                       ParticleContainer<State, Scalar>& container) {
  const int n = container.size();
  const Scalar ess = effective_sample_size(container.filtered.log_weights);
  if (resampler.triggers(static_cast<double>(ess), n)) {
    container.ancestors = resample(resampler, container.filtered.log_weights, n, rng);
    container.proposed.log_weights.setConstant(n, -std::log(Scalar(n)));
  } else {
    std::iota(container.ancestors.begin(), container.ancestors.end(), 0);
    container.proposed.log_weights = container.filtered.log_weights;
  }
}

template <class Scalar>
void check_not_degenerate(const VectorX<Scalar>& log_weights, int step) {
  if (logsumexp(log_weights) == negative_infinity<Scalar>()) {
    std::ostringstream msg;
    msg << "particle ensemble degenerated at step " << step
        << ": every weight has zero probability";
    throw DegenerateEnsembleError(msg.str(), step);
  }
}

}  // namespace detail

// --- predict/update interface -----------------------------------------------

template <class Scalar, class D, class O>
ParticleContainer<VectorX<Scalar>, Scalar> initialise(Rng& rng,
                                                      const StateSpaceModel<Scalar, D, O>& model,
                                                      const BootstrapFilter& alg,
                                                      const Context& ctx = {}) {
  const int n = alg.num_particles;
  if (n < 1) throw Error("particle count must be at least one");
  ParticleContainer<VectorX<Scalar>, Scalar> container;
  container.filtered.particles.resize(static_cast<std::size_t>(n));
  container.filtered.log_weights.setConstant(n, -std::log(Scalar(n)));
  container.ancestors.resize(static_cast<std::size_t>(n));
  std::iota(container.ancestors.begin(), container.ancestors.end(), 0);

  const std::uint64_t base = rng();
  parallel_for(n, alg.num_threads, [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      Rng stream(mix64(base, static_cast<std::uint64_t>(i)));
      container.filtered.particles[static_cast<std::size_t>(i)] =
          model.dynamics().sample_initial(stream, ctx);
    }
  });

  container.proposed = container.filtered;
  return container;
}

/// Conditionally resamples, then propagates every particle through the
/// transition distribution. Each particle consumes its own derived random
/// stream, so the result is independent of the thread partitioning.
template <class Scalar, class D, class O>
ParticleContainer<VectorX<Scalar>, Scalar> predict(Rng& rng,
                                                   const StateSpaceModel<Scalar, D, O>& model,
                                                   const BootstrapFilter& alg, int step,
                                                   ParticleContainer<VectorX<Scalar>, Scalar> container,
                                                   const Context& ctx = {}) {
  const int n = container.size();
  detail::prepare_ancestors(rng, alg.resampler, container);
  const std::uint64_t base = rng();
  try {
    parallel_for(n, alg.num_threads, [&](int begin, int end) {
      for (int i = begin; i < end; ++i) {
        Rng stream(mix64(base, static_cast<std::uint64_t>(i)));
        const auto& parent =
            container.filtered.particles[static_cast<std::size_t>(container.ancestors[static_cast<std::size_t>(i)])];
        container.proposed.particles[static_cast<std::size_t>(i)] =
            model.dynamics().sample_transition(stream, step, parent, ctx);
      }
    });
  } catch (const Error& err) {
    std::ostringstream msg;
    msg << "particle prediction failed at step " << step << ": " << err.what();
    throw Error(msg.str());
  }
  return container;
}

/// Reweights the proposed particles by the observation likelihood. The
/// increment is logsumexp(filtered) - logsumexp(proposed), an estimate of
/// log p(y_t | y_{1:t-1}).
template <class Scalar, class D, class O>
std::pair<ParticleContainer<VectorX<Scalar>, Scalar>, Scalar> update(
    const StateSpaceModel<Scalar, D, O>& model, const BootstrapFilter& alg, int step,
    ParticleContainer<VectorX<Scalar>, Scalar> container, const VectorX<Scalar>& observation,
    const Context& ctx = {}) {
  const int n = container.size();
  VectorX<Scalar> increments(n);
  parallel_for(n, alg.num_threads, [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      increments[i] = model.observation().logdensity_observation(
          step, container.proposed.particles[static_cast<std::size_t>(i)], observation, ctx);
    }
  });
  container.filtered.log_weights = container.proposed.log_weights + increments;
  detail::check_not_degenerate(container.filtered.log_weights, step);
  std::swap(container.filtered.particles, container.proposed.particles);
  const Scalar log_increment = logsumexp(container.filtered.log_weights) -
                               logsumexp(container.proposed.log_weights);
  return {std::move(container), log_increment};
}

}  // namespace ssmkit
