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

#include <sstream>
#include <utility>

#include "ssmkit/filter.hpp"
#include "ssmkit/hierarchical.hpp"
#include "ssmkit/particle.hpp"

namespace ssmkit {

/// One particle of a Rao-Blackwellised filter: a sampled value of the outer
/// chain paired with the analytic belief over the marginalised inner state.
/// Beliefs are held by value so resampling duplicates them with a plain copy.
template <class OuterState, class InnerBelief>
struct RaoBlackwellisedParticle {
  OuterState outer_state;
  InnerBelief inner_belief;
};

/// Particle filter over the outer chain of a hierarchical model with the
/// inner state marginalised by a nested inference algorithm. Any algorithm
/// satisfying the predict/update contract can act as the inner engine; this
/// type never inspects it beyond that contract.
template <class InnerAlg>
struct RaoBlackwellisedFilter {
  InnerAlg inner_algorithm{};
  int num_particles = 1024;
  Resampler resampler{};
  int num_threads = 1;
};

namespace detail {

template <class Scalar, class Inner, class InnerAlg>
using RbParticle = RaoBlackwellisedParticle<
    VectorX<Scalar>, decltype(initialise(std::declval<Rng&>(), std::declval<const Inner&>(),
                                         std::declval<const InnerAlg&>(),
                                         std::declval<const Context&>()))>;

}  // namespace detail

// --- predict/update interface -----------------------------------------------

template <class Scalar, class Inner, class InnerAlg>
auto initialise(Rng& rng, const HierarchicalModel<Scalar, Inner>& model,
                const RaoBlackwellisedFilter<InnerAlg>& alg, const Context& ctx = {}) {
  using Particle = detail::RbParticle<Scalar, Inner, InnerAlg>;
  const int n = alg.num_particles;
  if (n < 1) throw Error("particle count must be at least one");
  ParticleContainer<Particle, Scalar> container;
  container.filtered.particles.resize(static_cast<std::size_t>(n));
  container.filtered.log_weights.setConstant(n, -std::log(Scalar(n)));
  container.ancestors.resize(static_cast<std::size_t>(n));
  std::iota(container.ancestors.begin(), container.ancestors.end(), 0);

  const std::uint64_t base = rng();
  parallel_for(n, alg.num_threads, [&](int begin, int end) {
    for (int i = begin; i < end; ++i) {
      Rng stream(mix64(base, static_cast<std::uint64_t>(i)));
      auto& particle = container.filtered.particles[static_cast<std::size_t>(i)];
      particle.outer_state = model.outer_dynamics().sample_initial(stream, ctx);
      particle.inner_belief = initialise(stream, model.inner_model(), alg.inner_algorithm,
                                         ctx.with(kNewOuterKey, particle.outer_state));
    }
  });

  container.proposed = container.filtered;
  return container;
}

/// Advances each particle's outer state by sampling and its inner belief by
/// the nested algorithm's predict, with `prev_outer` / `new_outer` made
/// available to the inner model through the context.
template <class Scalar, class Inner, class InnerAlg, class Particle>
ParticleContainer<Particle, Scalar> predict(Rng& rng,
                                            const HierarchicalModel<Scalar, Inner>& model,
                                            const RaoBlackwellisedFilter<InnerAlg>& alg, int step,
                                            ParticleContainer<Particle, Scalar> container,
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
        auto& particle = container.proposed.particles[static_cast<std::size_t>(i)];
        particle.outer_state =
            model.outer_dynamics().sample_transition(stream, step, parent.outer_state, ctx);
        const Context inner_ctx = ctx.with(kPrevOuterKey, parent.outer_state)
                                      .with(kNewOuterKey, particle.outer_state);
        particle.inner_belief = predict(stream, model.inner_model(), alg.inner_algorithm, step,
                                        parent.inner_belief, inner_ctx);
      }
    });
  } catch (const Error& err) {
    std::ostringstream msg;
    msg << "Rao-Blackwellised prediction failed at step " << step << ": " << err.what();
    throw Error(msg.str());
  }
  return container;
}

/// Runs the inner algorithm's update per particle; the inner incremental
/// log-likelihood is exactly the particle's weight increment. This code is
/// independent of what the inner algorithm is.
template <class Scalar, class Inner, class InnerAlg, class Particle, class Obs>
std::pair<ParticleContainer<Particle, Scalar>, Scalar> update(
    const HierarchicalModel<Scalar, Inner>& model, const RaoBlackwellisedFilter<InnerAlg>& alg,
    int step, ParticleContainer<Particle, Scalar> container, const Obs& observation,
    const Context& ctx = {}) {
  const int n = container.size();
  VectorX<Scalar> increments(n);
  try {
    parallel_for(n, alg.num_threads, [&](int begin, int end) {
      for (int i = begin; i < end; ++i) {
        const auto& proposed = container.proposed.particles[static_cast<std::size_t>(i)];
        const Context inner_ctx = ctx.with(kNewOuterKey, proposed.outer_state);
        auto [belief, increment] = update(model.inner_model(), alg.inner_algorithm, step,
                                          proposed.inner_belief, observation, inner_ctx);
        auto& filtered = container.filtered.particles[static_cast<std::size_t>(i)];
        filtered.outer_state = proposed.outer_state;
        filtered.inner_belief = std::move(belief);
        increments[i] = increment;
      }
    });
  } catch (const Error& err) {
    std::ostringstream msg;
    msg << "Rao-Blackwellised update failed at step " << step << ": " << err.what();
    throw Error(msg.str());
  }
  container.filtered.log_weights = container.proposed.log_weights + increments;
  detail::check_not_degenerate(container.filtered.log_weights, step);
  const Scalar log_increment = logsumexp(container.filtered.log_weights) -
                               logsumexp(container.proposed.log_weights);
  return {std::move(container), log_increment};
}

}  // namespace ssmkit
