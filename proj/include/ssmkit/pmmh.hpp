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

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "ssmkit/filter.hpp"

namespace ssmkit {

enum class ParameterSupport { kUnbounded, kPositive };

/// A named static model parameter with its support descriptor. Positive
/// parameters are proposed on the log scale with the matching Jacobian term
/// in the acceptance ratio.
struct Parameter {
  std::string name;
  double value = 0.0;
  ParameterSupport support = ParameterSupport::kUnbounded;
};

struct PmmhSample {
  std::vector<double> parameters;
  double log_prior = 0.0;
  double log_evidence = 0.0;
  bool accepted = false;
};

/// Output of a PMMH run: the chain itself (first entry is the initial state)
/// plus bookkeeping for proposals rejected because the filter failed.
struct MarkovChain {
  std::vector<std::string> parameter_names;
  std::vector<PmmhSample> samples;
  int failed_proposals = 0;

  double acceptance_rate() const {
    if (samples.size() <= 1) return 0.0;
    int accepted = 0;
    for (std::size_t i = 1; i < samples.size(); ++i) accepted += samples[i].accepted ? 1 : 0;
    return static_cast<double>(accepted) / static_cast<double>(samples.size() - 1);
  }
};

namespace detail {

inline double to_unconstrained(double value, ParameterSupport support) {
  return support == ParameterSupport::kPositive ? std::log(value) : value;
}

inline double to_constrained(double value, ParameterSupport support) {
  return support == ParameterSupport::kPositive ? std::exp(value) : value;
}

// log|d theta / d phi| of the constraining transform, summed over parameters
inline double log_jacobian(const std::vector<double>& unconstrained,
                           const std::vector<Parameter>& spec) {
  double total = 0.0;
  for (std::size_t k = 0; k < spec.size(); ++k) {
    if (spec[k].support == ParameterSupport::kPositive) total += unconstrained[k];
  }
  return total;
}

}  // namespace detail

/// Particle-marginal Metropolis-Hastings over static parameters. Proposals
/// are a Gaussian random walk on the unconstrained scale; each proposal's
/// log-evidence comes from a fresh filter run on an independently derived
/// random stream, and the current state's estimate is reused across
/// iterations (required for pseudo-marginal validity). With an exact engine
/// (e.g. a Kalman filter) this reduces to plain Metropolis-Hastings. Filter
/// failures at a proposal reject it and are counted, never fatal.
template <class ModelBuilder, class LogPrior, class Alg, class Obs>
MarkovChain pmmh(Rng& rng, ModelBuilder&& build_model, LogPrior&& log_prior,
                 const std::vector<double>& proposal_scales, const Alg& engine,
                 const std::vector<Obs>& observations, int iterations,
                 const std::vector<Parameter>& initial) {
  const std::size_t dim = initial.size();
  if (proposal_scales.size() != dim) {
    throw DimensionError("pmmh: one proposal scale per parameter required");
  }

  auto run_filter = [&](const std::vector<double>& theta, Rng stream) {
    const auto model = build_model(theta);
    return ssmkit::filter(stream, model, engine, observations).second;
  };

  MarkovChain chain;
  chain.parameter_names.reserve(dim);
  std::vector<double> theta(dim);
  std::vector<double> phi(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    chain.parameter_names.push_back(initial[k].name);
    theta[k] = initial[k].value;
    phi[k] = detail::to_unconstrained(theta[k], initial[k].support);
  }

  double current_prior = log_prior(theta);
  if (!std::isfinite(current_prior)) {
    throw Error("pmmh: prior is not finite at the initial parameters");
  }
  double current_evidence = run_filter(theta, derive_rng(rng));
  double current_jacobian = detail::log_jacobian(phi, initial);
  chain.samples.push_back({theta, current_prior, current_evidence, false});

  std::vector<double> proposed_phi(dim);
  std::vector<double> proposed_theta(dim);
  for (int iter = 1; iter <= iterations; ++iter) {
    for (std::size_t k = 0; k < dim; ++k) {
      proposed_phi[k] = phi[k] + proposal_scales[k] * draw_normal(rng);
      proposed_theta[k] = detail::to_constrained(proposed_phi[k], initial[k].support);
    }
    const double uniform = draw_uniform(rng);  // drawn unconditionally to keep streams aligned

    const double proposed_prior = log_prior(proposed_theta);
    const double proposed_jacobian = detail::log_jacobian(proposed_phi, initial);
    bool accepted = false;
    if (proposed_prior != -std::numeric_limits<double>::infinity()) {
      double proposed_evidence = -std::numeric_limits<double>::infinity();
      bool filter_ok = true;
      try {
        proposed_evidence = run_filter(proposed_theta, derive_rng(rng, static_cast<std::uint64_t>(iter)));
      } catch (const Error&) {
        filter_ok = false;
        ++chain.failed_proposals;
      }
      if (filter_ok) {
        const double log_ratio = (proposed_evidence + proposed_prior + proposed_jacobian) -
                                 (current_evidence + current_prior + current_jacobian);
        accepted = std::log(uniform) < log_ratio;
      }
      if (accepted) {
        phi = proposed_phi;
        theta = proposed_theta;
        current_prior = proposed_prior;
        current_evidence = proposed_evidence;
        current_jacobian = proposed_jacobian;
      }
    }
    chain.samples.push_back({theta, current_prior, current_evidence, accepted});
  }
  return chain;
}

}  // namespace ssmkit
