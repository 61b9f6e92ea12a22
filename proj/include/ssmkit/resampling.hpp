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

#include <vector>

#include "ssmkit/errors.hpp"
#include "ssmkit/numeric.hpp"
#include "ssmkit/random.hpp"

namespace ssmkit {

enum class ResamplingScheme { kMultinomial, kSystematic };

/// Conditional-resampling policy: resample when the effective sample size
/// drops below `ess_threshold * N`. A threshold of 1 resamples every step.
struct Resampler {
  ResamplingScheme scheme = ResamplingScheme::kSystematic;
  double ess_threshold = 0.5;

  bool triggers(double ess, int num_particles) const {
    if (!(ess_threshold > 0.0) || ess_threshold > 1.0) {
      throw Error("ESS threshold must lie in (0, 1]");
    }
    return ess_threshold >= 1.0 || ess < ess_threshold * num_particles;
  }
};

/// Effective sample size (sum w)^2 / sum w^2 of the normalised weights;
/// shift-invariant in log space. Lies in [1, N].
template <class Scalar>
Scalar effective_sample_size(const VectorX<Scalar>& log_weights) {
  const Scalar lse = logsumexp<Scalar>(log_weights);
  if (lse == negative_infinity<Scalar>()) {
    throw DegenerateEnsembleError("all particle weights are zero");
  }
  const Scalar lse_squared = logsumexp<Scalar>((log_weights * Scalar{2}).eval());
  return std::exp(Scalar{2} * lse - lse_squared);
}

/// Normalised probability-space weights.
template <class Scalar>
VectorX<Scalar> normalized_weights(const VectorX<Scalar>& log_weights) {
  const Scalar lse = logsumexp<Scalar>(log_weights);
  if (lse == negative_infinity<Scalar>()) {
    throw DegenerateEnsembleError("all particle weights are zero");
  }
  return ((log_weights.array() - lse).exp()).matrix();
}

namespace detail {

template <class Scalar>
std::vector<Scalar> cumulative_weights(const VectorX<Scalar>& log_weights) {
  const VectorX<Scalar> weights = normalized_weights(log_weights);
  std::vector<Scalar> cumulative(static_cast<std::size_t>(weights.size()));
  Scalar running{0};
  for (Eigen::Index i = 0; i < weights.size(); ++i) {
    running += weights[i];
    cumulative[static_cast<std::size_t>(i)] = running;
  }
  cumulative.back() = Scalar{1};  // guard against round-off at the top end
  return cumulative;
}

template <class Scalar>
int locate(const std::vector<Scalar>& cumulative, Scalar point) {
  int lo = 0;
  int hi = static_cast<int>(cumulative.size()) - 1;
  while (lo < hi) {
    const int mid = (lo + hi) / 2;
    if (cumulative[static_cast<std::size_t>(mid)] > point) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

}  // namespace detail

/// Multinomial resampling: independent categorical draws from the weights.
template <class Scalar>
std::vector<int> resample_multinomial(const VectorX<Scalar>& log_weights, int num_out, Rng& rng) {
  const auto cumulative = detail::cumulative_weights(log_weights);
  std::vector<int> ancestors(static_cast<std::size_t>(num_out));
  for (int i = 0; i < num_out; ++i) {
    ancestors[static_cast<std::size_t>(i)] = detail::locate(cumulative, Scalar(draw_uniform(rng)));
  }
  return ancestors;
}

/// Systematic resampling with an explicit offset in [0, 1): one stratified
/// point (j + offset) / num_out per output slot. Offspring counts are within
/// one of their expectation and the output is sorted ascending.
template <class Scalar>
std::vector<int> resample_systematic_with_offset(const VectorX<Scalar>& log_weights, int num_out,
                                                 double offset) {
  const auto cumulative = detail::cumulative_weights(log_weights);
  std::vector<int> ancestors(static_cast<std::size_t>(num_out));
  for (int j = 0; j < num_out; ++j) {
    const Scalar point = Scalar((j + offset) / num_out);
    ancestors[static_cast<std::size_t>(j)] = detail::locate(cumulative, point);
  }
  return ancestors;
}

template <class Scalar>
std::vector<int> resample_systematic(const VectorX<Scalar>& log_weights, int num_out, Rng& rng) {
  return resample_systematic_with_offset<Scalar>(log_weights, num_out, draw_uniform(rng));
}

template <class Scalar>
std::vector<int> resample(const Resampler& resampler, const VectorX<Scalar>& log_weights,
                          int num_out, Rng& rng) {
  switch (resampler.scheme) {
    case ResamplingScheme::kMultinomial:
      return resample_multinomial(log_weights, num_out, rng);
    case ResamplingScheme::kSystematic:
      return resample_systematic(log_weights, num_out, rng);
  }
  throw Error("unknown resampling scheme");
}

}  // namespace ssmkit
