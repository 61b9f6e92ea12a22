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
#include <vector>

#include "ssmkit/model.hpp"
#include "ssmkit/resampling.hpp"

namespace ssmkit::inflation {

/// Local-level trend model with stochastic volatility (UCSV), optionally with
/// one-period outlier variance scaling of the measurement error (UCSV-O).
enum class TrendVariant { kUcsv, kUcsvOutlier };

/// State layout: [trend, log transition volatility, log observation
/// volatility, outlier scale]. The outlier scale stays pinned at 1 for UCSV.
struct UcsvState {
  static constexpr int kTrend = 0;
  static constexpr int kLogTransitionVol = 1;
  static constexpr int kLogObservationVol = 2;
  static constexpr int kOutlierScale = 3;
  static constexpr int kDim = 4;
};

struct UcsvParams {
  double volatility_innovation_std = 0.2;
  double outlier_probability = 0.05;  // UCSV-O only
};

/// Random-walk trend with random-walk log-volatilities. Both variants share
/// one sampling path (UCSV is the outlier-probability-zero restriction), so
/// their output is bit-identical when the probability is zero.
class UcsvDynamics final : public LatentDynamics<double> {
 public:
  UcsvDynamics(TrendVariant variant, UcsvParams params, double trend_anchor);

  int state_dim() const override { return UcsvState::kDim; }

  Vector sample_initial(Rng& rng, const Context& ctx) const override;
  double logdensity_initial(const Vector& state, const Context& ctx) const override;
  Vector sample_transition(Rng& rng, int step, const Vector& prev_state,
                           const Context& ctx) const override;
  double logdensity_transition(int step, const Vector& prev_state, const Vector& new_state,
                               const Context& ctx) const override;

 private:
  TrendVariant variant_;
  UcsvParams params_;
  double trend_anchor_;  // initial trend centres on the first observation
};

/// Measurement of the trend with the state-dependent variance s * sigma^2.
class UcsvObservation final : public ObservationProcess<double> {
 public:
  int state_dim() const override { return UcsvState::kDim; }
  int obs_dim() const override { return 1; }

  Vector sample_observation(Rng& rng, int step, const Vector& state,
                            const Context& ctx) const override;
  double logdensity_observation(int step, const Vector& state, const Vector& observation,
                                const Context& ctx) const override;
};

StateSpaceModel<double> make_trend_model(TrendVariant variant, const UcsvParams& params,
                                         double trend_anchor);

/// Year-over-year percentage change of a quarterly index:
/// 100 * (x_t / x_{t-4} - 1). Output is four entries shorter than the input.
std::vector<double> pce_transform(const std::vector<double>& index);

/// Per-time-step smoothing quantiles (10/50/90%) of the trend and both
/// volatilities, extracted from the surviving lineages of the particle
/// genealogy and weighted by the final particle weights.
struct UcsvRun {
  std::vector<double> trend_q10, trend_q50, trend_q90;
  std::vector<double> obs_vol_q10, obs_vol_q50, obs_vol_q90;
  std::vector<double> trans_vol_q10, trans_vol_q50, trans_vol_q90;
  double log_evidence = 0.0;
};

UcsvRun run_ucsv(Rng& rng, const std::vector<double>& data, TrendVariant variant,
                 const UcsvParams& params, int num_particles, const Resampler& resampler,
                 int num_threads = 1);

/// Weighted quantile by cumulative-weight inversion (weights need not be
/// normalised).
double weighted_quantile(std::vector<double> values, std::vector<double> weights, double q);

}  // namespace ssmkit::inflation
