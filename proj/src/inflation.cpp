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

#include "ssmkit/inflation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ssmkit/filter.hpp"
#include "ssmkit/genealogy.hpp"
#include "ssmkit/particle.hpp"

namespace ssmkit::inflation {

namespace {

constexpr double kInitialTrendStd = 5.0;
constexpr double kInitialLogVolStd = 1.0;

}  // namespace

UcsvDynamics::UcsvDynamics(TrendVariant variant, UcsvParams params, double trend_anchor)
    : variant_(variant), params_(params), trend_anchor_(trend_anchor) {
  if (!(params_.volatility_innovation_std > 0.0)) {
    throw Error("volatility innovation std must be positive");
  }
  if (params_.outlier_probability < 0.0 || params_.outlier_probability >= 1.0) {
    throw Error("outlier probability must lie in [0, 1)");
  }
}

Vector UcsvDynamics::sample_initial(Rng& rng, const Context&) const {
  Vector state(UcsvState::kDim);
  state[UcsvState::kTrend] = trend_anchor_ + kInitialTrendStd * draw_normal(rng);
  state[UcsvState::kLogTransitionVol] = kInitialLogVolStd * draw_normal(rng);
  state[UcsvState::kLogObservationVol] = kInitialLogVolStd * draw_normal(rng);
  state[UcsvState::kOutlierScale] = 1.0;
  return state;
}

double UcsvDynamics::logdensity_initial(const Vector& state, const Context&) const {
  double total = normal_logpdf<double>(state[UcsvState::kTrend], trend_anchor_,
                                       kInitialTrendStd * kInitialTrendStd);
  total += normal_logpdf<double>(state[UcsvState::kLogTransitionVol], 0.0,
                                 kInitialLogVolStd * kInitialLogVolStd);
  total += normal_logpdf<double>(state[UcsvState::kLogObservationVol], 0.0,
                                 kInitialLogVolStd * kInitialLogVolStd);
  if (state[UcsvState::kOutlierScale] != 1.0) return -std::numeric_limits<double>::infinity();
  return total;
}

Vector UcsvDynamics::sample_transition(Rng& rng, int /*step*/, const Vector& prev_state,
                                       const Context&) const {
  const double gamma = params_.volatility_innovation_std;
  Vector state(UcsvState::kDim);
  state[UcsvState::kTrend] =
      prev_state[UcsvState::kTrend] +
      std::exp(prev_state[UcsvState::kLogTransitionVol]) * draw_normal(rng);
  state[UcsvState::kLogTransitionVol] =
      prev_state[UcsvState::kLogTransitionVol] + gamma * draw_normal(rng);
  state[UcsvState::kLogObservationVol] =
      prev_state[UcsvState::kLogObservationVol] + gamma * draw_normal(rng);
  // Shared draw pattern for both variants; UCSV is exactly the probability-0
  // restriction, so equal seeds give bit-identical runs.
  const double outlier_draw = draw_uniform(rng);
  const double effective_probability =
      variant_ == TrendVariant::kUcsvOutlier ? params_.outlier_probability : 0.0;
  state[UcsvState::kOutlierScale] =
      outlier_draw < effective_probability ? draw_uniform(rng, 0.0, 2.0) : 1.0;
  return state;
}

double UcsvDynamics::logdensity_transition(int /*step*/, const Vector& prev_state,
                                           const Vector& new_state, const Context&) const {
  const double gamma_sq = params_.volatility_innovation_std * params_.volatility_innovation_std;
  const double trend_var = std::exp(2.0 * prev_state[UcsvState::kLogTransitionVol]);
  double total = normal_logpdf<double>(new_state[UcsvState::kTrend],
                                       prev_state[UcsvState::kTrend], trend_var);
  total += normal_logpdf<double>(new_state[UcsvState::kLogTransitionVol],
                                 prev_state[UcsvState::kLogTransitionVol], gamma_sq);
  total += normal_logpdf<double>(new_state[UcsvState::kLogObservationVol],
                                 prev_state[UcsvState::kLogObservationVol], gamma_sq);
  // Outlier-scale density w.r.t. the (atom at 1) + Lebesgue(0, 2) measure.
  const double p =
      variant_ == TrendVariant::kUcsvOutlier ? params_.outlier_probability : 0.0;
  const double s = new_state[UcsvState::kOutlierScale];
  if (s == 1.0) {
    total += std::log1p(-p);
  } else if (s > 0.0 && s < 2.0) {
    total += p > 0.0 ? std::log(p / 2.0) : -std::numeric_limits<double>::infinity();
  } else {
    return -std::numeric_limits<double>::infinity();
  }
  return total;
}

Vector UcsvObservation::sample_observation(Rng& rng, int /*step*/, const Vector& state,
                                           const Context&) const {
  const double std_dev = std::sqrt(state[UcsvState::kOutlierScale]) *
                         std::exp(state[UcsvState::kLogObservationVol]);
  Vector obs(1);
  obs[0] = state[UcsvState::kTrend] + std_dev * draw_normal(rng);
  return obs;
}

double UcsvObservation::logdensity_observation(int /*step*/, const Vector& state,
                                               const Vector& observation, const Context&) const {
  const double variance = state[UcsvState::kOutlierScale] *
                          std::exp(2.0 * state[UcsvState::kLogObservationVol]);
  return normal_logpdf<double>(observation[0], state[UcsvState::kTrend], variance);
}

StateSpaceModel<double> make_trend_model(TrendVariant variant, const UcsvParams& params,
                                         double trend_anchor) {
  return StateSpaceModel<double>(
      std::make_shared<const UcsvDynamics>(variant, params, trend_anchor),
      std::make_shared<const UcsvObservation>());
}

std::vector<double> pce_transform(const std::vector<double>& index) {
  if (index.size() <= 4) throw Error("index series must be longer than four quarters");
  std::vector<double> rates;
  rates.reserve(index.size() - 4);
  for (std::size_t t = 4; t < index.size(); ++t) {
    if (!(index[t] > 0.0) || !(index[t - 4] > 0.0)) {
      throw Error("index values must be positive");
    }
    rates.push_back(100.0 * (index[t] / index[t - 4] - 1.0));
  }
  return rates;
}

double weighted_quantile(std::vector<double> values, std::vector<double> weights, double q) {
  if (values.empty() || values.size() != weights.size()) {
    throw Error("weighted_quantile: need matching non-empty inputs");
  }
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  double total = 0.0;
  for (const double w : weights) total += w;
  double running = 0.0;
  for (const std::size_t idx : order) {
    running += weights[idx];
    if (running >= q * total) return values[idx];
  }
  return values[order.back()];
}

UcsvRun run_ucsv(Rng& rng, const std::vector<double>& data, TrendVariant variant,
                 const UcsvParams& params, int num_particles, const Resampler& resampler,
                 int num_threads) {
  if (data.empty()) throw Error("run_ucsv: no observations");

  const auto model = make_trend_model(variant, params, data.front());
  BootstrapFilter alg{num_particles, resampler, num_threads};

  std::vector<Vector> observations;
  observations.reserve(data.size());
  for (const double y : data) observations.push_back(Vector::Constant(1, y));

  AncestryTree<Vector> tree;
  auto observer = [&tree](int t, const ParticleContainer<Vector, double>& container) {
    if (t == 0) {
      tree.record_roots(container.filtered.particles);
    } else {
      tree.record_generation(container.filtered.particles, container.ancestors);
    }
  };

  auto [final_state, log_evidence] =
      filter(rng, model, alg, observations, {}, observer);

  const Vector final_weights = normalized_weights(final_state.filtered.log_weights);
  const int num_steps = static_cast<int>(data.size());

  // Column-major scratch: per time step, the N lineage values of each field.
  UcsvRun run;
  run.log_evidence = log_evidence;
  std::vector<std::vector<double>> trend(static_cast<std::size_t>(num_steps + 1));
  std::vector<std::vector<double>> obs_vol(static_cast<std::size_t>(num_steps + 1));
  std::vector<std::vector<double>> trans_vol(static_cast<std::size_t>(num_steps + 1));
  for (auto& column : trend) column.reserve(static_cast<std::size_t>(num_particles));
  for (auto& column : obs_vol) column.reserve(static_cast<std::size_t>(num_particles));
  for (auto& column : trans_vol) column.reserve(static_cast<std::size_t>(num_particles));

  for (int leaf = 0; leaf < num_particles; ++leaf) {
    const auto path = tree.extract_path(leaf);
    for (std::size_t t = 0; t < path.size(); ++t) {
      trend[t].push_back(path[t][UcsvState::kTrend]);
      obs_vol[t].push_back(std::exp(path[t][UcsvState::kLogObservationVol]));
      trans_vol[t].push_back(std::exp(path[t][UcsvState::kLogTransitionVol]));
    }
  }

  std::vector<double> weights(static_cast<std::size_t>(num_particles));
  for (int i = 0; i < num_particles; ++i) weights[static_cast<std::size_t>(i)] = final_weights[i];

  auto push_quantiles = [&weights](const std::vector<double>& column, std::vector<double>& q10,
                                   std::vector<double>& q50, std::vector<double>& q90) {
    q10.push_back(weighted_quantile(column, weights, 0.10));
    q50.push_back(weighted_quantile(column, weights, 0.50));
    q90.push_back(weighted_quantile(column, weights, 0.90));
  };

  // Skip the pre-data initial generation; quantiles align with observations.
  for (int t = 1; t <= num_steps; ++t) {
    push_quantiles(trend[static_cast<std::size_t>(t)], run.trend_q10, run.trend_q50, run.trend_q90);
    push_quantiles(obs_vol[static_cast<std::size_t>(t)], run.obs_vol_q10, run.obs_vol_q50,
                   run.obs_vol_q90);
    push_quantiles(trans_vol[static_cast<std::size_t>(t)], run.trans_vol_q10, run.trans_vol_q50,
                   run.trans_vol_q90);
  }
  return run;
}

}  // namespace ssmkit::inflation
