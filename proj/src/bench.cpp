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

#include "ssmkit/bench.hpp"

#include <chrono>
#include <cmath>
#include <thread>

#include "ssmkit/block_model.hpp"
#include "ssmkit/filter.hpp"
#include "ssmkit/kalman.hpp"
#include "ssmkit/rbpf.hpp"

namespace ssmkit::bench {

namespace {

using Clock = std::chrono::steady_clock;

double milliseconds_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

struct Moments {
  double mean = 0.0;
  double std_dev = 0.0;
};

Moments moments(const std::vector<double>& values) {
  Moments m;
  if (values.empty()) return m;
  for (const double v : values) m.mean += v;
  m.mean /= static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (const double v : values) ss += (v - m.mean) * (v - m.mean);
    m.std_dev = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return m;
}

// Mean wall time per predict/update step, first step excluded as warm-up.
double time_filter_run(Rng rng, const HierarchicalModel<double, LinearGaussianModel<double>>& model,
                       const RaoBlackwellisedFilter<KalmanFilter>& alg,
                       const std::vector<Vector>& observations) {
  auto state = initialise(rng, model, alg);
  double total_ms = 0.0;
  int timed_steps = 0;
  for (int t = 1; t <= static_cast<int>(observations.size()); ++t) {
    const auto start = Clock::now();
    auto [next, increment] =
        step(rng, model, alg, t, std::move(state), observations[static_cast<std::size_t>(t - 1)]);
    const double elapsed = milliseconds_since(start);
    state = std::move(next);
    if (t > 1) {
      total_ms += elapsed;
      ++timed_steps;
    }
  }
  return total_ms / timed_steps;
}

}  // namespace

std::vector<int> BenchConfig::default_grid() {
  std::vector<int> grid;
  for (int exponent = 4; exponent <= 17; ++exponent) grid.push_back(1 << exponent);
  return grid;
}

BenchResult bench_rbpf(const BenchConfig& config) {
  BenchResult result;
  result.num_threads = config.num_threads > 0
                           ? config.num_threads
                           : static_cast<int>(std::thread::hardware_concurrency());
  if (result.num_threads < 1) result.num_threads = 1;

  const std::vector<int> grid =
      config.particle_counts.empty() ? BenchConfig::default_grid() : config.particle_counts;

  Rng rng(config.seed);
  const auto block = make_block_model(rng, config.outer_dim, config.inner_dim, config.obs_dim);
  const auto model = block.hierarchical();

  Rng sim_rng = derive_rng(rng, 1);
  const auto observations =
      sample_trajectory(sim_rng, block.flattened(), config.num_steps + 1).second;

  for (const int n : grid) {
    BenchRow row;
    row.num_particles = n;

    std::vector<double> serial_times;
    std::vector<double> parallel_times;
    for (int rep = 0; rep < config.repetitions; ++rep) {
      const Rng rep_rng(mix64(config.seed, 1000 + static_cast<std::uint64_t>(rep)));
      RaoBlackwellisedFilter<KalmanFilter> serial{KalmanFilter{}, n, Resampler{}, 1};
      serial_times.push_back(time_filter_run(rep_rng, model, serial, observations));
      RaoBlackwellisedFilter<KalmanFilter> parallel{KalmanFilter{}, n, Resampler{},
                                                    result.num_threads};
      parallel_times.push_back(time_filter_run(rep_rng, model, parallel, observations));
    }
    const Moments serial = moments(serial_times);
    const Moments parallel = moments(parallel_times);
    row.serial_ms_mean = serial.mean;
    row.serial_ms_std = serial.std_dev;
    row.parallel_ms_mean = parallel.mean;
    row.parallel_ms_std = parallel.std_dev;

    std::vector<double> evidences;
    evidences.reserve(static_cast<std::size_t>(config.evidence_seeds));
    RaoBlackwellisedFilter<KalmanFilter> alg{KalmanFilter{}, n, Resampler{}, result.num_threads};
    for (int s = 0; s < config.evidence_seeds; ++s) {
      Rng seed_rng(mix64(config.seed, 2000 + static_cast<std::uint64_t>(s)));
      evidences.push_back(filter(seed_rng, model, alg, observations).second);
    }
    row.evidence_std = moments(evidences).std_dev;

    result.rows.push_back(row);
  }
  return result;
}

}  // namespace ssmkit::bench
