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

#include <cstdint>
#include <vector>

namespace ssmkit::bench {

struct BenchConfig {
  std::vector<int> particle_counts;  // default: powers of two, 2^4 .. 2^17
  int num_steps = 20;                // timed predict/update steps per repetition
  int repetitions = 5;
  int evidence_seeds = 30;           // seeds for the estimator-std column
  int num_threads = 0;               // 0: hardware concurrency
  std::uint64_t seed = 0;
  int outer_dim = 2;
  int inner_dim = 3;
  int obs_dim = 2;

  static std::vector<int> default_grid();
};

/// One row per particle count. Wall times are per predict/update step with
/// the first (warm-up) step excluded; the evidence column is the standard
/// deviation of the log-evidence estimate across seeds, which is
/// deterministic for a fixed seed, unlike the timings.
struct BenchRow {
  int num_particles = 0;
  double serial_ms_mean = 0.0;
  double serial_ms_std = 0.0;
  double parallel_ms_mean = 0.0;
  double parallel_ms_std = 0.0;
  double evidence_std = 0.0;
};

struct BenchResult {
  std::vector<BenchRow> rows;
  int num_threads = 0;
};

/// Times the Rao-Blackwellised filter on the randomly generated block model
/// in serial and data-parallel mode over the particle-count grid, and
/// measures the evidence-estimator spread across seeds.
BenchResult bench_rbpf(const BenchConfig& config);

}  // namespace ssmkit::bench
