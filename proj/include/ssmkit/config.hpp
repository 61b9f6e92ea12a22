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
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace ssmkit::config {

enum class Engine { kKalman, kBootstrap, kRaoBlackwellised };

struct ResamplerConfig {
  std::string scheme = "systematic";  // or "multinomial"
  double ess_threshold = 0.5;
};

struct TrackOptions {
  std::string input;  // detections CSV; empty -> synthetic scenario
  double tau = 1.0;
  double detection_probability = 0.0;  // required, no default
  double clutter_rate = -1.0;          // required, no default
  std::vector<double> region;          // x_min, x_max, y_min, y_max
  int num_targets = 7;
  int num_steps = 50;
  std::vector<std::vector<double>> initial_states;  // required with input CSV
};

struct InflationOptions {
  std::string input;  // two-column CSV: date, index level
  std::string variant = "ucsv";  // or "ucsv-o"
  double gamma = 0.2;
  double outlier_probability = 0.05;
  int particles = 1 << 14;
  ResamplerConfig resampler{"systematic", 1.0};
};

struct LorenzOptions {
  int steps = 100;
  double dt = 0.025;
  int particles = 1024;
  double dynamics_noise = 0.3;
  double observation_noise = 0.5;
  double sigma = 10.0;
  double rho = 28.0;
  double beta = 8.0 / 3.0;
};

struct PmmhOptions {
  std::string input;  // one-column CSV of observations; empty -> simulated
  Engine engine = Engine::kKalman;
  int particles = 512;
  int iterations = 5000;
  double transition_coefficient = 0.9;
  double proposal_scale = 0.15;  // random-walk scale on the log-parameter scale
  double init_transition_noise = 1.0;
  double init_observation_noise = 1.0;
  int synthetic_steps = 100;  // length of simulated data when no input given
};

struct BenchOptions {
  int min_exponent = 4;
  int max_exponent = 17;
  int steps = 20;
  int repetitions = 5;
  int evidence_seeds = 30;
  int threads = 0;  // 0: hardware concurrency
};

struct RunConfig {
  std::string command;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  int threads = 1;
  std::variant<TrackOptions, InflationOptions, LorenzOptions, PmmhOptions, BenchOptions> options;
};

/// Parses and validates a JSON run configuration. Unknown keys, missing
/// required keys and type mismatches raise ConfigError.
RunConfig parse_run_config(const std::string& json_text);

/// Canonical JSON echo of a parsed configuration; parse(serialise(x)) is the
/// identity.
std::string serialise_run_config(const RunConfig& config);

}  // namespace ssmkit::config
