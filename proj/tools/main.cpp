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

// Command-line front end. Builds a JSON run configuration from an optional
// config file plus flags (flags win) and hands it to the ssmkit shared
// library through its C interface.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "ssmkit.h"

namespace {

using Json = nlohmann::ordered_json;

constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 1;

struct CommonFlags {
  std::string config_path;
  std::uint64_t seed = 0;
  std::string out_dir;
  int threads = -1;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "JSON config file; flags override its keys");
  cmd->add_option("--seed", flags.seed, "random seed");
  cmd->add_option("--out", flags.out_dir, "output directory");
  cmd->add_option("--threads", flags.threads, "worker threads for data-parallel execution");
}

Json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return Json::parse(buffer.str());
}

// Flags that the user actually set override config-file keys.
void apply(Json& config, const CLI::App* cmd, const std::string& flag, const Json& value) {
  if (cmd->count("--" + flag) > 0) config[flag] = value;
}

int execute(Json config, const std::string& command, const CommonFlags& flags,
            const CLI::App* cmd) {
  config["command"] = command;
  if (cmd->count("--seed") > 0 || !config.contains("seed")) config["seed"] = flags.seed;
  if (cmd->count("--out") > 0 || !config.contains("out")) {
    config["out"] = flags.out_dir.empty() ? std::string(".") : flags.out_dir;
  }
  if (cmd->count("--threads") > 0) config["threads"] = flags.threads;

  char* metadata = nullptr;
  const ssm_status status = ssm_run_json(config.dump().c_str(), &metadata);
  if (status != SSM_OK) {
    std::cerr << "error (" << ssm_status_name(status) << "): " << ssm_last_error() << "\n";
    return status == SSM_ERROR_CONFIG ? kExitUsage : kExitRuntime;
  }
  if (metadata != nullptr) {
    std::cout << metadata;
    ssm_string_free(metadata);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"State space model filtering toolkit"};
  app.set_version_flag("--version", std::string(ssm_version()));
  app.require_subcommand(1);

  // track
  auto* track = app.add_subcommand("track", "multi-object tracking with GNN data association");
  CommonFlags track_common;
  add_common(track, track_common);
  std::string track_input;
  double tau = 1.0, detection_probability = 0.0, clutter_rate = 0.0;
  std::vector<double> region;
  int num_targets = 7, num_steps = 50;
  track->add_option("--input", track_input, "detections CSV (frame,x,y); omit for synthetic data");
  track->add_option("--tau", tau, "time interval between scans");
  track->add_option("--detection-probability", detection_probability,
                    "per-target detection probability (required)");
  track->add_option("--clutter-rate", clutter_rate, "expected clutter count per scan (required)");
  track->add_option("--region", region, "surveillance region: x_min x_max y_min y_max")
      ->expected(4);
  track->add_option("--num-targets", num_targets, "targets in the synthetic scenario");
  track->add_option("--num-steps", num_steps, "steps in the synthetic scenario");

  // inflation
  auto* inflation = app.add_subcommand("inflation", "trend inflation via UCSV / UCSV-O");
  CommonFlags inflation_common;
  add_common(inflation, inflation_common);
  std::string inflation_input, variant = "ucsv", resampler = "systematic";
  double gamma = 0.2, outlier_probability = 0.05, ess_threshold = 1.0;
  int inflation_particles = 1 << 14;
  inflation->add_option("--input", inflation_input, "quarterly index CSV: date, level (required)");
  inflation->add_option("--variant", variant, "ucsv or ucsv-o");
  inflation->add_option("--gamma", gamma, "volatility innovation std");
  inflation->add_option("--outlier-probability", outlier_probability,
                        "per-quarter outlier probability (ucsv-o)");
  inflation->add_option("--particles", inflation_particles, "particle count");
  inflation->add_option("--resampler", resampler, "systematic or multinomial");
  inflation->add_option("--ess-threshold", ess_threshold, "resampling trigger in (0,1]");

  // lorenz
  auto* lorenz = app.add_subcommand("lorenz", "Lorenz 63 data assimilation");
  CommonFlags lorenz_common;
  add_common(lorenz, lorenz_common);
  int lorenz_steps = 100, lorenz_particles = 1024;
  double dt = 0.025, dynamics_noise = 0.3, observation_noise = 0.5;
  double sigma = 10.0, rho = 28.0, beta = 8.0 / 3.0;
  lorenz->add_option("--steps", lorenz_steps, "assimilation steps");
  lorenz->add_option("--dt", dt, "integrator step size");
  lorenz->add_option("--particles", lorenz_particles, "particle count");
  lorenz->add_option("--dynamics-noise", dynamics_noise, "dynamics noise std");
  lorenz->add_option("--observation-noise", observation_noise, "observation noise std");
  lorenz->add_option("--sigma", sigma, "Lorenz sigma");
  lorenz->add_option("--rho", rho, "Lorenz rho");
  lorenz->add_option("--beta", beta, "Lorenz beta");

  // pmmh
  auto* pmmh = app.add_subcommand("pmmh", "parameter inference by particle-marginal MH");
  CommonFlags pmmh_common;
  add_common(pmmh, pmmh_common);
  std::string pmmh_input, engine = "kalman";
  int pmmh_particles = 512, iterations = 5000;
  double proposal_scale = 0.15, transition_coefficient = 0.9;
  pmmh->add_option("--input", pmmh_input, "observations CSV (one column); omit to simulate");
  pmmh->add_option("--engine", engine, "kalman (exact) or bootstrap (pseudo-marginal)");
  pmmh->add_option("--particles", pmmh_particles, "particles for the bootstrap engine");
  pmmh->add_option("--iterations", iterations, "MH iterations");
  pmmh->add_option("--proposal-scale", proposal_scale, "random-walk scale (log space)");
  pmmh->add_option("--transition-coefficient", transition_coefficient,
                   "autoregressive coefficient of the scalar model");

  // bench
  auto* bench = app.add_subcommand("bench", "Rao-Blackwellised filter scaling benchmark");
  CommonFlags bench_common;
  add_common(bench, bench_common);
  int min_exponent = 4, max_exponent = 17, bench_steps = 20, repetitions = 5, evidence_seeds = 30;
  bench->add_option("--min-exponent", min_exponent, "smallest particle count as a power of two");
  bench->add_option("--max-exponent", max_exponent, "largest particle count as a power of two");
  bench->add_option("--steps", bench_steps, "timed steps per repetition");
  bench->add_option("--repetitions", repetitions, "timing repetitions per grid point");
  bench->add_option("--evidence-seeds", evidence_seeds, "seeds for the estimator-std column");

  CLI11_PARSE(app, argc, argv);

  try {
    if (track->parsed()) {
      Json config = track_common.config_path.empty() ? Json::object()
                                                     : load_config_file(track_common.config_path);
      apply(config, track, "input", track_input);
      apply(config, track, "tau", tau);
      if (track->count("--detection-probability") > 0) {
        config["detection_probability"] = detection_probability;
      }
      if (track->count("--clutter-rate") > 0) config["clutter_rate"] = clutter_rate;
      if (track->count("--region") > 0) config["region"] = region;
      if (track->count("--num-targets") > 0) config["num_targets"] = num_targets;
      if (track->count("--num-steps") > 0) config["num_steps"] = num_steps;
      return execute(std::move(config), "track", track_common, track);
    }
    if (inflation->parsed()) {
      Json config = inflation_common.config_path.empty()
                        ? Json::object()
                        : load_config_file(inflation_common.config_path);
      apply(config, inflation, "input", inflation_input);
      apply(config, inflation, "variant", variant);
      apply(config, inflation, "gamma", gamma);
      if (inflation->count("--outlier-probability") > 0) {
        config["outlier_probability"] = outlier_probability;
      }
      apply(config, inflation, "particles", inflation_particles);
      apply(config, inflation, "resampler", resampler);
      if (inflation->count("--ess-threshold") > 0) config["ess_threshold"] = ess_threshold;
      return execute(std::move(config), "inflation", inflation_common, inflation);
    }
    if (lorenz->parsed()) {
      Json config = lorenz_common.config_path.empty()
                        ? Json::object()
                        : load_config_file(lorenz_common.config_path);
      apply(config, lorenz, "steps", lorenz_steps);
      apply(config, lorenz, "dt", dt);
      apply(config, lorenz, "particles", lorenz_particles);
      if (lorenz->count("--dynamics-noise") > 0) config["dynamics_noise"] = dynamics_noise;
      if (lorenz->count("--observation-noise") > 0) {
        config["observation_noise"] = observation_noise;
      }
      apply(config, lorenz, "sigma", sigma);
      apply(config, lorenz, "rho", rho);
      apply(config, lorenz, "beta", beta);
      return execute(std::move(config), "lorenz", lorenz_common, lorenz);
    }
    if (pmmh->parsed()) {
      Json config = pmmh_common.config_path.empty() ? Json::object()
                                                    : load_config_file(pmmh_common.config_path);
      apply(config, pmmh, "input", pmmh_input);
      apply(config, pmmh, "engine", engine);
      apply(config, pmmh, "particles", pmmh_particles);
      apply(config, pmmh, "iterations", iterations);
      if (pmmh->count("--proposal-scale") > 0) config["proposal_scale"] = proposal_scale;
      if (pmmh->count("--transition-coefficient") > 0) {
        config["transition_coefficient"] = transition_coefficient;
      }
      return execute(std::move(config), "pmmh", pmmh_common, pmmh);
    }
    if (bench->parsed()) {
      Json config = bench_common.config_path.empty() ? Json::object()
                                                     : load_config_file(bench_common.config_path);
      if (bench->count("--min-exponent") > 0) config["min_exponent"] = min_exponent;
      if (bench->count("--max-exponent") > 0) config["max_exponent"] = max_exponent;
      apply(config, bench, "steps", bench_steps);
      apply(config, bench, "repetitions", repetitions);
      if (bench->count("--evidence-seeds") > 0) config["evidence_seeds"] = evidence_seeds;
      return execute(std::move(config), "bench", bench_common, bench);
    }
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
