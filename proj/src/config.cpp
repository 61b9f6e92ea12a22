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

#include "ssmkit/config.hpp"

#include <set>

#include <json.hpp>

#include "ssmkit/errors.hpp"

namespace ssmkit::config {

namespace {

using Json = nlohmann::ordered_json;

// Pulls keys out of the object and complains about leftovers, so typos in
// config files fail loudly instead of silently using defaults.
class KeyChecker {
 public:
  KeyChecker(const Json& object, std::string scope) : object_(object), scope_(std::move(scope)) {
    if (!object_.is_object()) throw ConfigError(scope_ + ": expected a JSON object");
  }

  const Json* find(const std::string& key) {
    consumed_.insert(key);
    const auto it = object_.find(key);
    return it == object_.end() ? nullptr : &*it;
  }

  const Json& require(const std::string& key) {
    const Json* value = find(key);
    if (value == nullptr) throw ConfigError(scope_ + ": missing required key '" + key + "'");
    return *value;
  }

  void finish() const {
    for (const auto& item : object_.items()) {
      if (consumed_.find(item.key()) == consumed_.end()) {
        throw ConfigError(scope_ + ": unknown key '" + item.key() + "'");
      }
    }
  }

 private:
  const Json& object_;
  std::string scope_;
  std::set<std::string> consumed_;
};

template <class T>
T as(const Json& value, const std::string& what) {
  try {
    return value.get<T>();
  } catch (const Json::exception&) {
    throw ConfigError("config value '" + what + "' has the wrong type");
  }
}

template <class T>
void maybe(KeyChecker& keys, const std::string& key, T& out) {
  if (const Json* value = keys.find(key)) out = as<T>(*value, key);
}

Engine parse_engine(const std::string& name) {
  if (name == "kalman") return Engine::kKalman;
  if (name == "bootstrap") return Engine::kBootstrap;
  if (name == "rbpf") return Engine::kRaoBlackwellised;
  throw ConfigError("unknown engine '" + name + "' (expected kalman, bootstrap or rbpf)");
}

std::string engine_name(Engine engine) {
  switch (engine) {
    case Engine::kKalman:
      return "kalman";
    case Engine::kBootstrap:
      return "bootstrap";
    case Engine::kRaoBlackwellised:
      return "rbpf";
  }
  return "kalman";
}

ResamplerConfig parse_resampler(KeyChecker& keys) {
  ResamplerConfig resampler;
  maybe(keys, "resampler", resampler.scheme);
  maybe(keys, "ess_threshold", resampler.ess_threshold);
  if (resampler.scheme != "systematic" && resampler.scheme != "multinomial") {
    throw ConfigError("resampler must be 'systematic' or 'multinomial'");
  }
  if (!(resampler.ess_threshold > 0.0) || resampler.ess_threshold > 1.0) {
    throw ConfigError("ess_threshold must lie in (0, 1]");
  }
  return resampler;
}

TrackOptions parse_track(KeyChecker& keys) {
  TrackOptions options;
  maybe(keys, "input", options.input);
  maybe(keys, "tau", options.tau);
  options.detection_probability = as<double>(keys.require("detection_probability"),
                                             "detection_probability");
  options.clutter_rate = as<double>(keys.require("clutter_rate"), "clutter_rate");
  options.region = as<std::vector<double>>(keys.require("region"), "region");
  maybe(keys, "num_targets", options.num_targets);
  maybe(keys, "num_steps", options.num_steps);
  maybe(keys, "initial_states", options.initial_states);

  if (options.region.size() != 4) {
    throw ConfigError("region must be [x_min, x_max, y_min, y_max]");
  }
  if (options.region[0] >= options.region[1] || options.region[2] >= options.region[3]) {
    throw ConfigError("region bounds must satisfy min < max");
  }
  if (!(options.detection_probability > 0.0) || options.detection_probability > 1.0) {
    throw ConfigError("detection_probability must lie in (0, 1]");
  }
  if (options.clutter_rate < 0.0) throw ConfigError("clutter_rate must be non-negative");
  if (!options.input.empty() && options.initial_states.empty()) {
    throw ConfigError("initial_states is required when tracking detections from a CSV");
  }
  for (const auto& state : options.initial_states) {
    if (state.size() != 4) {
      throw ConfigError("each initial state must be [pos_x, vel_x, pos_y, vel_y]");
    }
  }
  return options;
}

InflationOptions parse_inflation(KeyChecker& keys) {
  InflationOptions options;
  options.input = as<std::string>(keys.require("input"), "input");
  maybe(keys, "variant", options.variant);
  maybe(keys, "gamma", options.gamma);
  maybe(keys, "outlier_probability", options.outlier_probability);
  maybe(keys, "particles", options.particles);
  options.resampler = parse_resampler(keys);
  if (options.variant != "ucsv" && options.variant != "ucsv-o") {
    throw ConfigError("variant must be 'ucsv' or 'ucsv-o'");
  }
  if (!(options.gamma > 0.0)) throw ConfigError("gamma must be positive");
  if (options.particles < 1) throw ConfigError("particles must be at least 1");
  return options;
}

LorenzOptions parse_lorenz(KeyChecker& keys) {
  LorenzOptions options;
  maybe(keys, "steps", options.steps);
  maybe(keys, "dt", options.dt);
  maybe(keys, "particles", options.particles);
  maybe(keys, "dynamics_noise", options.dynamics_noise);
  maybe(keys, "observation_noise", options.observation_noise);
  maybe(keys, "sigma", options.sigma);
  maybe(keys, "rho", options.rho);
  maybe(keys, "beta", options.beta);
  if (options.steps < 1 || options.particles < 1) {
    throw ConfigError("steps and particles must be at least 1");
  }
  if (!(options.dt > 0.0)) throw ConfigError("dt must be positive");
  return options;
}

PmmhOptions parse_pmmh(KeyChecker& keys) {
  PmmhOptions options;
  maybe(keys, "input", options.input);
  if (const Json* engine = keys.find("engine")) {
    options.engine = parse_engine(as<std::string>(*engine, "engine"));
  }
  maybe(keys, "particles", options.particles);
  maybe(keys, "iterations", options.iterations);
  maybe(keys, "transition_coefficient", options.transition_coefficient);
  maybe(keys, "proposal_scale", options.proposal_scale);
  maybe(keys, "init_transition_noise", options.init_transition_noise);
  maybe(keys, "init_observation_noise", options.init_observation_noise);
  maybe(keys, "synthetic_steps", options.synthetic_steps);
  if (options.engine == Engine::kRaoBlackwellised) {
    throw ConfigError("the pmmh command samples a scalar model; use engine kalman or bootstrap");
  }
  if (options.iterations < 1) throw ConfigError("iterations must be at least 1");
  if (options.particles < 1) throw ConfigError("particles must be at least 1");
  return options;
}

BenchOptions parse_bench(KeyChecker& keys) {
  BenchOptions options;
  maybe(keys, "min_exponent", options.min_exponent);
  maybe(keys, "max_exponent", options.max_exponent);
  maybe(keys, "steps", options.steps);
  maybe(keys, "repetitions", options.repetitions);
  maybe(keys, "evidence_seeds", options.evidence_seeds);
  maybe(keys, "threads", options.threads);
  if (options.min_exponent < 0 || options.max_exponent < options.min_exponent) {
    throw ConfigError("need 0 <= min_exponent <= max_exponent");
  }
  if (options.max_exponent > 24) throw ConfigError("max_exponent above 24 is not supported");
  return options;
}

}  // namespace

RunConfig parse_run_config(const std::string& json_text) {
  Json root;
  try {
    root = Json::parse(json_text);
  } catch (const Json::exception& err) {
    throw ConfigError(std::string("config is not valid JSON: ") + err.what());
  }
  KeyChecker keys(root, "config");
  RunConfig config;
  config.command = as<std::string>(keys.require("command"), "command");
  maybe(keys, "seed", config.seed);
  maybe(keys, "out", config.out_dir);
  maybe(keys, "threads", config.threads);
  if (config.threads < 0) throw ConfigError("threads must be non-negative");

  if (config.command == "track") {
    config.options = parse_track(keys);
  } else if (config.command == "inflation") {
    config.options = parse_inflation(keys);
  } else if (config.command == "lorenz") {
    config.options = parse_lorenz(keys);
  } else if (config.command == "pmmh") {
    config.options = parse_pmmh(keys);
  } else if (config.command == "bench") {
    config.options = parse_bench(keys);
  } else {
    throw ConfigError("unknown command '" + config.command +
                      "' (expected track, inflation, lorenz, pmmh or bench)");
  }
  keys.finish();
  return config;
}

std::string serialise_run_config(const RunConfig& config) {
  Json root;
  root["command"] = config.command;
  root["seed"] = config.seed;
  root["out"] = config.out_dir;
  root["threads"] = config.threads;
  if (const auto* track = std::get_if<TrackOptions>(&config.options)) {
    if (!track->input.empty()) root["input"] = track->input;
    root["tau"] = track->tau;
    root["detection_probability"] = track->detection_probability;
    root["clutter_rate"] = track->clutter_rate;
    root["region"] = track->region;
    root["num_targets"] = track->num_targets;
    root["num_steps"] = track->num_steps;
    if (!track->initial_states.empty()) root["initial_states"] = track->initial_states;
  } else if (const auto* inflation = std::get_if<InflationOptions>(&config.options)) {
    root["input"] = inflation->input;
    root["variant"] = inflation->variant;
    root["gamma"] = inflation->gamma;
    root["outlier_probability"] = inflation->outlier_probability;
    root["particles"] = inflation->particles;
    root["resampler"] = inflation->resampler.scheme;
    root["ess_threshold"] = inflation->resampler.ess_threshold;
  } else if (const auto* lorenz = std::get_if<LorenzOptions>(&config.options)) {
    root["steps"] = lorenz->steps;
    root["dt"] = lorenz->dt;
    root["particles"] = lorenz->particles;
    root["dynamics_noise"] = lorenz->dynamics_noise;
    root["observation_noise"] = lorenz->observation_noise;
    root["sigma"] = lorenz->sigma;
    root["rho"] = lorenz->rho;
    root["beta"] = lorenz->beta;
  } else if (const auto* pmmh = std::get_if<PmmhOptions>(&config.options)) {
    if (!pmmh->input.empty()) root["input"] = pmmh->input;
    root["engine"] = engine_name(pmmh->engine);
    root["particles"] = pmmh->particles;
    root["iterations"] = pmmh->iterations;
    root["transition_coefficient"] = pmmh->transition_coefficient;
    root["proposal_scale"] = pmmh->proposal_scale;
    root["init_transition_noise"] = pmmh->init_transition_noise;
    root["init_observation_noise"] = pmmh->init_observation_noise;
    root["synthetic_steps"] = pmmh->synthetic_steps;
  } else if (const auto* bench = std::get_if<BenchOptions>(&config.options)) {
    root["min_exponent"] = bench->min_exponent;
    root["max_exponent"] = bench->max_exponent;
    root["steps"] = bench->steps;
    root["repetitions"] = bench->repetitions;
    root["evidence_seeds"] = bench->evidence_seeds;
    root["threads"] = bench->threads;
  }
  return root.dump(2);
}

}  // namespace ssmkit::config
