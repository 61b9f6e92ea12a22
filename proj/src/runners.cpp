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

#include "ssmkit/runners.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>

#include <json.hpp>

#include "ssmkit/bench.hpp"
#include "ssmkit/csv.hpp"
#include "ssmkit/filter.hpp"
#include "ssmkit/inflation.hpp"
#include "ssmkit/kalman.hpp"
#include "ssmkit/lorenz63.hpp"
#include "ssmkit/pmmh.hpp"
#include "ssmkit/tracking.hpp"
#include "ssmkit/version.hpp"

namespace ssmkit::run {

namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

struct RunContext {
  fs::path out_dir;
  Json outputs = Json::array();
  Json metrics = Json::object();

  std::string path(const std::string& name) {
    outputs.push_back(name);
    return (out_dir / name).string();
  }
};

Resampler to_resampler(const config::ResamplerConfig& cfg) {
  Resampler resampler;
  resampler.scheme = cfg.scheme == "multinomial" ? ResamplingScheme::kMultinomial
                                                 : ResamplingScheme::kSystematic;
  resampler.ess_threshold = cfg.ess_threshold;
  return resampler;
}

// --- track -------------------------------------------------------------------

std::vector<tracking::Scan> read_detections(const std::string& path) {
  const csv::Table table = csv::read_table(path);
  if (table.header.size() != 3 || table.header[0] != "frame") {
    throw IoError("detections CSV must have columns frame,x,y");
  }
  std::map<int, std::vector<Vector>> by_frame;
  for (const auto& row : table.rows) {
    const int frame = static_cast<int>(csv::parse_double(row[0]));
    Vector point(2);
    point << csv::parse_double(row[1]), csv::parse_double(row[2]);
    by_frame[frame].push_back(std::move(point));
  }
  std::vector<tracking::Scan> scans;
  scans.reserve(by_frame.size());
  for (auto& [frame, measurements] : by_frame) {
    scans.push_back(tracking::Scan{frame, std::move(measurements)});
  }
  return scans;
}

void run_track(const config::RunConfig& config, const config::TrackOptions& options,
               RunContext& ctx) {
  const auto cv = tracking::constant_velocity_matrices(options.tau);
  tracking::SensorModel sensor{options.detection_probability, cv.observation,
                               cv.measurement_noise};
  tracking::ClutterModel clutter{options.clutter_rate, options.region[0], options.region[1],
                                 options.region[2], options.region[3]};
  const LinearGaussianDynamics<double> dynamics(
      cv.transition, Vector::Zero(4), cv.process_noise, Vector::Zero(4), Matrix::Identity(4, 4));

  Rng rng(config.seed);
  std::vector<tracking::Scan> scans;
  std::vector<std::vector<Vector>> truth;  // [step][target], synthetic only
  std::vector<Vector> initial_states;

  if (options.input.empty()) {
    // Synthetic scenario: targets start on a grid inside the region and move
    // with near-constant-velocity dynamics.
    const Matrix noise_sqrt = psd_sqrt<double>(cv.process_noise);
    const double margin_x = 0.25 * (clutter.x_max - clutter.x_min);
    const double margin_y = 0.25 * (clutter.y_max - clutter.y_min);
    for (int k = 0; k < options.num_targets; ++k) {
      const double frac = options.num_targets > 1
                              ? static_cast<double>(k) / (options.num_targets - 1)
                              : 0.5;
      Vector state(4);
      state << clutter.x_min + margin_x + frac * (clutter.x_max - clutter.x_min - 2 * margin_x),
          0.5 * draw_normal(rng),
          clutter.y_min + margin_y + (k % 2 == 0 ? frac : 1.0 - frac) *
                                         (clutter.y_max - clutter.y_min - 2 * margin_y),
          0.5 * draw_normal(rng);
      initial_states.push_back(std::move(state));
    }
    std::vector<Vector> current = initial_states;
    for (int n = 1; n <= options.num_steps; ++n) {
      for (auto& state : current) {
        Vector z(4);
        for (int i = 0; i < 4; ++i) z[i] = draw_normal(rng);
        state = cv.transition * state + noise_sqrt * z;
      }
      truth.push_back(current);
      scans.push_back(simulate_scan(rng, current, sensor, clutter, n));
    }
  } else {
    scans = read_detections(options.input);
    for (const auto& state : options.initial_states) {
      Vector v(4);
      v << state[0], state[1], state[2], state[3];
      initial_states.push_back(std::move(v));
    }
  }

  {
    csv::Writer detections(ctx.path("detections.csv"), {"frame", "x", "y"});
    for (const auto& scan : scans) {
      for (const auto& m : scan.measurements) {
        detections.write_row(std::vector<double>{static_cast<double>(scan.time_index), m[0], m[1]});
      }
    }
  }
  if (!truth.empty()) {
    csv::Writer truth_csv(ctx.path("truth.csv"), {"frame", "target", "x", "y"});
    for (std::size_t n = 0; n < truth.size(); ++n) {
      for (std::size_t k = 0; k < truth[n].size(); ++k) {
        truth_csv.write_row(std::vector<double>{static_cast<double>(scans[n].time_index),
                                                static_cast<double>(k), truth[n][k][0],
                                                truth[n][k][2]});
      }
    }
  }

  std::vector<GaussianBelief<double>> beliefs;
  for (const auto& state : initial_states) {
    beliefs.push_back(GaussianBelief<double>{state, Matrix::Identity(4, 4)});
  }

  csv::Writer tracks(ctx.path("tracks.csv"), {"frame", "target", "x", "y"});
  csv::Writer associations(ctx.path("associations.csv"), {"frame", "target", "measurement"});
  double sum_sq_error = 0.0;
  int error_count = 0;
  for (std::size_t n = 0; n < scans.size(); ++n) {
    auto result = gnn_track_step(beliefs, scans[n], sensor, clutter, dynamics);
    beliefs = std::move(result.beliefs);
    for (std::size_t k = 0; k < beliefs.size(); ++k) {
      tracks.write_row(std::vector<double>{static_cast<double>(scans[n].time_index),
                                           static_cast<double>(k), beliefs[k].mean[0],
                                           beliefs[k].mean[2]});
      associations.write_row(std::vector<double>{static_cast<double>(scans[n].time_index),
                                                 static_cast<double>(k),
                                                 static_cast<double>(result.association[k])});
      if (!truth.empty()) {
        const double dx = beliefs[k].mean[0] - truth[n][k][0];
        const double dy = beliefs[k].mean[2] - truth[n][k][2];
        sum_sq_error += dx * dx + dy * dy;
        ++error_count;
      }
    }
  }
  if (error_count > 0) {
    ctx.metrics["position_rmse"] = std::sqrt(sum_sq_error / error_count);
  }
  ctx.metrics["num_scans"] = scans.size();
}

// --- inflation ---------------------------------------------------------------

void run_inflation(const config::RunConfig& config, const config::InflationOptions& options,
                   RunContext& ctx) {
  const csv::Table table = csv::read_table(options.input);
  if (table.header.size() != 2) {
    throw IoError("inflation input must be a two-column CSV: date, index level");
  }
  std::vector<std::string> dates;
  std::vector<double> index;
  for (const auto& row : table.rows) {
    dates.push_back(row[0]);
    index.push_back(csv::parse_double(row[1]));
  }
  const std::vector<double> rates = inflation::pce_transform(index);

  const auto variant = options.variant == "ucsv-o" ? inflation::TrendVariant::kUcsvOutlier
                                                   : inflation::TrendVariant::kUcsv;
  inflation::UcsvParams params{options.gamma, options.outlier_probability};
  Rng rng(config.seed);
  const auto result = inflation::run_ucsv(rng, rates, variant, params, options.particles,
                                          to_resampler(options.resampler), config.threads);

  csv::Writer quantiles(ctx.path("quantiles.csv"),
                        {"date", "trend_q10", "trend_q50", "trend_q90", "obs_vol_q10",
                         "obs_vol_q50", "obs_vol_q90", "trans_vol_q10", "trans_vol_q50",
                         "trans_vol_q90"});
  for (std::size_t t = 0; t < rates.size(); ++t) {
    quantiles.write_row(std::vector<std::string>{
        dates[t + 4], csv::format_double(result.trend_q10[t]),
        csv::format_double(result.trend_q50[t]), csv::format_double(result.trend_q90[t]),
        csv::format_double(result.obs_vol_q10[t]), csv::format_double(result.obs_vol_q50[t]),
        csv::format_double(result.obs_vol_q90[t]), csv::format_double(result.trans_vol_q10[t]),
        csv::format_double(result.trans_vol_q50[t]), csv::format_double(result.trans_vol_q90[t])});
  }
  ctx.metrics["log_evidence"] = result.log_evidence;
  ctx.metrics["num_quarters"] = rates.size();
}

// --- lorenz ------------------------------------------------------------------

void run_lorenz(const config::RunConfig& config, const config::LorenzOptions& options,
                RunContext& ctx) {
  lorenz::AssimilationConfig assimilation;
  assimilation.num_steps = options.steps;
  assimilation.params = lorenz::Lorenz63Params{options.sigma, options.rho, options.beta,
                                               options.dt};
  assimilation.num_particles = options.particles;
  assimilation.noise = lorenz::AssimilationNoise{options.dynamics_noise,
                                                 options.observation_noise};
  assimilation.num_threads = config.threads;

  Rng rng(config.seed);
  const auto result = lorenz::run_assimilation(rng, assimilation);

  {
    csv::Writer reference(ctx.path("reference.csv"), {"step", "x", "y", "z"});
    for (std::size_t t = 0; t < result.reference.size(); ++t) {
      reference.write_row(std::vector<double>{static_cast<double>(t), result.reference[t][0],
                                              result.reference[t][1], result.reference[t][2]});
    }
  }
  {
    csv::Writer observations(ctx.path("observations.csv"), {"step", "y"});
    for (std::size_t t = 0; t < result.observations.size(); ++t) {
      observations.write_row(
          std::vector<double>{static_cast<double>(t + 1), result.observations[t]});
    }
  }
  {
    csv::Writer filtered(ctx.path("filtered.csv"), {"step", "x", "y", "z"});
    for (std::size_t t = 0; t < result.filtered_means.size(); ++t) {
      filtered.write_row(std::vector<double>{static_cast<double>(t + 1),
                                             result.filtered_means[t][0],
                                             result.filtered_means[t][1],
                                             result.filtered_means[t][2]});
    }
  }
  {
    csv::Writer paths(ctx.path("paths.csv"), {"path", "step", "x", "y", "z"});
    for (std::size_t leaf = 0; leaf < result.particle_paths.size(); ++leaf) {
      const auto& path = result.particle_paths[leaf];
      for (std::size_t t = 0; t < path.size(); ++t) {
        paths.write_row(std::vector<double>{static_cast<double>(leaf), static_cast<double>(t),
                                            path[t][0], path[t][1], path[t][2]});
      }
    }
  }
  ctx.metrics["log_evidence"] = result.log_evidence;
  ctx.metrics["rmse_x"] = result.rmse[0];
  ctx.metrics["rmse_y"] = result.rmse[1];
  ctx.metrics["rmse_z"] = result.rmse[2];
}

// --- pmmh --------------------------------------------------------------------

void run_pmmh(const config::RunConfig& config, const config::PmmhOptions& options,
              RunContext& ctx) {
  Rng rng(config.seed);

  // Scalar autoregressive model with unknown noise scales: the parameters are
  // theta = (transition noise std, observation noise std).
  const double coeff = options.transition_coefficient;
  auto build = [coeff](const std::vector<double>& theta) {
    return make_linear_gaussian_model<double>(
        Matrix::Constant(1, 1, coeff), Vector::Zero(1),
        Matrix::Constant(1, 1, theta[0] * theta[0]), Vector::Zero(1), Matrix::Identity(1, 1),
        Matrix::Identity(1, 1), Matrix::Constant(1, 1, theta[1] * theta[1]));
  };
  auto log_prior = [](const std::vector<double>& theta) {
    return inverse_gamma_logpdf(theta[0], 2.0, 3.0) + inverse_gamma_logpdf(theta[1], 2.0, 3.0);
  };

  std::vector<Vector> observations;
  if (options.input.empty()) {
    const auto truth_model = build({options.init_transition_noise,
                                    options.init_observation_noise});
    Rng sim_rng = derive_rng(rng, 7);
    observations = sample_trajectory(sim_rng, truth_model, options.synthetic_steps).second;
  } else {
    const csv::Table table = csv::read_table(options.input);
    if (table.header.empty()) throw IoError("pmmh input CSV needs at least one column");
    for (const auto& row : table.rows) {
      observations.push_back(Vector::Constant(1, csv::parse_double(row[0])));
    }
    if (observations.empty()) throw IoError("pmmh input CSV has no observations");
  }

  const std::vector<Parameter> initial{
      {"transition_noise", options.init_transition_noise, ParameterSupport::kPositive},
      {"observation_noise", options.init_observation_noise, ParameterSupport::kPositive}};
  const std::vector<double> scales{options.proposal_scale, options.proposal_scale};

  MarkovChain chain;
  if (options.engine == config::Engine::kKalman) {
    chain = pmmh(rng, build, log_prior, scales, KalmanFilter{}, observations, options.iterations,
                 initial);
  } else {
    auto generic_build = [&build](const std::vector<double>& theta) {
      return StateSpaceModel<double>(build(theta));
    };
    const BootstrapFilter alg{options.particles, Resampler{}, config.threads};
    chain = pmmh(rng, generic_build, log_prior, scales, alg, observations, options.iterations,
                 initial);
  }

  csv::Writer chain_csv(ctx.path("chain.csv"), {"iteration", "transition_noise",
                                                "observation_noise", "log_evidence", "accepted"});
  double mean_transition = 0.0;
  double mean_observation = 0.0;
  for (std::size_t i = 0; i < chain.samples.size(); ++i) {
    const auto& sample = chain.samples[i];
    chain_csv.write_row(std::vector<double>{static_cast<double>(i), sample.parameters[0],
                                            sample.parameters[1], sample.log_evidence,
                                            sample.accepted ? 1.0 : 0.0});
    mean_transition += sample.parameters[0];
    mean_observation += sample.parameters[1];
  }
  ctx.metrics["acceptance_rate"] = chain.acceptance_rate();
  ctx.metrics["failed_proposals"] = chain.failed_proposals;
  ctx.metrics["posterior_mean_transition_noise"] =
      mean_transition / static_cast<double>(chain.samples.size());
  ctx.metrics["posterior_mean_observation_noise"] =
      mean_observation / static_cast<double>(chain.samples.size());
}

// --- bench -------------------------------------------------------------------

void run_bench(const config::RunConfig& config, const config::BenchOptions& options,
               RunContext& ctx) {
  bench::BenchConfig bench_config;
  for (int e = options.min_exponent; e <= options.max_exponent; ++e) {
    bench_config.particle_counts.push_back(1 << e);
  }
  bench_config.num_steps = options.steps;
  bench_config.repetitions = options.repetitions;
  bench_config.evidence_seeds = options.evidence_seeds;
  bench_config.num_threads = options.threads;
  bench_config.seed = config.seed;

  const auto result = bench::bench_rbpf(bench_config);

  // Wall-clock timings are inherently non-reproducible, so they live in their
  // own file; everything else stays byte-identical across reruns.
  csv::Writer timing(ctx.path("bench_timing.csv"),
                     {"particles", "serial_ms_mean", "serial_ms_std", "parallel_ms_mean",
                      "parallel_ms_std", "threads"});
  csv::Writer evidence(ctx.path("bench_evidence.csv"), {"particles", "evidence_std", "seeds"});
  for (const auto& row : result.rows) {
    timing.write_row(std::vector<double>{static_cast<double>(row.num_particles),
                                         row.serial_ms_mean, row.serial_ms_std,
                                         row.parallel_ms_mean, row.parallel_ms_std,
                                         static_cast<double>(result.num_threads)});
    evidence.write_row(std::vector<double>{static_cast<double>(row.num_particles),
                                           row.evidence_std,
                                           static_cast<double>(bench_config.evidence_seeds)});
  }
  ctx.metrics["threads"] = result.num_threads;
  ctx.metrics["grid_size"] = result.rows.size();
}

}  // namespace

std::string run_subcommand(const config::RunConfig& config) {
  RunContext ctx;
  ctx.out_dir = config.out_dir.empty() ? "." : config.out_dir;
  fs::create_directories(ctx.out_dir);

  if (const auto* track = std::get_if<config::TrackOptions>(&config.options)) {
    run_track(config, *track, ctx);
  } else if (const auto* inflation = std::get_if<config::InflationOptions>(&config.options)) {
    run_inflation(config, *inflation, ctx);
  } else if (const auto* lorenz = std::get_if<config::LorenzOptions>(&config.options)) {
    run_lorenz(config, *lorenz, ctx);
  } else if (const auto* pmmh_options = std::get_if<config::PmmhOptions>(&config.options)) {
    run_pmmh(config, *pmmh_options, ctx);
  } else if (const auto* bench_options = std::get_if<config::BenchOptions>(&config.options)) {
    run_bench(config, *bench_options, ctx);
  } else {
    throw ConfigError("unhandled command '" + config.command + "'");
  }

  Json metadata;
  metadata["command"] = config.command;
  metadata["version"] = kVersion;
  metadata["seed"] = config.seed;
  metadata["config"] = Json::parse(config::serialise_run_config(config));
  metadata["outputs"] = ctx.outputs;
  metadata["metrics"] = ctx.metrics;
  const std::string text = metadata.dump(2) + "\n";

  std::ofstream out(ctx.out_dir / "run.json");
  if (!out) throw IoError("cannot write run.json");
  out << text;
  return text;
}

}  // namespace ssmkit::run
