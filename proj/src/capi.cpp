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

#include "ssmkit.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "ssmkit/config.hpp"
#include "ssmkit/filter.hpp"
#include "ssmkit/kalman.hpp"
#include "ssmkit/particle.hpp"
#include "ssmkit/runners.hpp"
#include "ssmkit/version.hpp"

using ssmkit::Matrix;
using ssmkit::Vector;

struct ssm_model {
  ssmkit::LinearGaussianModel<double> model;
};

namespace {

thread_local std::string g_last_error;

void set_error(const std::string& message) { g_last_error = message; }

ssm_status status_of(const ssmkit::Error& err) {
  if (dynamic_cast<const ssmkit::DimensionError*>(&err)) return SSM_ERROR_DIMENSION;
  if (dynamic_cast<const ssmkit::NotPositiveSemiDefiniteError*>(&err)) return SSM_ERROR_NUMERICAL;
  if (dynamic_cast<const ssmkit::SingularMatrixError*>(&err)) return SSM_ERROR_NUMERICAL;
  if (dynamic_cast<const ssmkit::DegenerateEnsembleError*>(&err)) return SSM_ERROR_DEGENERATE;
  if (dynamic_cast<const ssmkit::ConfigError*>(&err)) return SSM_ERROR_CONFIG;
  if (dynamic_cast<const ssmkit::IoError*>(&err)) return SSM_ERROR_IO;
  return SSM_ERROR_INVALID_ARGUMENT;
}

template <class Fn>
ssm_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const ssmkit::Error& err) {
    set_error(err.what());
    return status_of(err);
  } catch (const std::exception& err) {
    set_error(err.what());
    return SSM_ERROR_INTERNAL;
  } catch (...) {
    set_error("unknown error");
    return SSM_ERROR_INTERNAL;
  }
}

Matrix matrix_from(const double* data, int rows, int cols) {
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = data[i * cols + j];
  }
  return m;
}

std::vector<Vector> observations_from(const double* data, int num_steps, int obs_dim) {
  std::vector<Vector> observations;
  observations.reserve(static_cast<std::size_t>(num_steps));
  for (int t = 0; t < num_steps; ++t) {
    Vector y(obs_dim);
    for (int j = 0; j < obs_dim; ++j) y[j] = data[t * obs_dim + j];
    observations.push_back(std::move(y));
  }
  return observations;
}

char* copy_string(const std::string& text) {
  char* out = static_cast<char*>(std::malloc(text.size() + 1));
  if (out != nullptr) std::memcpy(out, text.c_str(), text.size() + 1);
  return out;
}

}  // namespace

extern "C" {

const char* ssm_status_name(ssm_status status) {
  switch (status) {
    case SSM_OK:
      return "ok";
    case SSM_ERROR_INVALID_ARGUMENT:
      return "invalid argument";
    case SSM_ERROR_DIMENSION:
      return "dimension mismatch";
    case SSM_ERROR_NUMERICAL:
      return "numerical failure";
    case SSM_ERROR_DEGENERATE:
      return "degenerate ensemble";
    case SSM_ERROR_CONFIG:
      return "invalid configuration";
    case SSM_ERROR_IO:
      return "i/o failure";
    case SSM_ERROR_INTERNAL:
      return "internal error";
  }
  return "unknown";
}

const char* ssm_last_error(void) { return g_last_error.c_str(); }

const char* ssm_version(void) { return ssmkit::kVersion; }

ssm_status ssm_model_create_linear_gaussian(int state_dim, int obs_dim, const double* transition,
                                            const double* offset, const double* noise,
                                            const double* observation, const double* obs_noise,
                                            const double* initial_mean, const double* initial_cov,
                                            ssm_model** out_model) {
  return guarded([&]() -> ssm_status {
    if (state_dim < 1 || obs_dim < 1) {
      set_error("dimensions must be at least one");
      return SSM_ERROR_INVALID_ARGUMENT;
    }
    if (transition == nullptr || noise == nullptr || observation == nullptr ||
        obs_noise == nullptr || initial_mean == nullptr || initial_cov == nullptr ||
        out_model == nullptr) {
      set_error("required pointer argument is NULL");
      return SSM_ERROR_INVALID_ARGUMENT;
    }
    Vector offset_vec = Vector::Zero(state_dim);
    if (offset != nullptr) {
      for (int i = 0; i < state_dim; ++i) offset_vec[i] = offset[i];
    }
    Vector mean0(state_dim);
    for (int i = 0; i < state_dim; ++i) mean0[i] = initial_mean[i];

    auto model = ssmkit::make_linear_gaussian_model<double>(
        matrix_from(transition, state_dim, state_dim), offset_vec,
        matrix_from(noise, state_dim, state_dim), mean0,
        matrix_from(initial_cov, state_dim, state_dim),
        matrix_from(observation, obs_dim, state_dim), matrix_from(obs_noise, obs_dim, obs_dim));
    *out_model = new ssm_model{std::move(model)};
    return SSM_OK;
  });
}

void ssm_model_destroy(ssm_model* model) { delete model; }

ssm_status ssm_model_simulate(const ssm_model* model, uint64_t seed, int num_steps,
                              double* states_out, double* observations_out) {
  return guarded([&]() -> ssm_status {
    if (model == nullptr || num_steps < 1) {
      set_error("model is NULL or num_steps < 1");
      return SSM_ERROR_INVALID_ARGUMENT;
    }
    ssmkit::Rng rng(seed);
    const auto [states, observations] = sample_trajectory(rng, model->model, num_steps);
    const int state_dim = model->model.state_dim();
    const int obs_dim = model->model.obs_dim();
    if (states_out != nullptr) {
      for (std::size_t t = 0; t < states.size(); ++t) {
        for (int i = 0; i < state_dim; ++i) states_out[t * state_dim + i] = states[t][i];
      }
    }
    if (observations_out != nullptr) {
      for (std::size_t t = 0; t < observations.size(); ++t) {
        for (int j = 0; j < obs_dim; ++j) observations_out[t * obs_dim + j] = observations[t][j];
      }
    }
    return SSM_OK;
  });
}

ssm_status ssm_kalman_filter(const ssm_model* model, const double* observations, int num_steps,
                             double* mean_out, double* cov_out, double* log_evidence_out) {
  return guarded([&]() -> ssm_status {
    if (model == nullptr || observations == nullptr || num_steps < 1) {
      set_error("model/observations are NULL or num_steps < 1");
      return SSM_ERROR_INVALID_ARGUMENT;
    }
    const int obs_dim = model->model.obs_dim();
    const int state_dim = model->model.state_dim();
    ssmkit::Rng rng(0);
    const auto [belief, log_evidence] =
        filter(rng, model->model, ssmkit::KalmanFilter{},
               observations_from(observations, num_steps, obs_dim));
    if (mean_out != nullptr) {
      for (int i = 0; i < state_dim; ++i) mean_out[i] = belief.mean[i];
    }
    if (cov_out != nullptr) {
      for (int i = 0; i < state_dim; ++i) {
        for (int j = 0; j < state_dim; ++j) cov_out[i * state_dim + j] = belief.covariance(i, j);
      }
    }
    if (log_evidence_out != nullptr) *log_evidence_out = log_evidence;
    return SSM_OK;
  });
}

ssm_status ssm_bootstrap_filter(const ssm_model* model, const double* observations, int num_steps,
                                int num_particles, uint64_t seed, int resampling,
                                double ess_threshold, int num_threads,
                                double* log_evidence_out) {
  return guarded([&]() -> ssm_status {
    if (model == nullptr || observations == nullptr || num_steps < 1 || num_particles < 1) {
      set_error("invalid model, observations or counts");
      return SSM_ERROR_INVALID_ARGUMENT;
    }
    if (resampling != 0 && resampling != 1) {
      set_error("resampling must be 0 (multinomial) or 1 (systematic)");
      return SSM_ERROR_INVALID_ARGUMENT;
    }
    ssmkit::Resampler resampler{resampling == 0 ? ssmkit::ResamplingScheme::kMultinomial
                                                : ssmkit::ResamplingScheme::kSystematic,
                                ess_threshold};
    ssmkit::BootstrapFilter alg{num_particles, resampler, num_threads};
    const ssmkit::StateSpaceModel<double> generic = model->model;
    ssmkit::Rng rng(seed);
    const auto result = filter(rng, generic, alg,
                               observations_from(observations, num_steps, model->model.obs_dim()));
    if (log_evidence_out != nullptr) *log_evidence_out = result.second;
    return SSM_OK;
  });
}

ssm_status ssm_run_json(const char* config_json, char** metadata_json_out) {
  return guarded([&]() -> ssm_status {
    if (config_json == nullptr) {
      set_error("config_json is NULL");
      return SSM_ERROR_INVALID_ARGUMENT;
    }
    const auto config = ssmkit::config::parse_run_config(config_json);
    const std::string metadata = ssmkit::run::run_subcommand(config);
    if (metadata_json_out != nullptr) {
      *metadata_json_out = copy_string(metadata);
      if (*metadata_json_out == nullptr) {
        set_error("out of memory");
        return SSM_ERROR_INTERNAL;
      }
    }
    return SSM_OK;
  });
}

void ssm_string_free(char* text) { std::free(text); }

}  // extern "C"
