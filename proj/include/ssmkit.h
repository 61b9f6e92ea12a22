/* Copyright 2026 The ssmkit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface of the ssmkit shared library.
 *
 * All functions return an ssm_status; on failure a thread-local message is
 * retrievable with ssm_last_error(). Objects are opaque handles owned by the
 * caller and released with the matching _destroy function. Matrices are
 * passed as row-major double arrays.
 */

#ifndef SSMKIT_H
#define SSMKIT_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ssm_status {
  SSM_OK = 0,
  SSM_ERROR_INVALID_ARGUMENT = 1,
  SSM_ERROR_DIMENSION = 2,
  SSM_ERROR_NUMERICAL = 3,
  SSM_ERROR_DEGENERATE = 4,
  SSM_ERROR_CONFIG = 5,
  SSM_ERROR_IO = 6,
  SSM_ERROR_INTERNAL = 7
} ssm_status;

const char* ssm_status_name(ssm_status status);

/* Message describing the most recent failure on this thread. */
const char* ssm_last_error(void);

const char* ssm_version(void);

/* --- linear-Gaussian state space models ---------------------------------- */

typedef struct ssm_model ssm_model;

/* Creates a time-invariant linear-Gaussian model
 *   x_t ~ N(A x_{t-1} + b, Q),  y_t ~ N(H x_t, R),  x_0 ~ N(mean0, cov0).
 * A, Q, cov0 are state_dim x state_dim; H is obs_dim x state_dim; R is
 * obs_dim x obs_dim; b and mean0 are state_dim vectors. b may be NULL (zero).
 */
ssm_status ssm_model_create_linear_gaussian(int state_dim, int obs_dim, const double* transition,
                                            const double* offset, const double* noise,
                                            const double* observation, const double* obs_noise,
                                            const double* initial_mean, const double* initial_cov,
                                            ssm_model** out_model);

void ssm_model_destroy(ssm_model* model);

/* Simulates states x_{0:T} and observations y_{1:T}. states_out has
 * (num_steps + 1) * state_dim entries, observations_out num_steps * obs_dim;
 * either may be NULL to skip. */
ssm_status ssm_model_simulate(const ssm_model* model, uint64_t seed, int num_steps,
                              double* states_out, double* observations_out);

/* Exact Kalman filtering. observations is num_steps x obs_dim row-major.
 * mean_out (state_dim), cov_out (state_dim x state_dim) and
 * log_evidence_out may each be NULL. */
ssm_status ssm_kalman_filter(const ssm_model* model, const double* observations, int num_steps,
                             double* mean_out, double* cov_out, double* log_evidence_out);

/* Bootstrap particle filtering of the same model. resampling: 0 multinomial,
 * 1 systematic. ess_threshold in (0, 1]; 1 resamples every step. num_threads
 * <= 1 runs serially; results do not depend on the thread count. */
ssm_status ssm_bootstrap_filter(const ssm_model* model, const double* observations, int num_steps,
                                int num_particles, uint64_t seed, int resampling,
                                double ess_threshold, int num_threads,
                                double* log_evidence_out);

/* --- case-study runner ---------------------------------------------------- */

/* Executes one run described by a JSON configuration (the same schema the
 * ssm CLI uses) and writes its artifacts. On success *metadata_json_out (if
 * non-NULL) receives a malloc'd JSON string to be released with
 * ssm_string_free. */
ssm_status ssm_run_json(const char* config_json, char** metadata_json_out);

void ssm_string_free(char* text);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* SSMKIT_H */
