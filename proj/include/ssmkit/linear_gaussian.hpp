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

#include <functional>
#include <memory>
#include <type_traits>
#include <utility>

#include "ssmkit/model.hpp"

namespace ssmkit {

namespace detail {

// Eigen dense types and expressions all expose PlainObject; callables do not.
template <class T, class = void>
struct is_eigen_dense : std::false_type {};
template <class T>
struct is_eigen_dense<T, std::void_t<typename T::PlainObject>> : std::true_type {};

}  // namespace detail

/// A model coefficient that is either a fixed value or a function of
/// (step, context). Fixed values are validated once at construction of the
/// owning component; callbacks are validated per evaluation.
template <class Value>
class Coefficient {
 public:
  using Fn = std::function<Value(int, const Context&)>;

  Coefficient() : value_(Value{}), constant_(true) {}
  Coefficient(Value value) : value_(std::move(value)), constant_(true) {}
  template <class Derived>
  Coefficient(const Eigen::EigenBase<Derived>& expr) : value_(expr), constant_(true) {}
  template <class F,
            class = std::enable_if_t<std::is_invocable_r_v<Value, F, int, const Context&> &&
                                     !detail::is_eigen_dense<std::decay_t<F>>::value &&
                                     !std::is_same_v<std::decay_t<F>, Coefficient>>>
  Coefficient(F&& fn) : fn_(std::forward<F>(fn)), constant_(false) {}

  bool is_constant() const { return constant_; }
  const Value& constant_value() const { return value_; }
  Value& mutable_constant() { return value_; }

  Value operator()(int step, const Context& ctx) const {
    return constant_ ? value_ : fn_(step, ctx);
  }

 private:
  Value value_{};
  Fn fn_{};
  bool constant_;
};

template <class Scalar>
using MatrixCoefficient = Coefficient<MatrixX<Scalar>>;

template <class Scalar>
using VectorCoefficient = Coefficient<VectorX<Scalar>>;

/// Linear-Gaussian latent dynamics: x_t ~ N(A_t x_{t-1} + b_t, Q_t) with a
/// Gaussian initial state. Exposing the coefficients directly lets
/// closed-form algorithms consume the same model object as sampling-based
/// ones.
template <class Scalar>
class LinearGaussianDynamics final : public LatentDynamics<Scalar> {
 public:
  using Vec = VectorX<Scalar>;
  using Mat = MatrixX<Scalar>;

  LinearGaussianDynamics(MatrixCoefficient<Scalar> transition_matrix,
                         VectorCoefficient<Scalar> transition_offset,
                         MatrixCoefficient<Scalar> transition_cov, Vec initial_mean,
                         Mat initial_cov)
      : transition_matrix_(std::move(transition_matrix)),
        transition_offset_(std::move(transition_offset)),
        transition_cov_(std::move(transition_cov)),
        initial_mean_(std::move(initial_mean)),
        initial_cov_(ensure_psd<Scalar>(initial_cov)),
        dim_(static_cast<int>(initial_mean_.size())) {
    if (initial_cov_.rows() != dim_) {
      throw DimensionError("initial covariance does not match the state dimension");
    }
    if (transition_matrix_.is_constant()) {
      check_square(transition_matrix_.constant_value(), "transition matrix");
    }
    if (transition_offset_.is_constant() &&
        transition_offset_.constant_value().size() != dim_) {
      throw DimensionError("transition offset has the wrong dimension");
    }
    if (transition_cov_.is_constant()) {
      Mat& q = transition_cov_.mutable_constant();
      check_square(q, "transition covariance");
      q = ensure_psd<Scalar>(q);
      constant_noise_sqrt_ = psd_sqrt<Scalar>(q);
    }
    initial_cov_sqrt_ = psd_sqrt<Scalar>(initial_cov_);
  }

  int state_dim() const override { return dim_; }

  Mat transition_matrix(int step, const Context& ctx) const {
    Mat a = transition_matrix_(step, ctx);
    if (!transition_matrix_.is_constant()) check_square(a, "transition matrix");
    return a;
  }

  Vec transition_offset(int step, const Context& ctx) const {
    Vec b = transition_offset_(step, ctx);
    if (b.size() != dim_) throw DimensionError("transition offset has the wrong dimension");
    return b;
  }

  Mat transition_cov(int step, const Context& ctx) const {
    if (transition_cov_.is_constant()) return transition_cov_.constant_value();
    Mat q = transition_cov_(step, ctx);
    check_square(q, "transition covariance");
    return ensure_psd<Scalar>(q);
  }

  const Vec& initial_mean() const { return initial_mean_; }
  const Mat& initial_cov() const { return initial_cov_; }

  Vec sample_initial(Rng& rng, const Context&) const override {
    return initial_mean_ + initial_cov_sqrt_ * standard_normal(rng);
  }

  Scalar logdensity_initial(const Vec& state, const Context&) const override {
    return mvn_logpdf<Scalar>(state, initial_mean_, initial_cov_);
  }

  Vec sample_transition(Rng& rng, int step, const Vec& prev_state,
                        const Context& ctx) const override {
    Vec mean = transition_matrix(step, ctx) * prev_state + transition_offset(step, ctx);
    if (transition_cov_.is_constant()) {
      return mean + constant_noise_sqrt_ * standard_normal(rng);
    }
    return mean + psd_sqrt<Scalar>(transition_cov(step, ctx)) * standard_normal(rng);
  }

  Scalar logdensity_transition(int step, const Vec& prev_state, const Vec& new_state,
                               const Context& ctx) const override {
    Vec mean = transition_matrix(step, ctx) * prev_state + transition_offset(step, ctx);
    return mvn_logpdf<Scalar>(new_state, mean, transition_cov(step, ctx));
  }

 private:
  void check_square(const Mat& m, const char* what) const {
    if (m.rows() != dim_ || m.cols() != dim_) {
      throw DimensionError(std::string(what) + " does not match the state dimension");
    }
  }

  Vec standard_normal(Rng& rng) const {
    Vec z(dim_);
    for (int i = 0; i < dim_; ++i) z[i] = Scalar(draw_normal(rng));
    return z;
  }

  MatrixCoefficient<Scalar> transition_matrix_;
  VectorCoefficient<Scalar> transition_offset_;
  MatrixCoefficient<Scalar> transition_cov_;
  Vec initial_mean_;
  Mat initial_cov_;
  Mat initial_cov_sqrt_;
  Mat constant_noise_sqrt_;  // cached when the covariance is a fixed matrix
  int dim_;
};

/// Linear-Gaussian observation process: y_t ~ N(H_t x_t + c_t, R_t) with a
/// strictly positive-definite R. The offset c defaults to zero.
template <class Scalar>
class LinearGaussianObservation final : public ObservationProcess<Scalar> {
 public:
  using Vec = VectorX<Scalar>;
  using Mat = MatrixX<Scalar>;

  LinearGaussianObservation(MatrixCoefficient<Scalar> observation_matrix,
                            MatrixCoefficient<Scalar> observation_cov, int state_dim = -1,
                            int obs_dim = -1,
                            VectorCoefficient<Scalar> observation_offset = {})
      : observation_matrix_(std::move(observation_matrix)),
        observation_cov_(std::move(observation_cov)),
        observation_offset_(std::move(observation_offset)),
        state_dim_(state_dim),
        obs_dim_(obs_dim) {
    if (observation_matrix_.is_constant()) {
      state_dim_ = static_cast<int>(observation_matrix_.constant_value().cols());
      obs_dim_ = static_cast<int>(observation_matrix_.constant_value().rows());
    }
    if (state_dim_ <= 0 || obs_dim_ <= 0) {
      throw DimensionError("observation dimensions must be supplied for callback coefficients");
    }
    if (observation_cov_.is_constant()) {
      Mat& r = observation_cov_.mutable_constant();
      if (r.rows() != obs_dim_ || r.cols() != obs_dim_) {
        throw DimensionError("observation covariance does not match the observation dimension");
      }
      r = ensure_pd<Scalar>(r);
      constant_noise_sqrt_ = psd_sqrt<Scalar>(r);
    }
    if (observation_offset_.is_constant()) {
      Vec& c = observation_offset_.mutable_constant();
      if (c.size() == 0) c = Vec::Zero(obs_dim_);
      if (c.size() != obs_dim_) {
        throw DimensionError("observation offset does not match the observation dimension");
      }
    }
  }

  int state_dim() const override { return state_dim_; }
  int obs_dim() const override { return obs_dim_; }

  Mat observation_matrix(int step, const Context& ctx) const {
    Mat h = observation_matrix_(step, ctx);
    if (h.rows() != obs_dim_ || h.cols() != state_dim_) {
      throw DimensionError("observation matrix has the wrong shape");
    }
    return h;
  }

  Mat observation_cov(int step, const Context& ctx) const {
    if (observation_cov_.is_constant()) return observation_cov_.constant_value();
    return ensure_pd<Scalar>(observation_cov_(step, ctx));
  }

  Vec observation_offset(int step, const Context& ctx) const {
    return observation_offset_(step, ctx);
  }

  Vec sample_observation(Rng& rng, int step, const Vec& state, const Context& ctx) const override {
    Vec mean = observation_matrix(step, ctx) * state + observation_offset(step, ctx);
    Vec z(obs_dim_);
    for (int i = 0; i < obs_dim_; ++i) z[i] = Scalar(draw_normal(rng));
    if (observation_cov_.is_constant()) return mean + constant_noise_sqrt_ * z;
    return mean + psd_sqrt<Scalar>(observation_cov(step, ctx)) * z;
  }

  Scalar logdensity_observation(int step, const Vec& state, const Vec& observation,
                                const Context& ctx) const override {
    Vec mean = observation_matrix(step, ctx) * state + observation_offset(step, ctx);
    return mvn_logpdf<Scalar>(observation, mean, observation_cov(step, ctx));
  }

 private:
  MatrixCoefficient<Scalar> observation_matrix_;
  MatrixCoefficient<Scalar> observation_cov_;
  VectorCoefficient<Scalar> observation_offset_;
  Mat constant_noise_sqrt_;
  int state_dim_;
  int obs_dim_;
};

template <class Scalar>
using LinearGaussianModel =
    StateSpaceModel<Scalar, LinearGaussianDynamics<Scalar>, LinearGaussianObservation<Scalar>>;

template <class Scalar>
LinearGaussianModel<Scalar> make_linear_gaussian_model(
    MatrixCoefficient<Scalar> transition_matrix, VectorCoefficient<Scalar> transition_offset,
    MatrixCoefficient<Scalar> transition_cov, VectorX<Scalar> initial_mean,
    MatrixX<Scalar> initial_cov, MatrixCoefficient<Scalar> observation_matrix,
    MatrixCoefficient<Scalar> observation_cov) {
  auto dynamics = std::make_shared<const LinearGaussianDynamics<Scalar>>(
      std::move(transition_matrix), std::move(transition_offset), std::move(transition_cov),
      std::move(initial_mean), std::move(initial_cov));
  const int state_dim = dynamics->state_dim();
  int obs_dim = -1;
  if (observation_matrix.is_constant()) {
    obs_dim = static_cast<int>(observation_matrix.constant_value().rows());
  }
  auto observation = std::make_shared<const LinearGaussianObservation<Scalar>>(
      std::move(observation_matrix), std::move(observation_cov), state_dim, obs_dim);
  return LinearGaussianModel<Scalar>(std::move(dynamics), std::move(observation));
}

}  // namespace ssmkit
