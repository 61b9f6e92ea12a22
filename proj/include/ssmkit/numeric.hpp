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

#include <cmath>
#include <limits>
#include <sstream>

#include "ssmkit/errors.hpp"
#include "ssmkit/types.hpp"

namespace ssmkit {

inline constexpr double kPi = 3.14159265358979323846;

template <class Scalar>
constexpr Scalar negative_infinity() {
  return -std::numeric_limits<Scalar>::infinity();
}

/// log(sum(exp(v))) with max-subtraction; -inf entries contribute nothing.
template <class Scalar>
Scalar logsumexp(const VectorX<Scalar>& values) {
  Scalar max_value = negative_infinity<Scalar>();
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values[i] > max_value) max_value = values[i];
  }
  if (max_value == negative_infinity<Scalar>()) return max_value;
  Scalar sum{0};
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (values[i] != negative_infinity<Scalar>()) {
      sum += std::exp(values[i] - max_value);
    }
  }
  return max_value + std::log(sum);
}

template <class Scalar>
Scalar normal_logpdf(Scalar x, Scalar mean, Scalar variance) {
  if (!(variance > Scalar{0})) {
    throw SingularMatrixError("normal_logpdf: variance must be positive");
  }
  const Scalar d = x - mean;
  return Scalar{-0.5} * (std::log(Scalar{2} * Scalar(kPi) * variance) + d * d / variance);
}

/// Log-density of InverseGamma(shape, scale) at x > 0.
inline double inverse_gamma_logpdf(double x, double shape, double scale) {
  if (!(x > 0.0)) return -std::numeric_limits<double>::infinity();
  return shape * std::log(scale) - std::lgamma(shape) - (shape + 1.0) * std::log(x) - scale / x;
}

template <class Scalar>
MatrixX<Scalar> symmetrized(const MatrixX<Scalar>& m) {
  return ((m + m.transpose()) * Scalar{0.5}).eval();
}

template <class Scalar>
Scalar min_eigenvalue(const MatrixX<Scalar>& sym) {
  if (sym.rows() == 1) return sym(0, 0);
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> solver(sym, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

template <class Scalar>
Scalar max_abs_eigenvalue(const MatrixX<Scalar>& sym) {
  if (sym.rows() == 1) return std::abs(sym(0, 0));
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> solver(sym, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
}

/// Symmetrises `m` and verifies its spectrum sits above the -tolerance floor
/// (scaled by the spectral radius). Throws NotPositiveSemiDefiniteError with
/// the offending eigenvalue otherwise.
template <class Scalar>
MatrixX<Scalar> ensure_psd(const MatrixX<Scalar>& m, double tolerance = 1e-8) {
  if (m.rows() != m.cols()) throw DimensionError("ensure_psd: matrix is not square");
  MatrixX<Scalar> sym = symmetrized(m);
  const Scalar lambda_min = min_eigenvalue(sym);
  const Scalar scale = std::max(Scalar{1}, max_abs_eigenvalue(sym));
  if (lambda_min < -Scalar(tolerance) * scale) {
    std::ostringstream msg;
    msg << "matrix is not positive semi-definite (min eigenvalue " << lambda_min << ")";
    throw NotPositiveSemiDefiniteError(msg.str(), static_cast<double>(lambda_min));
  }
  return sym;
}

/// As ensure_psd but requires a strictly positive spectrum.
template <class Scalar>
MatrixX<Scalar> ensure_pd(const MatrixX<Scalar>& m) {
  MatrixX<Scalar> sym = symmetrized(m);
  const Scalar lambda_min = min_eigenvalue(sym);
  if (!(lambda_min > Scalar{0})) {
    std::ostringstream msg;
    msg << "matrix is not positive definite (min eigenvalue " << lambda_min << ")";
    throw NotPositiveSemiDefiniteError(msg.str(), static_cast<double>(lambda_min));
  }
  return sym;
}

/// Square root of a PSD matrix via its eigendecomposition, with negative
/// eigenvalues (floating-point dust) clamped to zero. Works where Cholesky
/// does not, e.g. for singular noise covariances.
template <class Scalar>
MatrixX<Scalar> psd_sqrt(const MatrixX<Scalar>& m) {
  MatrixX<Scalar> sym = symmetrized(m);
  Eigen::SelfAdjointEigenSolver<MatrixX<Scalar>> solver(sym);
  VectorX<Scalar> roots = solver.eigenvalues().cwiseMax(Scalar{0}).cwiseSqrt();
  return solver.eigenvectors() * roots.asDiagonal() * solver.eigenvectors().transpose();
}

/// Multivariate normal log-density. Requires a positive-definite covariance.
template <class Scalar>
Scalar mvn_logpdf(const VectorX<Scalar>& x, const VectorX<Scalar>& mean,
                  const MatrixX<Scalar>& covariance) {
  const Eigen::Index dim = x.size();
  if (mean.size() != dim || covariance.rows() != dim || covariance.cols() != dim) {
    throw DimensionError("mvn_logpdf: inconsistent dimensions");
  }
  Eigen::LLT<MatrixX<Scalar>> llt(covariance);
  if (llt.info() != Eigen::Success) {
    throw SingularMatrixError("mvn_logpdf: covariance is not positive definite");
  }
  const MatrixX<Scalar> chol = llt.matrixL();
  const VectorX<Scalar> whitened = chol.template triangularView<Eigen::Lower>().solve(x - mean);
  Scalar log_det{0};
  for (Eigen::Index i = 0; i < dim; ++i) log_det += std::log(chol(i, i));
  return -Scalar{0.5} * whitened.squaredNorm() - log_det -
         Scalar{0.5} * Scalar(dim) * std::log(Scalar{2} * Scalar(kPi));
}

}  // namespace ssmkit
