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

#include <stdexcept>
#include <string>

namespace ssmkit {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Mismatched vector/matrix dimensions between model components.
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// A covariance failed the positive-semi-definiteness check.
class NotPositiveSemiDefiniteError : public Error {
 public:
  NotPositiveSemiDefiniteError(const std::string& what, double min_eigenvalue)
      : Error(what), min_eigenvalue_(min_eigenvalue) {}
  double min_eigenvalue() const { return min_eigenvalue_; }

 private:
  double min_eigenvalue_;
};

/// A matrix factorisation failed (singular innovation covariance etc.).
class SingularMatrixError : public Error {
 public:
  using Error::Error;
};

/// Every particle weight collapsed to zero probability.
class DegenerateEnsembleError : public Error {
 public:
  DegenerateEnsembleError(const std::string& what, int step = -1)
      : Error(what), step_(step) {}
  /// Step index at which the ensemble degenerated, or -1 if not tied to one.
  int step() const { return step_; }

 private:
  int step_;
};

/// Invalid or incomplete run configuration.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// File reading/writing failure.
class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace ssmkit
