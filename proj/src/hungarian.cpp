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

#include "ssmkit/hungarian.hpp"

#include <cmath>
#include <limits>

#include "ssmkit/errors.hpp"

namespace ssmkit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Replaces forbidden (+inf) entries by a finite sentinel large enough that an
// assignment containing one is never preferred over any assignment without.
Matrix definitize(const Matrix& cost) {
  double lo = 0.0;
  double hi = 0.0;
  bool any_finite = false;
  for (Eigen::Index i = 0; i < cost.rows(); ++i) {
    for (Eigen::Index j = 0; j < cost.cols(); ++j) {
      const double value = cost(i, j);
      if (std::isnan(value) || value == -kInf) {
        throw Error("assignment costs must not be NaN or -inf");
      }
      if (value == kInf) continue;
      lo = any_finite ? std::min(lo, value) : value;
      hi = any_finite ? std::max(hi, value) : value;
      any_finite = true;
    }
  }
  const double range = any_finite ? hi - lo : 0.0;
  const double big = (any_finite ? hi : 0.0) +
                     (range + 1.0) * static_cast<double>(cost.rows() + cost.cols() + 1);
  Matrix result = cost;
  for (Eigen::Index i = 0; i < result.rows(); ++i) {
    for (Eigen::Index j = 0; j < result.cols(); ++j) {
      if (result(i, j) == kInf) result(i, j) = big;
    }
  }
  return result;
}

}  // namespace

std::vector<int> solve_assignment(const Matrix& cost_in) {
  const int num_rows = static_cast<int>(cost_in.rows());
  const int num_cols = static_cast<int>(cost_in.cols());
  if (num_rows == 0) return {};
  if (num_rows > num_cols) {
    throw DimensionError("solve_assignment requires rows <= columns");
  }
  const Matrix cost = definitize(cost_in);

  // Shortest-augmenting-path formulation with dual potentials; column 0 is a
  // virtual entry point, real columns are 1-based inside this routine.
  std::vector<double> row_potential(static_cast<std::size_t>(num_rows) + 1, 0.0);
  std::vector<double> col_potential(static_cast<std::size_t>(num_cols) + 1, 0.0);
  std::vector<int> matched_row(static_cast<std::size_t>(num_cols) + 1, 0);
  std::vector<int> path(static_cast<std::size_t>(num_cols) + 1, 0);

  for (int row = 1; row <= num_rows; ++row) {
    matched_row[0] = row;
    int j0 = 0;
    std::vector<double> min_reduced(static_cast<std::size_t>(num_cols) + 1, kInf);
    std::vector<bool> visited(static_cast<std::size_t>(num_cols) + 1, false);
    do {
      visited[static_cast<std::size_t>(j0)] = true;
      const int i0 = matched_row[static_cast<std::size_t>(j0)];
      double delta = kInf;
      int j1 = 0;
      for (int j = 1; j <= num_cols; ++j) {
        if (visited[static_cast<std::size_t>(j)]) continue;
        const double reduced = cost(i0 - 1, j - 1) - row_potential[static_cast<std::size_t>(i0)] -
                               col_potential[static_cast<std::size_t>(j)];
        if (reduced < min_reduced[static_cast<std::size_t>(j)]) {
          min_reduced[static_cast<std::size_t>(j)] = reduced;
          path[static_cast<std::size_t>(j)] = j0;
        }
        if (min_reduced[static_cast<std::size_t>(j)] < delta) {
          delta = min_reduced[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= num_cols; ++j) {
        if (visited[static_cast<std::size_t>(j)]) {
          row_potential[static_cast<std::size_t>(matched_row[static_cast<std::size_t>(j)])] += delta;
          col_potential[static_cast<std::size_t>(j)] -= delta;
        } else {
          min_reduced[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (matched_row[static_cast<std::size_t>(j0)] != 0);
    // unwind the augmenting path
    do {
      const int j1 = path[static_cast<std::size_t>(j0)];
      matched_row[static_cast<std::size_t>(j0)] = matched_row[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }

  std::vector<int> assignment(static_cast<std::size_t>(num_rows), -1);
  for (int j = 1; j <= num_cols; ++j) {
    const int row = matched_row[static_cast<std::size_t>(j)];
    if (row > 0) assignment[static_cast<std::size_t>(row - 1)] = j - 1;
  }
  return assignment;
}

AssociationVector associate(const Matrix& cost, const Vector& miss_costs) {
  const int num_targets = static_cast<int>(cost.rows());
  const int num_measurements = static_cast<int>(cost.cols());
  if (miss_costs.size() != num_targets) {
    throw DimensionError("associate: one miss cost per target required");
  }
  // One extra column per target holds its miss option, unusable by others.
  Matrix padded(num_targets, num_measurements + num_targets);
  padded.rightCols(num_targets).setConstant(kInf);
  padded.leftCols(num_measurements) = cost;
  for (int i = 0; i < num_targets; ++i) padded(i, num_measurements + i) = miss_costs[i];

  const std::vector<int> columns = solve_assignment(padded);
  AssociationVector association(static_cast<std::size_t>(num_targets), 0);
  for (int i = 0; i < num_targets; ++i) {
    const int column = columns[static_cast<std::size_t>(i)];
    association[static_cast<std::size_t>(i)] = column < num_measurements ? column + 1 : 0;
  }
  return association;
}

double association_cost(const Matrix& cost, const Vector& miss_costs,
                        const AssociationVector& association) {
  double total = 0.0;
  for (std::size_t i = 0; i < association.size(); ++i) {
    const int entry = association[i];
    total += entry == 0 ? miss_costs[static_cast<Eigen::Index>(i)]
                        : cost(static_cast<Eigen::Index>(i), entry - 1);
  }
  return total;
}

}  // namespace ssmkit
