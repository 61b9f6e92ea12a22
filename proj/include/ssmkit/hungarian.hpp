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

#include <vector>

#include "ssmkit/types.hpp"

namespace ssmkit {

/// Minimum-cost assignment of each row to a distinct column (rows <= columns)
/// by the Hungarian algorithm with potentials, O(rows^2 * cols). Entries may
/// be +infinity for forbidden pairs; a forbidden pair is only selected when no
/// feasible assignment avoids it.
std::vector<int> solve_assignment(const Matrix& cost);

/// Target-to-measurement association: entry k is 0 when target k is
/// undetected, otherwise the 1-based index of its measurement. Non-zero
/// entries are distinct.
using AssociationVector = std::vector<int>;

/// Optimal association of K targets to M measurements where each target may
/// instead take its per-target miss cost. Minimises the total cost subject to
/// the one-to-one constraints. A miss is always feasible, so this never
/// fails.
AssociationVector associate(const Matrix& cost, const Vector& miss_costs);

/// Total cost of an association under the same convention.
double association_cost(const Matrix& cost, const Vector& miss_costs,
                        const AssociationVector& association);

}  // namespace ssmkit
