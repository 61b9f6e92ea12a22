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

#include <algorithm>
#include <vector>

#include "ssmkit/errors.hpp"

namespace ssmkit {

/// Sparse storage of particle genealogies. Each generation appends the
/// current particles as leaves pointing at their ancestors; branches whose
/// whole subtree died out are pruned eagerly and their arena slots recycled,
/// so only surviving lineages are retained. Single writer; reads are safe
/// between generations.
template <class State>
class AncestryTree {
 public:
  AncestryTree() = default;

  /// Starts the genealogy with generation 0.
  void record_roots(const std::vector<State>& particles) {
    if (!leaves_.empty() || generations_ != 0) throw Error("genealogy roots already recorded");
    leaves_.reserve(particles.size());
    for (const auto& state : particles) leaves_.push_back(allocate(state, kNoParent));
    generations_ = 1;
  }

  /// Appends one generation: particle i descends from previous leaf
  /// ancestors[i]. Dead branches are freed; the arena grows on demand.
  void record_generation(const std::vector<State>& particles, const std::vector<int>& ancestors) {
    if (generations_ == 0) throw Error("record_roots must be called first");
    if (particles.size() != ancestors.size()) {
      throw DimensionError("particles and ancestors must have equal length");
    }
    const std::vector<int> previous_leaves = leaves_;
    leaves_.assign(particles.size(), kNoParent);
    for (std::size_t i = 0; i < particles.size(); ++i) {
      const int ancestor = ancestors[i];
      if (ancestor < 0 || ancestor >= static_cast<int>(previous_leaves.size())) {
        throw Error("ancestor index out of range");
      }
      const int parent = previous_leaves[static_cast<std::size_t>(ancestor)];
      leaves_[i] = allocate(particles[i], parent);
      ++nodes_[static_cast<std::size_t>(parent)].num_children;
    }
    for (const int leaf : previous_leaves) prune_from(leaf);
    ++generations_;
  }

  /// States along the root-to-leaf lineage of the given current leaf.
  std::vector<State> extract_path(int leaf_index) const {
    if (leaf_index < 0 || leaf_index >= static_cast<int>(leaves_.size())) {
      throw Error("leaf index out of range");
    }
    std::vector<State> path;
    path.reserve(static_cast<std::size_t>(generations_));
    for (int node = leaves_[static_cast<std::size_t>(leaf_index)]; node != kNoParent;
         node = nodes_[static_cast<std::size_t>(node)].parent) {
      path.push_back(nodes_[static_cast<std::size_t>(node)].state);
    }
    std::reverse(path.begin(), path.end());
    return path;
  }

  int num_leaves() const { return static_cast<int>(leaves_.size()); }
  int num_generations() const { return generations_; }

  int live_node_count() const { return static_cast<int>(nodes_.size() - free_slots_.size()); }
  int free_slot_count() const { return static_cast<int>(free_slots_.size()); }
  int arena_capacity() const { return static_cast<int>(nodes_.size()); }

 private:
  static constexpr int kNoParent = -1;

  struct Node {
    State state{};
    int parent = kNoParent;
    int num_children = 0;
  };

  int allocate(const State& state, int parent) {
    if (!free_slots_.empty()) {
      const int slot = free_slots_.back();
      free_slots_.pop_back();
      Node& node = nodes_[static_cast<std::size_t>(slot)];
      node.state = state;
      node.parent = parent;
      node.num_children = 0;
      return slot;
    }
    nodes_.push_back(Node{state, parent, 0});
    return static_cast<int>(nodes_.size()) - 1;
  }

  // Walks upward from a node that just stopped being a leaf, freeing every
  // ancestor left without live children.
  void prune_from(int node) {
    while (node != kNoParent && nodes_[static_cast<std::size_t>(node)].num_children == 0) {
      const int parent = nodes_[static_cast<std::size_t>(node)].parent;
      free_slots_.push_back(node);
      if (parent != kNoParent) --nodes_[static_cast<std::size_t>(parent)].num_children;
      node = parent;
    }
  }

  std::vector<Node> nodes_;
  std::vector<int> free_slots_;
  std::vector<int> leaves_;
  int generations_ = 0;
};

}  // namespace ssmkit
