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

#include <any>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ssmkit/errors.hpp"

namespace ssmkit {

/// Key-value bag of inference-time inputs: control variables, time-varying
/// covariates, and conditioning values injected by composite filters. Models
/// treat it as read-only during a single predict/update step.
class Context {
 public:
  Context() = default;

  Context& set(std::string key, std::any value) {
    for (auto& entry : entries_) {
      if (entry.first == key) {
        entry.second = std::move(value);
        return *this;
      }
    }
    entries_.emplace_back(std::move(key), std::move(value));
    return *this;
  }

  /// Copy of this context with one entry added or replaced.
  Context with(std::string_view key, std::any value) const {
    Context copy = *this;
    copy.set(std::string(key), std::move(value));
    return copy;
  }

  bool contains(std::string_view key) const {
    for (const auto& entry : entries_) {
      if (entry.first == key) return true;
    }
    return false;
  }

  template <class T>
  const T* find(std::string_view key) const {
    for (const auto& entry : entries_) {
      if (entry.first == key) return std::any_cast<T>(&entry.second);
    }
    return nullptr;
  }

  template <class T>
  const T& get(std::string_view key) const {
    const T* value = find<T>(key);
    if (value == nullptr) {
      throw Error("context is missing entry '" + std::string(key) + "' (or it has another type)");
    }
    return *value;
  }

  bool empty() const { return entries_.empty(); }

 private:
  std::vector<std::pair<std::string, std::any>> entries_;
};

// Keys used by hierarchical filtering to hand the inner model the previous
// and freshly sampled values of the outer chain.
inline constexpr std::string_view kPrevOuterKey = "prev_outer";
inline constexpr std::string_view kNewOuterKey = "new_outer";

}  // namespace ssmkit
