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

#include <cstdint>
#include <random>

namespace ssmkit {

/// SplitMix64 generator (Steele, Lea & Flood; the engine behind Java's
/// SplittableRandom). One word of state, avalanche output, and cheap to seed,
/// which is what per-particle stream derivation needs.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  SplitMix64() : state_(0x853c49e6748fea9bULL) {}
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~std::uint64_t{0}; }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

using Rng = SplitMix64;

/// Combines a stream key with a salt into a decorrelated stream key.
inline std::uint64_t mix64(std::uint64_t key, std::uint64_t salt) {
  std::uint64_t z = key ^ (salt * 0x9e3779b97f4a7c15ULL + 0xbf58476d1ce4e5b9ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derives an independent child stream from a parent generator. The parent
/// advances by exactly one draw regardless of how the child is used, so
/// derived streams can be handed to parallel workers without breaking
/// determinism of the parent sequence.
inline Rng derive_rng(Rng& parent, std::uint64_t salt = 0) {
  return Rng(mix64(parent(), salt));
}

// Sampling helpers always evaluate in double so that float and double
// instantiations of a model consume identical underlying draws.

inline double draw_normal(Rng& rng) {
  std::normal_distribution<double> dist;
  return dist(rng);
}

/// Uniform draw on [0, 1).
inline double draw_uniform(Rng& rng) {
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  return dist(rng);
}

inline double draw_uniform(Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  return dist(rng);
}

inline int draw_poisson(Rng& rng, double rate) {
  if (rate <= 0.0) return 0;
  std::poisson_distribution<int> dist(rate);
  return dist(rng);
}

}  // namespace ssmkit
