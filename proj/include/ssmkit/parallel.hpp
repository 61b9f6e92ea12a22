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
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ssmkit {

/// Runs fn(begin, end) over a partition of [0, n). Callers must make each
/// index's work independent of the partitioning (per-index derived random
/// streams, writes to disjoint slots) so results do not depend on the thread
/// count. num_threads <= 1 runs inline. The first exception thrown by any
/// worker is rethrown on the calling thread after all workers joined.
template <class Fn>
void parallel_for(int n, int num_threads, Fn&& fn) {
  if (n <= 0) return;
  num_threads = std::min(num_threads, n);
  if (num_threads <= 1) {
    fn(0, n);
    return;
  }
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(num_threads) - 1);
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto guarded = [&](int begin, int end) {
    try {
      fn(begin, end);
    } catch (...) {
      const std::lock_guard<std::mutex> lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  };
  const int chunk = (n + num_threads - 1) / num_threads;
  for (int t = 1; t < num_threads; ++t) {
    const int begin = t * chunk;
    const int end = std::min(n, begin + chunk);
    if (begin >= end) break;
    workers.emplace_back([&guarded, begin, end] { guarded(begin, end); });
  }
  guarded(0, std::min(n, chunk));
  for (auto& worker : workers) worker.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace ssmkit
