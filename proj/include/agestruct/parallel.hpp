// Copyright 2026 The agestruct Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace agestruct {

/// Thread budget: AGESTRUCT_THREADS if set to a positive integer, otherwise
/// the hardware concurrency.
inline int default_thread_count() {
  if (const char* env = std::getenv("AGESTRUCT_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Calls fn(i) for i in [0, n) on up to `threads` workers, contiguous
/// blocks per worker. fn must only write state owned by index i.
template <typename Fn>
void parallel_for(int n, int threads, Fn&& fn) {
  if (threads <= 0) threads = default_thread_count();
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    const int lo = static_cast<int>(static_cast<long long>(n) * t / threads);
    const int hi =
        static_cast<int>(static_cast<long long>(n) * (t + 1) / threads);
    pool.emplace_back([lo, hi, &fn] {
      for (int i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace agestruct
