// Copyright 2026 The fleetmc Authors. All Rights Reserved.
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

#ifndef FLEETMC_PARALLEL_HPP_
#define FLEETMC_PARALLEL_HPP_

#include <algorithm>
#include <thread>
#include <vector>

namespace fleetmc {

// Runs fn(i) for i in [0, n) over contiguous chunks. Each index is handled
// by exactly one thread, so fn must only write state owned by index i.
template <typename Index, typename Fn>
void parallel_for(Index n, int threads, Fn&& fn) {
  const Index workers = std::min<Index>(n, static_cast<Index>(std::max(threads, 1)));
  if (workers <= 1) {
    for (Index i = 0; i < n; ++i) fn(i);
    return;
  }
  const Index chunk = (n + workers - 1) / workers;
  std::vector<std::jthread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (Index w = 0; w < workers; ++w) {
    const Index begin = w * chunk;
    const Index end = std::min(n, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] {
      for (Index i = begin; i < end; ++i) fn(i);
    });
  }
}

}  // namespace fleetmc

#endif  // FLEETMC_PARALLEL_HPP_
