// Copyright 2026 The trajkit Authors
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

// Shared plumbing for lockstep ensembles. Each member owns its NoiseStream
// and its own slot of state, so the parallel loop has no shared writes and
// any reduction done afterwards in index order is thread-count independent.

#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <vector>

#include "trajkit/stochproc.hpp"

namespace trajkit {

/// Streams (seed, tag + replicate * 2^32 + i) for i < n.
inline std::vector<NoiseStream> make_streams(std::uint64_t seed, std::uint64_t tag, std::uint64_t replicate,
                                             std::size_t n) {
  std::vector<NoiseStream> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(seed, tag + (replicate << 32) + i);
  return out;
}

/// Runs body(i) for i in [0, n) across OpenMP threads. The first exception
/// thrown by any member is rethrown on the calling thread.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  std::exception_ptr err;
  std::mutex m;
  const long long count = static_cast<long long>(n);
#pragma omp parallel for schedule(static)
  for (long long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard<std::mutex> lock(m);
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
}

}  // namespace trajkit
