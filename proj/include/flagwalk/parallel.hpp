// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <vector>

#include <omp.h>

#include "flagwalk/random.hpp"
#include "flagwalk/stats.hpp"

namespace flagwalk {

/// Replica fan-out policy. `serial` is the reference path; `parallel` must
/// produce bit-identical results because every replica owns its RNG stream
/// and results are merged in replica order.
enum class Exec { serial, parallel };

/// Thread count honoring FLAGWALK_THREADS, then OpenMP's own default.
inline int thread_count() {
  if (const char* env = std::getenv("FLAGWALK_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return omp_get_max_threads();
}

/// Runs fn(i) for i in [0, n) and returns the results in index order.
template <class Fn>
auto map_replicas(std::int64_t n, Fn&& fn, Exec exec = Exec::parallel)
    -> std::vector<decltype(fn(std::int64_t{0}))> {
  using T = decltype(fn(std::int64_t{0}));
  std::vector<T> out(static_cast<std::size_t>(n));
  if (exec == Exec::serial || n <= 1) {
    for (std::int64_t i = 0; i < n; ++i) out[static_cast<std::size_t>(i)] = fn(i);
    return out;
  }
  std::exception_ptr err = nullptr;
#pragma omp parallel for schedule(dynamic, 1) num_threads(thread_count())
  for (std::int64_t i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = fn(i);
    } catch (...) {
#pragma omp critical(flagwalk_replica_error)
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  return out;
}

/// Monte Carlo over `nsamples` draws of sample(rng), split into a fixed number
/// of chunks with their own streams so the result does not depend on `exec`.
template <class Sample>
Accumulator chunked_accumulate(std::int64_t nsamples, std::uint64_t seed, Stream tag,
                               Sample&& sample, Exec exec = Exec::parallel,
                               std::int64_t chunks = 64) {
  chunks = std::max<std::int64_t>(1, std::min(chunks, nsamples));
  auto parts = map_replicas(
      chunks,
      [&](std::int64_t c) {
        Rng rng = make_stream(seed, tag, static_cast<std::uint64_t>(c));
        const std::int64_t lo = nsamples * c / chunks, hi = nsamples * (c + 1) / chunks;
        Accumulator acc;
        for (std::int64_t i = lo; i < hi; ++i) acc.add(sample(rng));
        return acc;
      },
      exec);
  Accumulator total;
  for (const auto& a : parts) total.merge(a);
  return total;
}

}  // namespace flagwalk
