#pragma once

#include <cstdint>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace horizonlaw {

// Effective worker count: explicit request wins, then HORIZON_LAW_THREADS,
// then 1. Thread count never changes results, only wall time.
inline int resolve_threads(int requested) {
  if (requested > 0) return requested > 256 ? 256 : requested;
  if (const char* env = std::getenv("HORIZON_LAW_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return v > 256 ? 256 : static_cast<int>(v);
  }
  return 1;
}

// Runs fn(i) for i in [0, n) split into contiguous chunks, one per worker.
// Each index is visited exactly once and callers write results into
// preallocated per-index slots, so aggregation order is fixed regardless of
// scheduling. The lowest-index exception wins and is rethrown.
template <typename F>
void parallel_for(std::int64_t n, int threads, F&& fn) {
  if (n <= 0) return;
  threads = resolve_threads(threads);
  if (threads > n) threads = static_cast<int>(n);
  if (threads <= 1) {
    for (std::int64_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) {
    const std::int64_t lo = n * t / threads;
    const std::int64_t hi = n * (t + 1) / threads;
    pool.emplace_back([&, t, lo, hi] {
      try {
        for (std::int64_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& err : errors)
    if (err) std::rethrow_exception(err);
}

}  // namespace horizonlaw
