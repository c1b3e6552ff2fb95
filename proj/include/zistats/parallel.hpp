#pragma once

// Deterministic fork-join helper.  Bodies write only to their own
// index; callers do every reduction serially afterwards, so results
// are bit-identical for any thread count.

#include <cstdint>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace zistats {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

template <typename Body>
void parallel_for(std::int64_t count, int threads, Body&& body) {
  threads = resolve_threads(threads);
  if (count <= 0) return;
  if (threads <= 1 || count == 1) {
    for (std::int64_t i = 0; i < count; ++i) body(i);
    return;
  }
  if (static_cast<std::int64_t>(threads) > count)
    threads = static_cast<int>(count);

  std::vector<std::thread> pool;
  pool.reserve(threads);
  std::vector<std::exception_ptr> errors(threads);
  const std::int64_t chunk = (count + threads - 1) / threads;
  for (int t = 0; t < threads; ++t) {
    const std::int64_t lo = t * chunk;
    const std::int64_t hi = std::min<std::int64_t>(count, lo + chunk);
    pool.emplace_back([&, t, lo, hi] {
      try {
        for (std::int64_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace zistats
