#pragma once

#include <exception>
#include <thread>
#include <vector>

namespace cubelearn {

/// Runs fn(i) for i in [0, count) across hardware threads. Cells must be
/// independent; results keyed by index stay deterministic regardless of the
/// schedule. The first exception thrown by any cell is rethrown.
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  if (count == 0) return;
  unsigned threads = std::thread::hardware_concurrency();
  if (threads == 0) threads = 1;
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }

  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t]() {
      try {
        for (std::size_t i = t; i < count; i += threads) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace cubelearn
