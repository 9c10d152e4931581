#pragma once

#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

namespace treeagg {

inline unsigned resolve_thread_count(int requested) {
  if (requested > 0) return static_cast<unsigned>(requested);
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

// Runs fn(i) for i in [0, n) over a static partition of `threads` workers.
// Each index writes only its own output slot, so results are independent of
// the thread count. The first exception is rethrown after all workers join.
template <class F>
void parallel_for(std::size_t n, int threads, F&& fn) {
  const unsigned worker_count = resolve_thread_count(threads);
  if (worker_count <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(worker_count, n);
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      const std::size_t begin = n * t / workers;
      const std::size_t end = n * (t + 1) / workers;
      try {
        for (std::size_t i = begin; i < end; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (std::thread& worker : pool) worker.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace treeagg
