#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace fsd {

// Worker count for data-parallel loops. FSD_THREADS overrides the hardware
// default; values are clamped to at least 1.
inline unsigned worker_count() {
  if (const char* env = std::getenv("FSD_THREADS")) {
    long v = std::strtol(env, nullptr, 10);
    if (v >= 1) return static_cast<unsigned>(std::min<long>(v, 256));
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1u : hw;
}

// Runs fn(i) for i in [0, n). Results must be written to per-index slots so
// the outcome is independent of scheduling. The first worker exception is
// rethrown on the caller thread.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  unsigned workers = worker_count();
  if (n == 0) return;
  if (workers <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  std::exception_ptr error;
  std::mutex error_mu;
  for (unsigned t = 0; t < workers; ++t) {
    pool.emplace_back([&, t] {
      std::size_t lo = n * t / workers;
      std::size_t hi = n * (t + 1) / workers;
      try {
        for (std::size_t i = lo; i < hi; ++i) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace fsd
