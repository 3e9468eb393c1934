#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace rlab {

/// Worker cap: hardware concurrency, overridable via REGRET_META_THREADS.
inline int worker_count(int jobs) {
  unsigned hw = std::thread::hardware_concurrency();
  int limit = hw > 0 ? static_cast<int>(hw) : 1;
  if (const char* env = std::getenv("REGRET_META_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) limit = v;
  }
  return std::max(1, std::min(jobs, limit));
}

/// Runs fn(0..jobs-1) across threads. Results must be written to per-index
/// slots by the caller so reductions stay order-deterministic. The first
/// exception is rethrown after all workers join.
inline void parallel_for(int jobs, const std::function<void(int)>& fn) {
  if (jobs <= 0) return;
  int workers = worker_count(jobs);
  if (workers == 1) {
    for (int i = 0; i < jobs; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  auto run = [&] {
    while (true) {
      int i = next.fetch_add(1);
      if (i >= jobs) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace rlab
