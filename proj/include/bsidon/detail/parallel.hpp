#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace bsidon::detail {

/// Runs body(worker, task) for task in [0, tasks) on `workers` threads.
/// Tasks are handed out dynamically; callers must make the reduction
/// order-independent. The first exception thrown by any task is rethrown.
template <class Body>
void parallel_tasks(int workers, std::size_t tasks, Body&& body) {
  workers = std::max(1, std::min<int>(workers, static_cast<int>(std::max<std::size_t>(tasks, 1))));
  if (workers == 1) {
    for (std::size_t t = 0; t < tasks; ++t) body(0, t);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (auto t = next.fetch_add(1); t < tasks; t = next.fetch_add(1)) body(w, t);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(tasks);
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace bsidon::detail
