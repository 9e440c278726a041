#ifndef CRSN_PARALLEL_HPP
#define CRSN_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace crsn {

/// 0 means one worker per hardware thread.
inline unsigned resolve_workers(unsigned requested) {
  if (requested != 0) return requested;
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs task(i) for i in [0, n_tasks) on up to `workers` threads. Tasks must
/// write only to their own output slot; callers reduce the slots in index
/// order afterwards, so results never depend on scheduling. The first
/// exception thrown by a task is rethrown here.
template <class Task>
void parallel_for(std::size_t n_tasks, unsigned workers, Task&& task) {
  const std::size_t n_threads =
      std::min<std::size_t>(resolve_workers(workers), std::max<std::size_t>(n_tasks, 1));
  if (n_threads <= 1) {
    for (std::size_t i = 0; i < n_tasks; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto run = [&] {
    for (std::size_t i = next++; i < n_tasks; i = next++) {
      try {
        task(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = n_tasks;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(n_threads - 1);
  for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(run);
  run();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace crsn

#endif  // CRSN_PARALLEL_HPP
