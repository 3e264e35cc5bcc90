#pragma once

#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace spectrode {

namespace detail {
inline std::atomic<std::size_t>& thread_override() {
  static std::atomic<std::size_t> value{0};
  return value;
}
}  // namespace detail

/// Scoped process-wide thread cap; used to pin benchmarks single-threaded.
struct ThreadPin {
  std::size_t saved;
  explicit ThreadPin(std::size_t n)
      : saved(detail::thread_override().exchange(n)) {}
  ~ThreadPin() { detail::thread_override().store(saved); }
  ThreadPin(const ThreadPin&) = delete;
  ThreadPin& operator=(const ThreadPin&) = delete;
};

/// Thread budget: min(hardware, SPECTRODE_THREADS), overridden by ThreadPin.
inline std::size_t thread_budget() {
  if (const std::size_t pinned = detail::thread_override().load())
    return pinned;
  std::size_t n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("SPECTRODE_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1 && static_cast<std::size_t>(cap) < n)
      n = static_cast<std::size_t>(cap);
    if (cap == 1) n = 1;
  }
  return n;
}

/// Runs fn(i) for i in [0, n). Results must be written by index; chunk order
/// is deterministic regardless of thread count. `threads` = 0 means auto.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn,
                         std::size_t threads = 0) {
  if (threads == 0) threads = thread_budget();
  if (threads > n) threads = n == 0 ? 1 : n;
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(threads);
  std::exception_ptr first_error;
  std::mutex err_mutex;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < n; i += threads) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace spectrode
