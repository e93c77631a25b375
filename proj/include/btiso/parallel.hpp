#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace btiso {

/// Worker count from BTISO_THREADS, falling back to the hardware concurrency.
inline int thread_count() {
  if (const char* env = std::getenv("BTISO_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return std::min(n, 256);
    } catch (const std::exception&) {
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace detail {
// Set on worker threads so nested parallel_for calls run inline.
inline thread_local bool in_parallel_worker = false;
}  // namespace detail

/// Calls fn(i) for i in [0, count). Results must be written to per-index slots;
/// the first exception is rethrown on the calling thread.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn, int threads = 0) {
  if (detail::in_parallel_worker) threads = 1;
  if (threads <= 0) threads = thread_count();
  threads = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(threads), count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    detail::in_parallel_worker = true;
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        next.store(count);
      }
    }
  };
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace btiso
