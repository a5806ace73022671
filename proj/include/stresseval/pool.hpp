#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace stresseval {

// Runs fn(i) for i in [0, n) on at most `width` threads. Indices are handed
// out from a shared counter, so completion order varies but callers write
// results by index and get input order back. The first exception thrown by
// any task is rethrown after all workers stop.
template <class Fn>
void parallel_for(std::size_t n, int width, Fn&& fn) {
  if (n == 0) return;
  const std::size_t threads = std::clamp<std::size_t>(width < 1 ? 1 : width, 1, n);
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first;
  std::mutex mu;
  auto worker = [&] {
    while (!failed.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!first) first = std::current_exception();
        failed = true;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first) std::rethrow_exception(first);
}

template <class T, class Fn>
std::vector<T> parallel_map(std::size_t n, int width, Fn&& fn) {
  std::vector<T> out(n);
  parallel_for(n, width, [&](std::size_t i) { out[i] = fn(i); });
  return out;
}

}  // namespace stresseval
