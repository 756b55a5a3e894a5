#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace mmse_kl {

/// Worker count for grid evaluation: MMSE_KL_THREADS if set (>= 1),
/// otherwise the hardware concurrency.
inline int thread_budget() {
  if (const char* env = std::getenv("MMSE_KL_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1 && v <= 1024) return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

/// Runs body(i) for i in [0, n). body must write only to slots indexed by
/// i, so the result is independent of scheduling.
template <class F>
void parallel_for(std::size_t n, F&& body) {
  const std::size_t threads =
      std::min<std::size_t>(static_cast<std::size_t>(thread_budget()),
                            n > 0 ? n : 1);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace mmse_kl
