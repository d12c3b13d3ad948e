#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace pcula {

struct ParallelOptions {
  // 0 means std::thread::hardware_concurrency().
  unsigned threads = 0;
};

inline unsigned resolve_threads(const ParallelOptions& opt) {
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  return opt.threads == 0 ? hw : opt.threads;
}

/// Runs fn(i) for i in [0, count) on a small worker pool. Results must be
/// written to per-index slots; if several cells throw, the exception of the
/// lowest index is rethrown so failures do not depend on scheduling.
inline void parallel_for(std::size_t count, const ParallelOptions& opt,
                         const std::function<void(std::size_t)>& fn) {
  const unsigned workers =
      static_cast<unsigned>(std::min<std::size_t>(resolve_threads(opt), count));
  std::vector<std::exception_ptr> errors(count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace pcula
