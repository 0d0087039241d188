#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace kpz {

// requested > 0 wins; otherwise KPZLAB_THREADS, otherwise hardware.
int resolve_threads(int requested);

// Runs fn(replica) for replica = 0..count-1 on a worker pool. Workers pull
// indices from a shared counter; callers store results by index, so output
// assembly does not depend on the thread count.
inline void parallel_replicas(int64_t count, int threads, const std::function<void(int64_t)>& fn) {
  if (threads <= 1 || count <= 1) {
    for (int64_t r = 0; r < count; ++r) fn(r);
    return;
  }
  std::atomic<int64_t> next{0};
  std::exception_ptr error;
  std::atomic<bool> failed{false};
  auto worker = [&] {
    for (;;) {
      int64_t r = next.fetch_add(1, std::memory_order_relaxed);
      if (r >= count || failed.load(std::memory_order_relaxed)) return;
      try {
        fn(r);
      } catch (...) {
        if (!failed.exchange(true)) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  int n = int(std::min<int64_t>(threads, count));
  pool.reserve(size_t(n));
  for (int i = 0; i < n; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failed) std::rethrow_exception(error);
}

}  // namespace kpz
