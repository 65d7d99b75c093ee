#include "uplink/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace uplink {

unsigned resolve_thread_count() {
  unsigned requested = 0;
  if (const char* env = std::getenv("UPLINK_COVERAGE_THREADS")) {
    try {
      requested = static_cast<unsigned>(std::stoul(env));
    } catch (const std::exception&) {
      requested = 0;
    }
  }
  if (requested == 0) requested = std::max(1u, std::thread::hardware_concurrency());
  return requested;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body, unsigned threads) {
  if (n == 0) return;
  if (threads == 0) threads = resolve_thread_count();
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }

  constexpr std::size_t kBlock = 16;
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::atomic<bool> stop{false};

  const auto worker = [&] {
    while (!stop.load(std::memory_order_relaxed)) {
      const std::size_t begin = next.fetch_add(kBlock);
      if (begin >= n) return;
      const std::size_t end = std::min(n, begin + kBlock);
      try {
        for (std::size_t i = begin; i < end; ++i) body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        stop = true;
        return;
      }
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace uplink
