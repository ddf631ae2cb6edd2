#pragma once

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace spinmech {

// Runs fn(i) for i in [0, n). Results must be written by index so the
// output is identical for any worker count.
template <typename Fn>
void parallel_for(long n, int threads, Fn&& fn) {
  threads = std::max(1, threads);
  if (threads == 1 || n < 2) {
    for (long i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<long> next{0};
  std::vector<std::thread> pool;
  const int workers = static_cast<int>(std::min<long>(threads, n));
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (long i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

} // namespace spinmech
