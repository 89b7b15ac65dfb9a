#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace classtab {

/// Worker count: hardware concurrency capped by the CLASSTAB_THREADS
/// environment variable (values < 1 are treated as 1).
inline int worker_count() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n < 1) n = 1;
  if (const char* env = std::getenv("CLASSTAB_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1 && cap < n) n = cap;
  }
  return n;
}

/// Runs fn(block_index, begin, end) for every block of `block_size`
/// consecutive items in [0, count). Blocks are claimed dynamically, so
/// fn must only write state owned by its block index; results are then
/// independent of scheduling.
inline void parallel_blocks(std::int64_t count, std::int64_t block_size,
                            const std::function<void(std::int64_t, std::int64_t,
                                                     std::int64_t)>& fn,
                            int workers = 0) {
  if (count <= 0) return;
  if (block_size < 1) block_size = 1;
  const std::int64_t n_blocks = (count + block_size - 1) / block_size;
  if (workers <= 0) workers = worker_count();
  workers = static_cast<int>(std::min<std::int64_t>(workers, n_blocks));
  if (workers <= 1) {
    for (std::int64_t b = 0; b < n_blocks; ++b)
      fn(b, b * block_size, std::min(count, (b + 1) * block_size));
    return;
  }
  std::atomic<std::int64_t> next{0};
  auto run = [&] {
    for (;;) {
      const std::int64_t b = next.fetch_add(1);
      if (b >= n_blocks) return;
      fn(b, b * block_size, std::min(count, (b + 1) * block_size));
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers) - 1);
  for (int i = 1; i < workers; ++i) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
}

/// Order-independent reduction of per-block partial sums.
inline double pairwise_sum(const std::vector<double>& xs) {
  std::function<double(std::size_t, std::size_t)> rec =
      [&](std::size_t lo, std::size_t hi) -> double {
    if (hi - lo <= 8) {
      double s = 0.0;
      for (std::size_t i = lo; i < hi; ++i) s += xs[i];
      return s;
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    return rec(lo, mid) + rec(mid, hi);
  };
  return xs.empty() ? 0.0 : rec(0, xs.size());
}

}  // namespace classtab
