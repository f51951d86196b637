#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace hpce {

inline int default_thread_count() {
  const unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::clamp(hw, 1u, 16u));
}

// Runs fn(chunk_index, begin, end) over [0, n) split into fixed-size chunks.
// Chunk boundaries do not depend on the thread count, so chunk-seeded
// stochastic work reduces to the same result on any machine.
inline void parallel_chunks(std::int64_t n, std::int64_t chunk_size, int threads,
                            const std::function<void(std::int64_t, std::int64_t,
                                                     std::int64_t)>& fn) {
  if (n <= 0) return;
  const std::int64_t n_chunks = (n + chunk_size - 1) / chunk_size;
  threads = std::clamp<int>(threads, 1, static_cast<int>(n_chunks));
  if (threads == 1) {
    for (std::int64_t c = 0; c < n_chunks; ++c) {
      fn(c, c * chunk_size, std::min(n, (c + 1) * chunk_size));
    }
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([=, &fn] {
      for (std::int64_t c = t; c < n_chunks; c += threads) {
        fn(c, c * chunk_size, std::min(n, (c + 1) * chunk_size));
      }
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace hpce
