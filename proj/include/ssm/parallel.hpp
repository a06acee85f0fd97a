#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace ssm {

inline constexpr std::size_t default_block = std::size_t(1) << 14;

// Deterministic block partition. fn(block_index, begin, end) must write only
// to state owned by its block (e.g. a per-block slot); callers combine the
// slots in block-index order afterwards, so results are identical for every
// thread count. Block functions must not throw.
inline void run_blocks(std::size_t n_items, std::size_t block_size, unsigned threads,
                       const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
  if (n_items == 0) return;
  if (block_size == 0) block_size = 1;
  const std::size_t n_blocks = (n_items + block_size - 1) / block_size;
  if (threads <= 1 || n_blocks <= 1) {
    for (std::size_t b = 0; b < n_blocks; ++b)
      fn(b, b * block_size, std::min(n_items, (b + 1) * block_size));
    return;
  }
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (;;) {
      const std::size_t b = next.fetch_add(1);
      if (b >= n_blocks) return;
      fn(b, b * block_size, std::min(n_items, (b + 1) * block_size));
    }
  };
  const std::size_t n_workers = std::min<std::size_t>(threads, n_blocks);
  std::vector<std::thread> pool;
  pool.reserve(n_workers);
  for (std::size_t t = 0; t < n_workers; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
}

}  // namespace ssm
