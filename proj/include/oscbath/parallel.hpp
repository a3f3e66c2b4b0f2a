// parallel.hpp -- deterministic fan-out over ensemble members.
#pragma once

#include <algorithm>
#include <atomic>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

namespace oscbath {

// Splits [0, n) into n_chunks contiguous ranges and runs fn(chunk, begin, end)
// on up to n_threads workers. Chunk boundaries depend only on n and n_chunks,
// never on the worker count, so per-chunk accumulators reduced in chunk order
// give bit-identical results for any --threads value.
inline void run_chunked(long n, int n_chunks, int n_threads,
                        const std::function<void(int, long, long)>& fn) {
  if (n <= 0) return;
  n_chunks = static_cast<int>(std::max<long>(1, std::min<long>(n_chunks, n)));
  std::vector<std::pair<long, long>> ranges;
  ranges.reserve(n_chunks);
  const long base = n / n_chunks;
  const long rem = n % n_chunks;
  long at = 0;
  for (int c = 0; c < n_chunks; ++c) {
    const long len = base + (c < rem ? 1 : 0);
    ranges.emplace_back(at, at + len);
    at += len;
  }

  n_threads = std::max(1, std::min(n_threads, n_chunks));
  if (n_threads == 1) {
    for (int c = 0; c < n_chunks; ++c) fn(c, ranges[c].first, ranges[c].second);
    return;
  }

  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mu;
  auto worker = [&] {
    for (;;) {
      const int c = next.fetch_add(1);
      if (c >= static_cast<int>(ranges.size())) return;
      try {
        fn(c, ranges[c].first, ranges[c].second);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mu);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (int w = 0; w < n_threads; ++w) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace oscbath
