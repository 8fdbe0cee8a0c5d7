#pragma once

#include <atomic>
#include <cstdint>
#include <thread>
#include <vector>

namespace primerace {

// Deterministic fork/join over fixed-size chunks. Work is cut into chunks of
// `chunk_size` items up front; workers grab chunk indices from an atomic
// counter, store each chunk's partial result into a slot owned by that chunk,
// and the caller folds the slots strictly in chunk order. The reduction
// order (and therefore every floating-point rounding) is a function of the
// chunk geometry alone, never of the thread count.

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

// fn(chunk_index, begin, end) -> Partial;  fold(acc, partial) in chunk order.
template <class Partial, class ChunkFn, class FoldFn>
Partial chunked_reduce(std::uint64_t total, std::uint64_t chunk_size,
                       int threads, ChunkFn&& fn, Partial acc, FoldFn&& fold) {
  if (total == 0) return acc;
  if (chunk_size == 0) chunk_size = 1;
  const std::uint64_t nchunks = (total + chunk_size - 1) / chunk_size;
  std::vector<Partial> parts(nchunks);
  const int nthreads = resolve_threads(threads);

  auto run_chunk = [&](std::uint64_t c) {
    const std::uint64_t begin = c * chunk_size;
    const std::uint64_t end = std::min(total, begin + chunk_size);
    parts[c] = fn(c, begin, end);
  };

  if (nthreads <= 1 || nchunks == 1) {
    for (std::uint64_t c = 0; c < nchunks; ++c) run_chunk(c);
  } else {
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
      for (;;) {
        const std::uint64_t c = next.fetch_add(1, std::memory_order_relaxed);
        if (c >= nchunks) return;
        run_chunk(c);
      }
    };
    std::vector<std::thread> pool;
    const int spawn = static_cast<int>(
        std::min<std::uint64_t>(nchunks, static_cast<std::uint64_t>(nthreads)));
    pool.reserve(spawn);
    for (int i = 0; i < spawn; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (std::uint64_t c = 0; c < nchunks; ++c) acc = fold(std::move(acc), parts[c]);
  return acc;
}

// Parallel for over index chunks with no reduction payload.
template <class ChunkFn>
void chunked_for(std::uint64_t total, std::uint64_t chunk_size, int threads,
                 ChunkFn&& fn) {
  struct Nothing {};
  chunked_reduce<Nothing>(
      total, chunk_size, threads,
      [&](std::uint64_t c, std::uint64_t b, std::uint64_t e) {
        fn(c, b, e);
        return Nothing{};
      },
      Nothing{}, [](Nothing, const Nothing&) { return Nothing{}; });
}

}  // namespace primerace
