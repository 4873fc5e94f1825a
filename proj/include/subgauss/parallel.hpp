#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace subgauss {

/// Runs body(i) for i in [0, count) on up to `threads` workers. Each worker
/// owns a contiguous index range; body must only write to slot i of any
/// shared output so the result is independent of the worker count.
template <class Body>
void parallel_for(std::size_t count, unsigned threads, Body&& body) {
  const std::size_t workers =
      std::max<std::size_t>(1, std::min<std::size_t>(threads == 0 ? 1 : threads, count));
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = count * w / workers;
    const std::size_t end = count * (w + 1) / workers;
    pool.emplace_back([&, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) body(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

/// Fixed-size chunking for reductions: chunk boundaries depend only on
/// `count` and `chunk`, never on the worker count, so per-chunk partial sums
/// combined in chunk order are bit-stable.
template <class Body>
void parallel_chunks(std::size_t count, std::size_t chunk, unsigned threads, Body&& body) {
  const std::size_t chunks = chunk == 0 ? 0 : (count + chunk - 1) / chunk;
  parallel_for(chunks, threads, [&](std::size_t c) {
    body(c, c * chunk, std::min(count, (c + 1) * chunk));
  });
}

}  // namespace subgauss
