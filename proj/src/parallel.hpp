#pragma once

#include <algorithm>
#include <cstddef>
#include <future>
#include <thread>
#include <vector>

namespace drotep::detail {

// Runs fn(i) for i in [0, count) on up to `threads` workers (0 = hardware);
// results keep index order and exceptions surface in index order.
template <typename Fn>
auto parallel_map(std::size_t count, int threads, Fn fn) {
  using R = decltype(fn(std::size_t{0}));
  std::vector<R> out;
  out.reserve(count);
  const std::size_t workers = threads > 0 ? static_cast<std::size_t>(threads)
                                          : std::max(1u, std::thread::hardware_concurrency());
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) out.push_back(fn(i));
    return out;
  }
  for (std::size_t begin = 0; begin < count; begin += workers) {
    const std::size_t end = std::min(count, begin + workers);
    std::vector<std::future<R>> futures;
    for (std::size_t i = begin; i < end; ++i) futures.push_back(std::async(std::launch::async, fn, i));
    for (auto& f : futures) out.push_back(f.get());
  }
  return out;
}

}  // namespace drotep::detail
