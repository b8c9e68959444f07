#pragma once

// Static-partition parallel loop. Internal helper.

#include <algorithm>
#include <thread>
#include <vector>

namespace ldot::detail {

template <class Index, class Fn>
void parallel_for(Index count, int threads, Fn&& fn, Index serial_below = 64) {
  if (threads <= 1 || count < serial_below) {
    for (Index k = 0; k < count; ++k) fn(k);
    return;
  }
  const Index workers = std::min<Index>(static_cast<Index>(threads), count);
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (Index w = 0; w < workers; ++w) {
    const Index lo = count * w / workers;
    const Index hi = count * (w + 1) / workers;
    pool.emplace_back([lo, hi, &fn] {
      for (Index k = lo; k < hi; ++k) fn(k);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace ldot::detail
