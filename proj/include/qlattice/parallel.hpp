#pragma once

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace qlattice {

// Worker count: hardware concurrency capped by QLATTICE_THREADS.
inline unsigned thread_budget() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("QLATTICE_THREADS")) {
    long cap = std::strtol(env, nullptr, 10);
    if (cap > 0 && static_cast<unsigned>(cap) < hw) hw = static_cast<unsigned>(cap);
  }
  return hw;
}

// Index-parallel loop; callers write results by index, so reductions over the
// ordered results stay deterministic regardless of the worker count.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const unsigned nt = thread_budget();
  if (nt <= 1 || n < 256) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  const std::size_t chunk = (n + nt - 1) / nt;
  for (unsigned t = 0; t < nt; ++t) {
    const std::size_t lo = t * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&fn, lo, hi] {
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace qlattice
