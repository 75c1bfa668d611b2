#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace semigroup_lab {

// Process-wide worker count. Set once from the CLI (--threads or
// SEMIGROUP_LAB_THREADS); defaults to 1 so library results are
// reproducible without configuration.
int max_threads();
void set_max_threads(int n);

namespace detail {
inline std::atomic<int>& thread_count() {
  static std::atomic<int> n{1};
  return n;
}
}  // namespace detail

inline int max_threads() { return detail::thread_count().load(); }
inline void set_max_threads(int n) { detail::thread_count().store(n < 1 ? 1 : n); }

// Splits [0, n) into contiguous chunks, one per worker. Chunk boundaries
// depend only on (n, workers), so per-chunk partial results merged in chunk
// order give bitwise-reproducible reductions.
template <typename Fn>
void parallel_for_chunks(std::size_t n, Fn&& fn) {
  const int workers = std::min<std::size_t>(max_threads(), n == 0 ? 1 : n);
  if (workers <= 1 || n < 2048) {
    fn(std::size_t{0}, n, 0);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (int w = 0; w < workers; ++w) {
    const std::size_t lo = std::min(n, w * chunk);
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, w, &fn] { fn(lo, hi, w); });
  }
  for (auto& t : pool) t.join();
}

// Deterministic max-reduction over [0, n): each chunk reduces locally,
// chunks are merged in fixed order.
template <typename Fn>
double parallel_max(std::size_t n, double init, Fn&& value_at) {
  const int workers = std::min<std::size_t>(max_threads(), n == 0 ? 1 : n);
  std::vector<double> partial(std::max(workers, 1), init);
  parallel_for_chunks(n, [&](std::size_t lo, std::size_t hi, int w) {
    double m = init;
    for (std::size_t i = lo; i < hi; ++i) m = std::max(m, value_at(i));
    partial[w] = m;
  });
  double m = init;
  for (double v : partial) m = std::max(m, v);
  return m;
}

}  // namespace semigroup_lab
