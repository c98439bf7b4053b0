#include "cclab/parallel.hpp"

#include <algorithm>
#include <thread>
#include <vector>

namespace cclab {

namespace {
int g_workers = 1;
} // namespace

void set_worker_count(int n) { g_workers = std::max(1, n); }

int worker_count() { return g_workers; }

void parallel_for(std::int64_t n, const std::function<void(std::int64_t, std::int64_t)>& fn) {
  if (n <= 0) return;
  const int workers = std::min<std::int64_t>(g_workers, n);
  if (workers == 1) {
    fn(0, n);
    return;
  }
  const std::int64_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    const std::int64_t begin = w * chunk;
    const std::int64_t end = std::min<std::int64_t>(begin + chunk, n);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& t : pool) t.join();
}

} // namespace cclab
