#ifndef CCLAB_PARALLEL_HPP
#define CCLAB_PARALLEL_HPP

#include <cstdint>
#include <functional>

namespace cclab {

/// Global cap on data-parallel width (the CLI's --workers flag). Defaults to 1.
void set_worker_count(int n);
int worker_count();

/// Runs fn(begin, end) over disjoint contiguous chunks of [0, n), possibly on
/// several threads. Chunk boundaries depend only on n and are safe for
/// pointwise maps that write disjoint outputs; all reductions elsewhere use
/// the fixed pairwise tree, so results do not depend on the worker count.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t, std::int64_t)>& fn);

} // namespace cclab

#endif
