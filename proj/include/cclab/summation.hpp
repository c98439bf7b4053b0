#ifndef CCLAB_SUMMATION_HPP
#define CCLAB_SUMMATION_HPP

#include <cstddef>
#include <span>

namespace cclab {

/// Deterministic pairwise-tree sum. The reduction tree depends only on the
/// length of the input, never on thread count or iteration order, so results
/// are bit-identical across runs and worker configurations.
double pairwise_sum(std::span<const double> values);

} // namespace cclab

#endif
