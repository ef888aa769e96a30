#pragma once

#include <cstddef>
#include <functional>

namespace addmc {

/// Draws per batch; each batch owns one StreamKey.
inline constexpr std::size_t kBatchSize = 1 << 16;

/// Runs body(batch) for batch in [0, n_batches) on up to `threads` workers
/// (0 = hardware concurrency). Exceptions from workers are rethrown.
void parallel_for_batches(std::size_t n_batches, const std::function<void(std::size_t)>& body,
                          unsigned threads = 0);

}  // namespace addmc
