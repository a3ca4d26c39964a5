// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <functional>

namespace thzrrf {

/// Worker count: THZRRF_THREADS when set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
int thread_count();

/// Runs body(i) for i in [0, n). Iterations are split into contiguous
/// chunks; body must only write to slots owned by its index.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

} // namespace thzrrf
