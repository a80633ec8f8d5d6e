#pragma once

#include <cstddef>
#include <functional>

namespace contconv {

/// Worker budget: CONTCONV_THREADS when set (clamped to >= 1), otherwise
/// the hardware concurrency.
int thread_budget();

/// Runs fn(i) for i in [0, n). Parallel across the thread budget; falls
/// back to a plain loop for n <= 1 or a budget of 1.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace contconv
