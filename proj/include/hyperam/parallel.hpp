#pragma once

#include <cstddef>
#include <functional>

namespace hyperam {

/// Worker count: HYPERAM_THREADS if set to a positive integer, otherwise the
/// hardware concurrency.
unsigned thread_budget();

/// Runs body(i) for i in [0, n) on up to thread_budget() threads.  The first
/// exception thrown by any call is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace hyperam
