#pragma once

#include <cstddef>
#include <functional>

namespace jetex {

/// Number of worker threads; capped by the JETEX_THREADS environment variable.
unsigned thread_count();

/// Runs body(i) for i in [0, n). Each index is visited exactly once and the
/// body must only write to index-owned outputs, so results do not depend on
/// scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace jetex
