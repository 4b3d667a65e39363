#pragma once

#include <cstddef>
#include <functional>

namespace gocc {

// Worker count: the GOC_THREADS environment variable when set to a positive
// integer, otherwise the hardware concurrency. A process-wide override (used
// by tests) takes precedence over both.
int thread_count();

// 0 clears the override.
void set_thread_count_override(int threads);

// Runs body(begin, end) over [0, n) in chunks of `grain` indices. Chunk
// boundaries depend only on n and grain, never on the thread count, so any
// chunk-local computation is bit-identical however many workers run.
void parallel_for(std::size_t n, std::size_t grain,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace gocc
