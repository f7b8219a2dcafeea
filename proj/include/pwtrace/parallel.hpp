#pragma once

#include <cstddef>
#include <functional>

namespace pwtrace {

/// Worker count: PWTRACE_THREADS when set (min 1), else hardware concurrency
/// capped at 8.
std::size_t worker_count();

/// Runs fn(begin, end) over fixed-size index chunks, possibly on several
/// threads. Chunk boundaries do not depend on the worker count, so writes
/// into per-index slots are reproducible bit for bit.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace pwtrace
