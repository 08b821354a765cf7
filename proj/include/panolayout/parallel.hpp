#pragma once

#include <cstddef>
#include <functional>

namespace panolayout {

/// Caps the worker count used by row-parallel rendering. 0 restores the
/// hardware default.
void set_max_threads(unsigned count);
unsigned max_threads();

/// Splits [0, rows) into contiguous blocks and runs `body(begin, end)` on
/// each, possibly concurrently. Blocks never overlap, so bodies that only
/// write their own rows need no synchronization.
void parallel_for_rows(std::size_t rows,
                       const std::function<void(std::size_t, std::size_t)>& body,
                       std::size_t min_rows_per_task = 4);

}  // namespace panolayout
