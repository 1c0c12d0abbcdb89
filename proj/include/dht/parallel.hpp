#pragma once

#include <cstddef>
#include <functional>
#include <optional>

#include "dht/simd/kernels.hpp"

namespace dht {

// Execution knobs shared by the parallel operators. threads == 0 means one
// worker per hardware thread; an unset isa picks the widest available.
struct ComputeOptions {
  unsigned threads = 0;
  std::optional<simd::Isa> isa;

  unsigned resolved_threads() const noexcept;
  const simd::Kernels& kernels() const noexcept;
};

// Splits [0, n) into at most `threads` contiguous chunks and runs
// body(begin, end) on each, one chunk per worker. The partition depends only
// on n and threads. The first exception thrown by a worker is rethrown.
void parallel_for(std::size_t n, unsigned threads,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace dht
