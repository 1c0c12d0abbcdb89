#include <cmath>
#include <limits>

#include "dht/simd/kernels.hpp"

namespace dht::simd::detail {

namespace {

void gather_sum(const float* src, std::size_t stride, const std::int32_t* idx, std::size_t n_idx,
                float* out, std::size_t width) {
  for (std::size_t c = 0; c < width; ++c) out[c] = 0.0f;
  for (std::size_t k = 0; k < n_idx; ++k) {
    const float* row = src + static_cast<std::size_t>(idx[k]) * stride;
    for (std::size_t c = 0; c < width; ++c) out[c] += row[c];
  }
}

void sobel_row(const float* up, const float* mid, const float* down, float* out,
               std::size_t width) {
  for (std::size_t i = 0; i < width; ++i) {
    const float right = up[i + 2] + 2.0f * mid[i + 2] + down[i + 2];
    const float left = up[i] + 2.0f * mid[i] + down[i];
    const float below = down[i] + 2.0f * down[i + 1] + down[i + 2];
    const float above = up[i] + 2.0f * up[i + 1] + up[i + 2];
    const float gx = right - left;
    const float gy = below - above;
    out[i] = std::sqrt(gx * gx + gy * gy);
  }
}

float min_sq_distance(float px, float py, const float* xs, const float* ys, std::size_t n) {
  float best = std::numeric_limits<float>::infinity();
  for (std::size_t k = 0; k < n; ++k) {
    const float dx = xs[k] - px;
    const float dy = ys[k] - py;
    const float d = dx * dx + dy * dy;
    best = d < best ? d : best;
  }
  return best;
}

}  // namespace

const Kernels kScalarKernels{Isa::kScalar, &gather_sum, &sobel_row, &min_sq_distance};

}  // namespace dht::simd::detail
