// Built with -mavx2; only reached after a runtime CPU check.
#include <immintrin.h>

#include <cmath>
#include <limits>

#include "dht/simd/kernels.hpp"

namespace dht::simd::detail {

namespace {

void gather_sum(const float* src, std::size_t stride, const std::int32_t* idx, std::size_t n_idx,
                float* out, std::size_t width) {
  std::size_t c = 0;
  for (; c + 32 <= width; c += 32) {
    __m256 a0 = _mm256_setzero_ps();
    __m256 a1 = _mm256_setzero_ps();
    __m256 a2 = _mm256_setzero_ps();
    __m256 a3 = _mm256_setzero_ps();
    for (std::size_t k = 0; k < n_idx; ++k) {
      const float* row = src + static_cast<std::size_t>(idx[k]) * stride + c;
      a0 = _mm256_add_ps(a0, _mm256_loadu_ps(row));
      a1 = _mm256_add_ps(a1, _mm256_loadu_ps(row + 8));
      a2 = _mm256_add_ps(a2, _mm256_loadu_ps(row + 16));
      a3 = _mm256_add_ps(a3, _mm256_loadu_ps(row + 24));
    }
    _mm256_storeu_ps(out + c, a0);
    _mm256_storeu_ps(out + c + 8, a1);
    _mm256_storeu_ps(out + c + 16, a2);
    _mm256_storeu_ps(out + c + 24, a3);
  }
  for (; c + 8 <= width; c += 8) {
    __m256 acc = _mm256_setzero_ps();
    for (std::size_t k = 0; k < n_idx; ++k) {
      acc = _mm256_add_ps(acc, _mm256_loadu_ps(src + static_cast<std::size_t>(idx[k]) * stride + c));
    }
    _mm256_storeu_ps(out + c, acc);
  }
  for (; c < width; ++c) {
    float acc = 0.0f;
    for (std::size_t k = 0; k < n_idx; ++k) acc += src[static_cast<std::size_t>(idx[k]) * stride + c];
    out[c] = acc;
  }
}

void sobel_row(const float* up, const float* mid, const float* down, float* out,
               std::size_t width) {
  const __m256 two = _mm256_set1_ps(2.0f);
  std::size_t i = 0;
  for (; i + 8 <= width; i += 8) {
    const __m256 u0 = _mm256_loadu_ps(up + i);
    const __m256 u1 = _mm256_loadu_ps(up + i + 1);
    const __m256 u2 = _mm256_loadu_ps(up + i + 2);
    const __m256 m0 = _mm256_loadu_ps(mid + i);
    const __m256 m2 = _mm256_loadu_ps(mid + i + 2);
    const __m256 d0 = _mm256_loadu_ps(down + i);
    const __m256 d1 = _mm256_loadu_ps(down + i + 1);
    const __m256 d2 = _mm256_loadu_ps(down + i + 2);
    const __m256 right = _mm256_add_ps(_mm256_add_ps(u2, _mm256_mul_ps(two, m2)), d2);
    const __m256 left = _mm256_add_ps(_mm256_add_ps(u0, _mm256_mul_ps(two, m0)), d0);
    const __m256 below = _mm256_add_ps(_mm256_add_ps(d0, _mm256_mul_ps(two, d1)), d2);
    const __m256 above = _mm256_add_ps(_mm256_add_ps(u0, _mm256_mul_ps(two, u1)), u2);
    const __m256 gx = _mm256_sub_ps(right, left);
    const __m256 gy = _mm256_sub_ps(below, above);
    const __m256 sq = _mm256_add_ps(_mm256_mul_ps(gx, gx), _mm256_mul_ps(gy, gy));
    _mm256_storeu_ps(out + i, _mm256_sqrt_ps(sq));
  }
  for (; i < width; ++i) {
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
  const __m256 vx = _mm256_set1_ps(px);
  const __m256 vy = _mm256_set1_ps(py);
  __m256 best = _mm256_set1_ps(std::numeric_limits<float>::infinity());
  std::size_t k = 0;
  for (; k + 8 <= n; k += 8) {
    const __m256 dx = _mm256_sub_ps(_mm256_loadu_ps(xs + k), vx);
    const __m256 dy = _mm256_sub_ps(_mm256_loadu_ps(ys + k), vy);
    best = _mm256_min_ps(best, _mm256_add_ps(_mm256_mul_ps(dx, dx), _mm256_mul_ps(dy, dy)));
  }
  alignas(32) float lanes[8];
  _mm256_store_ps(lanes, best);
  float result = lanes[0];
  for (int j = 1; j < 8; ++j) result = lanes[j] < result ? lanes[j] : result;
  for (; k < n; ++k) {
    const float dx = xs[k] - px;
    const float dy = ys[k] - py;
    const float d = dx * dx + dy * dy;
    result = d < result ? d : result;
  }
  return result;
}

}  // namespace

const Kernels kAvx2Kernels{Isa::kAvx2, &gather_sum, &sobel_row, &min_sq_distance};

}  // namespace dht::simd::detail
