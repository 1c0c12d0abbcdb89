#include <arm_neon.h>

#include <cmath>
#include <limits>

#include "dht/simd/kernels.hpp"

namespace dht::simd::detail {

namespace {

void gather_sum(const float* src, std::size_t stride, const std::int32_t* idx, std::size_t n_idx,
                float* out, std::size_t width) {
  std::size_t c = 0;
  for (; c + 16 <= width; c += 16) {
    float32x4_t a0 = vdupq_n_f32(0.0f);
    float32x4_t a1 = vdupq_n_f32(0.0f);
    float32x4_t a2 = vdupq_n_f32(0.0f);
    float32x4_t a3 = vdupq_n_f32(0.0f);
    for (std::size_t k = 0; k < n_idx; ++k) {
      const float* row = src + static_cast<std::size_t>(idx[k]) * stride + c;
      a0 = vaddq_f32(a0, vld1q_f32(row));
      a1 = vaddq_f32(a1, vld1q_f32(row + 4));
      a2 = vaddq_f32(a2, vld1q_f32(row + 8));
      a3 = vaddq_f32(a3, vld1q_f32(row + 12));
    }
    vst1q_f32(out + c, a0);
    vst1q_f32(out + c + 4, a1);
    vst1q_f32(out + c + 8, a2);
    vst1q_f32(out + c + 12, a3);
  }
  for (; c + 4 <= width; c += 4) {
    float32x4_t acc = vdupq_n_f32(0.0f);
    for (std::size_t k = 0; k < n_idx; ++k) {
      acc = vaddq_f32(acc, vld1q_f32(src + static_cast<std::size_t>(idx[k]) * stride + c));
    }
    vst1q_f32(out + c, acc);
  }
  for (; c < width; ++c) {
    float acc = 0.0f;
    for (std::size_t k = 0; k < n_idx; ++k) acc += src[static_cast<std::size_t>(idx[k]) * stride + c];
    out[c] = acc;
  }
}

void sobel_row(const float* up, const float* mid, const float* down, float* out,
               std::size_t width) {
  const float32x4_t two = vdupq_n_f32(2.0f);
  std::size_t i = 0;
  for (; i + 4 <= width; i += 4) {
    const float32x4_t u0 = vld1q_f32(up + i);
    const float32x4_t u1 = vld1q_f32(up + i + 1);
    const float32x4_t u2 = vld1q_f32(up + i + 2);
    const float32x4_t m0 = vld1q_f32(mid + i);
    const float32x4_t m2 = vld1q_f32(mid + i + 2);
    const float32x4_t d0 = vld1q_f32(down + i);
    const float32x4_t d1 = vld1q_f32(down + i + 1);
    const float32x4_t d2 = vld1q_f32(down + i + 2);
    // vmulq + vaddq, never vmlaq/vfmaq: fused forms round differently.
    const float32x4_t right = vaddq_f32(vaddq_f32(u2, vmulq_f32(two, m2)), d2);
    const float32x4_t left = vaddq_f32(vaddq_f32(u0, vmulq_f32(two, m0)), d0);
    const float32x4_t below = vaddq_f32(vaddq_f32(d0, vmulq_f32(two, d1)), d2);
    const float32x4_t above = vaddq_f32(vaddq_f32(u0, vmulq_f32(two, u1)), u2);
    const float32x4_t gx = vsubq_f32(right, left);
    const float32x4_t gy = vsubq_f32(below, above);
    const float32x4_t sq = vaddq_f32(vmulq_f32(gx, gx), vmulq_f32(gy, gy));
    vst1q_f32(out + i, vsqrtq_f32(sq));
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
  const float32x4_t vx = vdupq_n_f32(px);
  const float32x4_t vy = vdupq_n_f32(py);
  float32x4_t best = vdupq_n_f32(std::numeric_limits<float>::infinity());
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const float32x4_t dx = vsubq_f32(vld1q_f32(xs + k), vx);
    const float32x4_t dy = vsubq_f32(vld1q_f32(ys + k), vy);
    best = vminq_f32(best, vaddq_f32(vmulq_f32(dx, dx), vmulq_f32(dy, dy)));
  }
  float result = vminvq_f32(best);
  for (; k < n; ++k) {
    const float dx = xs[k] - px;
    const float dy = ys[k] - py;
    const float d = dx * dx + dy * dy;
    result = d < result ? d : result;
  }
  return result;
}

}  // namespace

const Kernels kNeonKernels{Isa::kNeon, &gather_sum, &sobel_row, &min_sq_distance};

}  // namespace dht::simd::detail
