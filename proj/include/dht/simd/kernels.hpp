#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace dht::simd {

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view isa_name(Isa isa) noexcept;
std::optional<Isa> parse_isa(std::string_view name) noexcept;

// Compiled in and supported by the running CPU.
bool isa_available(Isa isa) noexcept;

// Widest available ISA.
Isa best_isa() noexcept;

// Inner loops with one scalar reference and per-ISA variants. Every variant
// performs the same float operations in the same order per output element,
// so results are bit-identical across ISAs.
struct Kernels {
  Isa isa;

  // out[c] = src[idx[0]*stride + c] + src[idx[1]*stride + c] + ... for
  // c < width, accumulated left to right starting from 0.
  void (*gather_sum)(const float* src, std::size_t stride, const std::int32_t* idx,
                     std::size_t n_idx, float* out, std::size_t width);

  // Sobel gradient magnitude of one output row. up/mid/down point at the
  // replicate-padded neighbor rows, each width + 2 long.
  void (*sobel_row)(const float* up, const float* mid, const float* down, float* out,
                    std::size_t width);

  // min_k (xs[k] - px)^2 + (ys[k] - py)^2; +inf when n == 0.
  float (*min_sq_distance)(float px, float py, const float* xs, const float* ys, std::size_t n);
};

// Falls back to the scalar table when isa is unavailable.
const Kernels& kernels(Isa isa) noexcept;
const Kernels& best_kernels() noexcept;

namespace detail {
extern const Kernels kScalarKernels;
#if defined(DHT_HAVE_AVX2_KERNELS)
extern const Kernels kAvx2Kernels;
#endif
#if defined(DHT_HAVE_NEON_KERNELS)
extern const Kernels kNeonKernels;
#endif
}  // namespace detail

}  // namespace dht::simd
