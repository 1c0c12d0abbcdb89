#include "dht/simd/kernels.hpp"

namespace dht::simd {

std::string_view isa_name(Isa isa) noexcept {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
    case Isa::kNeon:
      return "neon";
  }
  return "unknown";
}

std::optional<Isa> parse_isa(std::string_view name) noexcept {
  if (name == "scalar") return Isa::kScalar;
  if (name == "avx2") return Isa::kAvx2;
  if (name == "neon") return Isa::kNeon;
  return std::nullopt;
}

bool isa_available(Isa isa) noexcept {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if defined(DHT_HAVE_AVX2_KERNELS)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
    case Isa::kNeon:
#if defined(DHT_HAVE_NEON_KERNELS)
      return true;  // baseline on aarch64
#else
      return false;
#endif
  }
  return false;
}

Isa best_isa() noexcept {
  static const Isa best = [] {
    if (isa_available(Isa::kAvx2)) return Isa::kAvx2;
    if (isa_available(Isa::kNeon)) return Isa::kNeon;
    return Isa::kScalar;
  }();
  return best;
}

const Kernels& kernels(Isa isa) noexcept {
  if (!isa_available(isa)) return detail::kScalarKernels;
  switch (isa) {
#if defined(DHT_HAVE_AVX2_KERNELS)
    case Isa::kAvx2:
      return detail::kAvx2Kernels;
#endif
#if defined(DHT_HAVE_NEON_KERNELS)
    case Isa::kNeon:
      return detail::kNeonKernels;
#endif
    default:
      return detail::kScalarKernels;
  }
}

const Kernels& best_kernels() noexcept { return kernels(best_isa()); }

}  // namespace dht::simd
