#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <vector>

#include "dht/simd/kernels.hpp"
#include "oracles.hpp"

using namespace dht::simd;
using dht::testing::Rng;

namespace {

std::vector<Isa> available_isas() {
  std::vector<Isa> out;
  for (Isa isa : {Isa::kScalar, Isa::kAvx2, Isa::kNeon})
    if (isa_available(isa)) out.push_back(isa);
  return out;
}

std::vector<float> random_floats(Rng& rng, std::size_t n, double lo, double hi) {
  std::vector<float> v(n);
  for (float& x : v) x = static_cast<float>(dht::testing::uniform(rng, lo, hi));
  return v;
}

bool bit_equal(const std::vector<float>& a, const std::vector<float>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(float)) == 0;
}

}  // namespace

TEST_CASE("isa names round trip") {
  for (Isa isa : {Isa::kScalar, Isa::kAvx2, Isa::kNeon}) CHECK(parse_isa(isa_name(isa)) == isa);
  CHECK_FALSE(parse_isa("sse9").has_value());
  CHECK(isa_available(Isa::kScalar));
  CHECK(isa_available(best_isa()));
  CHECK(kernels(best_isa()).isa == best_isa());
}

TEST_CASE("unavailable isa falls back to scalar") {
  for (Isa isa : {Isa::kAvx2, Isa::kNeon})
    if (!isa_available(isa)) CHECK(kernels(isa).isa == Isa::kScalar);
}

TEST_CASE("scalar gather_sum matches a double-precision sum on integers") {
  Rng rng(1);
  const std::size_t rows = 50, stride = 13;
  std::vector<float> src(rows * stride);
  for (float& v : src) v = static_cast<float>(dht::testing::uniform_int(rng, -100, 100));
  std::vector<std::int32_t> idx = {3, 7, 7, 0, 49, 12};
  std::vector<float> out(stride);
  kernels(Isa::kScalar).gather_sum(src.data(), stride, idx.data(), idx.size(), out.data(), stride);
  for (std::size_t c = 0; c < stride; ++c) {
    double acc = 0.0;
    for (auto i : idx) acc += src[static_cast<std::size_t>(i) * stride + c];
    CHECK(out[c] == static_cast<float>(acc));
  }
}

TEST_CASE("gather_sum variants are bit-identical to scalar") {
  Rng rng(2);
  const auto& ref = kernels(Isa::kScalar);
  for (Isa isa : available_isas()) {
    const auto& k = kernels(isa);
    for (std::size_t width : {1u, 3u, 7u, 8u, 9u, 31u, 32u, 33u, 64u, 100u}) {
      const std::size_t rows = 40;
      const auto src = random_floats(rng, rows * width, -1.0, 1.0);
      std::vector<std::int32_t> idx(static_cast<std::size_t>(dht::testing::uniform_int(rng, 0, 60)));
      for (auto& i : idx) i = dht::testing::uniform_int(rng, 0, static_cast<int>(rows) - 1);
      std::vector<float> a(width, -7.0f), b(width, 9.0f);
      ref.gather_sum(src.data(), width, idx.data(), idx.size(), a.data(), width);
      k.gather_sum(src.data(), width, idx.data(), idx.size(), b.data(), width);
      CHECK_MESSAGE(bit_equal(a, b), isa_name(isa), " width ", width);
    }
  }
}

TEST_CASE("gather_sum over a prefix of a wider row") {
  Rng rng(3);
  const std::size_t stride = 40, width = 17, rows = 10;
  const auto src = random_floats(rng, rows * stride, -5.0, 5.0);
  std::vector<std::int32_t> idx = {9, 1, 4};
  for (Isa isa : available_isas()) {
    std::vector<float> out(width);
    kernels(isa).gather_sum(src.data(), stride, idx.data(), idx.size(), out.data(), width);
    for (std::size_t c = 0; c < width; ++c)
      CHECK(out[c] == ((0.0f + src[9 * stride + c]) + src[1 * stride + c]) + src[4 * stride + c]);
  }
}

TEST_CASE("sobel_row variants are bit-identical to scalar") {
  Rng rng(4);
  const auto& ref = kernels(Isa::kScalar);
  for (Isa isa : available_isas()) {
    for (std::size_t width : {1u, 2u, 7u, 8u, 9u, 16u, 17u, 100u}) {
      const auto up = random_floats(rng, width + 2, 0.0, 1.0);
      const auto mid = random_floats(rng, width + 2, 0.0, 1.0);
      const auto down = random_floats(rng, width + 2, 0.0, 1.0);
      std::vector<float> a(width), b(width);
      ref.sobel_row(up.data(), mid.data(), down.data(), a.data(), width);
      kernels(isa).sobel_row(up.data(), mid.data(), down.data(), b.data(), width);
      CHECK_MESSAGE(bit_equal(a, b), isa_name(isa), " width ", width);
    }
  }
}

TEST_CASE("scalar sobel_row on a vertical step") {
  // Columns 0..1 dark, 2..3 bright, padded by replication.
  const std::vector<float> row = {0, 0, 0, 1, 1, 1};
  std::vector<float> out(4);
  kernels(Isa::kScalar).sobel_row(row.data(), row.data(), row.data(), out.data(), 4);
  CHECK(out[0] == 0.0f);
  CHECK(out[1] == 4.0f);
  CHECK(out[2] == 4.0f);
  CHECK(out[3] == 0.0f);
}

TEST_CASE("min_sq_distance variants are bit-identical to scalar") {
  Rng rng(5);
  const auto& ref = kernels(Isa::kScalar);
  for (Isa isa : available_isas()) {
    for (std::size_t n : {0u, 1u, 5u, 8u, 9u, 63u, 64u, 257u}) {
      const auto xs = random_floats(rng, n, 0.0, 400.0);
      const auto ys = random_floats(rng, n, 0.0, 400.0);
      for (int trial = 0; trial < 10; ++trial) {
        const float px = static_cast<float>(dht::testing::uniform(rng, 0.0, 400.0));
        const float py = static_cast<float>(dht::testing::uniform(rng, 0.0, 400.0));
        const float a = ref.min_sq_distance(px, py, xs.data(), ys.data(), n);
        const float b = kernels(isa).min_sq_distance(px, py, xs.data(), ys.data(), n);
        CHECK_MESSAGE(std::memcmp(&a, &b, sizeof a) == 0, isa_name(isa), " n ", n);
      }
    }
  }
}

TEST_CASE("min_sq_distance on an empty set is +inf") {
  for (Isa isa : available_isas()) {
    CHECK(kernels(isa).min_sq_distance(0, 0, nullptr, nullptr, 0) ==
          std::numeric_limits<float>::infinity());
  }
}
