#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <vector>

#include "dht/error.hpp"
#include "dht/refine.hpp"
#include "oracles.hpp"

using namespace dht;
using dht::testing::Rng;

namespace {

EdgeMap constant_edges(int w, int h, float v) {
  return EdgeMap(ImageDims(w, h), std::vector<float>(static_cast<std::size_t>(w) * h, v));
}

EdgeMap edges_with_row(int w, int h, int row) {
  std::vector<float> v(static_cast<std::size_t>(w) * h, 0.0f);
  for (int c = 0; c < w; ++c) v[static_cast<std::size_t>(row) * w + c] = 1.0f;
  return EdgeMap(ImageDims(w, h), std::move(v));
}

EdgeMap random_edges(Rng& rng, const ImageDims& dims) {
  std::vector<float> v(static_cast<std::size_t>(dims.width) * dims.height);
  for (float& x : v) x = static_cast<float>(dht::testing::uniform(rng, 0.0, 1.0));
  // A few bright lines give the search something to find.
  const int n = dht::testing::uniform_int(rng, 0, 3);
  for (int i = 0; i < n; ++i) {
    const auto c = dht::testing::random_chord(rng, dims, 4.0);
    FeatureMap m(1, dims.height, dims.width);
    dht::testing::draw_line(m, c, 1.0, 1.0f);
    for (std::size_t k = 0; k < v.size(); ++k) v[k] = std::max(v[k], m.data()[k]);
  }
  return EdgeMap(dims, std::move(v));
}

// Direct 3x3 Sobel in double with replicate padding, normalized by the max.
std::vector<double> reference_sobel(const FeatureMap& img) {
  const int h = img.rows(), w = img.cols();
  auto px = [&](int r, int c) {
    return static_cast<double>(img(0, std::clamp(r, 0, h - 1), std::clamp(c, 0, w - 1)));
  };
  const int kx[3][3] = {{-1, 0, 1}, {-2, 0, 2}, {-1, 0, 1}};
  const int ky[3][3] = {{-1, -2, -1}, {0, 0, 0}, {1, 2, 1}};
  std::vector<double> out(static_cast<std::size_t>(w) * h);
  double peak = 0.0;
  for (int r = 0; r < h; ++r) {
    for (int c = 0; c < w; ++c) {
      double gx = 0.0, gy = 0.0;
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) {
          gx += kx[i][j] * px(r + i - 1, c + j - 1);
          gy += ky[i][j] * px(r + i - 1, c + j - 1);
        }
      out[static_cast<std::size_t>(r) * w + c] = std::hypot(gx, gy);
      peak = std::max(peak, std::hypot(gx, gy));
    }
  }
  if (peak > 0.0)
    for (double& v : out) v /= peak;
  return out;
}

}  // namespace

TEST_CASE("edge map validation") {
  CHECK_THROWS_AS(EdgeMap(ImageDims(2, 2), {0.0f, 0.5f, 1.0f}), InvalidInput);
  CHECK_THROWS_AS(EdgeMap(ImageDims(2, 1), {0.0f, 1.5f}), InvalidInput);
  CHECK_THROWS_AS(EdgeMap(FeatureMap(2, 3, 3)), InvalidInput);
}

TEST_CASE("sobel_edge_map") {
  SUBCASE("constant image") {
    const auto e = sobel_edge_map(FeatureMap(1, 8, 9, 0.4f));
    for (float v : e.values()) CHECK(v == 0.0f);
  }
  SUBCASE("vertical step") {
    FeatureMap img(1, 10, 12);
    for (int r = 0; r < 10; ++r)
      for (int c = 6; c < 12; ++c) img(0, r, c) = 1.0f;
    const auto e = sobel_edge_map(img);
    for (int r = 0; r < 10; ++r) {
      CHECK(e.at(r, 5) == 1.0f);
      CHECK(e.at(r, 6) == 1.0f);
      for (int c : {0, 1, 2, 3, 4, 7, 8, 9, 10, 11}) CHECK(e.at(r, c) == 0.0f);
    }
  }
  SUBCASE("45 degree step on 6x6") {
    FeatureMap img(1, 6, 6);
    for (int r = 0; r < 6; ++r)
      for (int c = 0; c < 6; ++c) img(0, r, c) = r > c ? 1.0f : 0.0f;
    const auto e = sobel_edge_map(img);
    const auto expected = reference_sobel(img);
    for (int r = 0; r < 6; ++r)
      for (int c = 0; c < 6; ++c) CHECK(e.at(r, c) == doctest::Approx(expected[r * 6 + c]));
    // The strongest responses sit on the two diagonals bordering the step;
    // pixels two or more steps away see no gradient.
    for (int r = 0; r < 6; ++r)
      for (int c = 0; c < 6; ++c)
        if (e.at(r, c) == 1.0f) CHECK((r - c == 0 || r - c == 1));
    for (int i = 1; i < 4; ++i) CHECK(e.at(i, i) == e.at(i + 1, i));
    for (int r = 0; r < 6; ++r)
      for (int c = 0; c < 6; ++c)
        if (r - c >= 3 || c - r >= 2) CHECK(e.at(r, c) == 0.0f);
  }
  SUBCASE("random images match the reference") {
    Rng rng(6);
    for (int i = 0; i < 10; ++i) {
      FeatureMap img(1, dht::testing::uniform_int(rng, 1, 20), dht::testing::uniform_int(rng, 1, 20));
      for (float& v : img.data()) v = static_cast<float>(dht::testing::uniform(rng, 0.0, 1.0));
      const auto e = sobel_edge_map(img);
      const auto expected = reference_sobel(img);
      for (std::size_t k = 0; k < expected.size(); ++k)
        CHECK(e.values()[k] == doctest::Approx(expected[k]).epsilon(1e-5));
    }
  }
  SUBCASE("thread counts and ISAs agree exactly") {
    Rng rng(1);
    const auto img = dht::testing::random_tensor<SpatialTag>(rng, 1, 37, 53);
    const auto ref = sobel_edge_map(img, {1, simd::Isa::kScalar});
    for (unsigned t : {1u, 2u, 5u}) {
      CHECK(sobel_edge_map(img, {t, simd::best_isa()}).values() == ref.values());
    }
  }
  SUBCASE("multi-channel input") {
    CHECK_THROWS_AS(sobel_edge_map(FeatureMap(3, 4, 4)), InvalidInput);
  }
}

TEST_CASE("edge_density examples") {
  const ImageDims dims(100, 100);
  const LineSegment row10{{0, 10.5}, {100, 10.5}};
  CHECK(edge_density(row10, constant_edges(100, 100, 0.0f)) == 0.0);
  CHECK(edge_density(row10, constant_edges(100, 100, 1.0f)) == 1.0);
  CHECK(edge_density(row10, edges_with_row(100, 100, 10)) == doctest::Approx(1.0 / 3.0));
  CHECK(edge_density({{0, 10}, {100, 10}}, edges_with_row(100, 100, 10)) ==
        doctest::Approx(1.0 / 3.0));
  // Band on the border row is clipped: rows 0 and 1 only.
  CHECK(edge_density({{0, 0.5}, {100, 0.5}}, edges_with_row(100, 100, 0)) ==
        doctest::Approx(1.0 / 2.0));
  CHECK_THROWS_AS(edge_density({{-10, -10}, {-5, -3}}, constant_edges(100, 100, 1.0f)),
                  InvalidInput);
}

TEST_CASE("edge_density stays in [0, 1]") {
  Rng rng(2);
  const ImageDims dims(40, 30);
  for (int i = 0; i < 200; ++i) {
    const auto e = random_edges(rng, dims);
    const double rho = edge_density(dht::testing::random_segment(rng, dims), e);
    CHECK(rho >= 0.0);
    CHECK(rho <= 1.0);
  }
}

TEST_CASE("refine_candidates") {
  const ImageDims dims(100, 100);
  const LineSegment seg{{0, 10.5}, {100, 10.5}};

  SUBCASE("delta 0 is the segment itself") {
    const auto c = refine_candidates(seg, dims, 0);
    REQUIRE(c.size() == 1);
    CHECK(c[0].segment == seg);
  }
  SUBCASE("offset range") {
    const auto c = refine_candidates(seg, dims, 5);
    CHECK(c.size() == 36);
    int lo = 0, hi = 0;
    for (const auto& k : c) {
      lo = std::min({lo, k.offset0, k.offset1});
      hi = std::max({hi, k.offset0, k.offset1});
    }
    CHECK(lo == -3);
    CHECK(hi == 2);
  }
  SUBCASE("count is (d+1)^2 minus collapsed walks") {
    Rng rng(3);
    for (int i = 0; i < 300; ++i) {
      const ImageDims d(dht::testing::uniform_int(rng, 3, 40), dht::testing::uniform_int(rng, 3, 40));
      // Integer border positions make collisions possible.
      const int perimeter = 2 * (d.width + d.height);
      const int u0 = dht::testing::uniform_int(rng, 0, perimeter - 1);
      int u1 = dht::testing::uniform_int(rng, 0, perimeter - 1);
      if (u1 == u0) u1 = (u0 + 1) % perimeter;
      const LineSegment s{boundary_point(u0, d), boundary_point(u1, d)};
      const int delta = dht::testing::uniform_int(rng, 0, 9);
      int collapsed = 0;
      for (int o0 = -((delta + 1) / 2); o0 <= delta / 2; ++o0)
        for (int o1 = -((delta + 1) / 2); o1 <= delta / 2; ++o1)
          if ((((u0 + o0) - (u1 + o1)) % perimeter + perimeter) % perimeter == 0) ++collapsed;
      CHECK(static_cast<int>(refine_candidates(s, d, delta).size()) ==
            (delta + 1) * (delta + 1) - collapsed);
    }
  }
  SUBCASE("invalid inputs") {
    CHECK_THROWS_AS(refine_candidates(seg, dims, -1), InvalidInput);
    CHECK_THROWS_AS(refine_candidates({{10, 10}, {20, 20}}, dims, 2), InvalidInput);
  }
}

TEST_CASE("refine_line examples") {
  const ImageDims dims(100, 100);
  const LineSegment row10{{0, 10.5}, {100, 10.5}};

  SUBCASE("delta 0 is the identity") {
    Rng rng(4);
    const auto e = random_edges(rng, dims);
    CHECK(refine_line(row10, e, 0) == row10);
  }
  SUBCASE("moves toward a bright row") {
    const auto e = edges_with_row(100, 100, 12);
    const auto out = refine_line(row10, e, 5);
    CHECK(edge_density(row10, e) == 0.0);
    CHECK(edge_density(out, e) == doctest::Approx(1.0 / 3.0));
    // Rows 11.5 and 12.5 both reach the bright row's band; the smaller move
    // wins the tie.
    CHECK(out.p0.y == doctest::Approx(11.5));
    CHECK(out.p1.y == doctest::Approx(11.5));
  }
  SUBCASE("flat edge map keeps the input") {
    CHECK(refine_line(row10, constant_edges(100, 100, 0.0f), 7) == row10);
    CHECK(refine_line(row10, constant_edges(100, 100, 1.0f), 7) == row10);
  }
  SUBCASE("a segment already on its best line stays") {
    const auto e = edges_with_row(100, 100, 10);
    CHECK(refine_line(row10, e, 5) == row10);
  }
}

TEST_CASE("refine_line never lowers edge density") {
  Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    const ImageDims dims(dht::testing::uniform_int(rng, 20, 80), dht::testing::uniform_int(rng, 20, 80));
    const auto e = random_edges(rng, dims);
    const auto seg = dht::testing::random_chord(rng, dims, 10.0);
    const int delta = dht::testing::uniform_int(rng, 0, 9);
    const auto out = refine_line(seg, e, delta);
    CHECK(edge_density(out, e) >= edge_density(seg, e));
    if (delta == 0) CHECK(out == seg);
    CHECK(refine_line(seg, e, delta, {3, {}}) == out);
  }
}
