#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "dht/detect.hpp"
#include "dht/error.hpp"
#include "dht/metrics.hpp"
#include "oracles.hpp"

using namespace dht;
using dht::testing::Rng;

namespace {

const QuantizationGrid kGrid({400, 400}, kDefaultDTheta, kDefaultDr);

}  // namespace

TEST_CASE("probability map validation") {
  CHECK_THROWS_AS(ProbabilityMap(0, 3), InvalidInput);
  CHECK_THROWS_AS(ProbabilityMap(2, 2, {0.1, 0.2, 0.3}), InvalidInput);
  CHECK_THROWS_AS(ProbabilityMap(1, 2, {0.1, 1.5}), InvalidInput);
  CHECK_THROWS_AS(ProbabilityMap(1, 2, {0.1, std::nan("")}), InvalidInput);
  CHECK(ProbabilityMap(1, 2, {0.0, 1.0}).at(0, 1) == 1.0);
}

TEST_CASE("ground_truth_map") {
  SUBCASE("no lines") {
    const auto m = ground_truth_map({}, kGrid);
    for (double v : m.values()) CHECK(v == 0.0);
  }
  SUBCASE("one interior line spreads a 5x5 Gaussian") {
    const ParametricLine line = bin_center({40, 150}, kGrid);
    const auto m = ground_truth_map(std::vector{line}, kGrid);
    CHECK(m.at(40, 150) == 1.0);
    CHECK(m.at(39, 150) == doctest::Approx(std::exp(-0.5)));
    CHECK(m.at(41, 150) == doctest::Approx(std::exp(-0.5)));
    CHECK(m.at(40, 149) == doctest::Approx(std::exp(-0.5)));
    CHECK(m.at(40, 151) == doctest::Approx(std::exp(-0.5)));
    CHECK(m.at(41, 151) == doctest::Approx(std::exp(-1.0)));
    CHECK(m.at(42, 152) == doctest::Approx(std::exp(-4.0)));
    CHECK(m.at(38, 150) == doctest::Approx(std::exp(-2.0)));
    CHECK(m.at(43, 150) == 0.0);
    CHECK(m.at(40, 153) == 0.0);
    double total = 0.0;
    for (double v : m.values()) total += v > 0.0;
    CHECK(total == 25);
  }
  SUBCASE("duplicate lines are idempotent") {
    const ParametricLine line = bin_center({10, 10}, kGrid);
    const auto one = ground_truth_map(std::vector{line}, kGrid);
    const auto two = ground_truth_map(std::vector{line, line}, kGrid);
    CHECK(std::equal(one.values().begin(), one.values().end(), two.values().begin()));
  }
  SUBCASE("overlaps combine by max and stay in [0, 1]") {
    const auto m = ground_truth_map(std::vector{bin_center({10, 10}, kGrid), bin_center({10, 11}, kGrid)}, kGrid);
    CHECK(m.at(10, 10) == 1.0);
    CHECK(m.at(10, 11) == 1.0);
    for (double v : m.values()) CHECK((v >= 0.0 && v <= 1.0));
  }
  SUBCASE("out-of-range line") {
    CHECK_THROWS_AS(ground_truth_map(std::vector{ParametricLine{0.0, 1000.0}}, kGrid),
                    InvalidInput);
  }
}

TEST_CASE("bce_loss") {
  SUBCASE("perfect zero prediction") {
    const ProbabilityMap z(3, 7);
    CHECK(bce_loss(z, z) <= 21 * 1e-5);
    CHECK(bce_loss(z, z) >= 0.0);
  }
  SUBCASE("half everywhere against zeros") {
    const ProbabilityMap pred(2, 5, std::vector<double>(10, 0.5));
    CHECK(bce_loss(pred, ProbabilityMap(2, 5)) == doctest::Approx(10 * std::log(2.0)));
  }
  SUBCASE("shape mismatch") {
    CHECK_THROWS_AS(bce_loss(ProbabilityMap(2, 5), ProbabilityMap(5, 2)), InvalidInput);
  }
  SUBCASE("stationary and minimal at pred = target") {
    Rng rng(3);
    std::vector<double> g(20);
    for (double& v : g) v = dht::testing::uniform(rng, 0.05, 0.95);
    const ProbabilityMap target(4, 5, g);
    const double at_target = bce_loss(target, target);
    const double h = 1e-5;
    for (std::size_t i = 0; i < g.size(); ++i) {
      auto up = g, down = g;
      up[i] += h;
      down[i] -= h;
      const double lu = bce_loss(ProbabilityMap(4, 5, up), target);
      const double ld = bce_loss(ProbabilityMap(4, 5, down), target);
      CHECK(std::abs((lu - ld) / (2 * h)) < 1e-4);
      CHECK(lu > at_target);
      CHECK(ld > at_target);
    }
  }
  SUBCASE("non-negative") {
    Rng rng(4);
    for (int i = 0; i < 100; ++i) {
      std::vector<double> p(6), g(6);
      for (double& v : p) v = dht::testing::uniform(rng, 0.0, 1.0);
      for (double& v : g) v = dht::testing::uniform(rng, 0.0, 1.0);
      CHECK(bce_loss(ProbabilityMap(2, 3, p), ProbabilityMap(2, 3, g)) >= 0.0);
    }
  }
}

TEST_CASE("detect_lines examples") {
  SUBCASE("empty map") {
    CHECK(detect_lines(ProbabilityMap(kGrid.n_theta(), kGrid.n_r()), kGrid).empty());
  }
  SUBCASE("singleton component") {
    ProbabilityMap m(kGrid.n_theta(), kGrid.n_r());
    m.at(30, 120) = 0.9;
    const auto d = detect_lines(m, kGrid);
    REQUIRE(d.size() == 1);
    const auto c = bin_center({30, 120}, kGrid);
    CHECK(d[0].line.theta == doctest::Approx(c.theta));
    CHECK(d[0].line.r == doctest::Approx(c.r));
    CHECK(d[0].score == 0.9);
    CHECK(d[0].component_size == 1);
  }
  SUBCASE("Gaussian blob of one line") {
    // A line on a bin center, so quantization itself loses nothing.
    const LineSegment src = segment_from_params(bin_center({27, 230}, kGrid), kGrid.dims());
    const auto m = ground_truth_map(std::vector{params_from_segment(src, kGrid.dims())}, kGrid);
    const auto d = detect_lines(m, kGrid, 0.01);
    REQUIRE(d.size() == 1);
    CHECK(d[0].component_size == 25);
    const auto seg = segment_from_params(d[0].line, kGrid.dims());
    CHECK(ea_score(seg, src, kGrid.dims()).value >= 0.99);
  }
  SUBCASE("diagonal neighbors join one component") {
    ProbabilityMap m(kGrid.n_theta(), kGrid.n_r());
    m.at(10, 10) = 0.5;
    m.at(11, 11) = 0.7;
    m.at(13, 13) = 0.4;
    const auto d = detect_lines(m, kGrid, 0.1);
    REQUIRE(d.size() == 2);
    CHECK(d[0].score == 0.7);
    CHECK(d[0].component_size == 2);
    CHECK(d[0].t_centroid == doctest::Approx((10 * 0.5 + 11 * 0.7) / 1.2));
    CHECK(d[1].score == 0.4);
  }
  SUBCASE("equal scores are ordered by centroid") {
    ProbabilityMap m(kGrid.n_theta(), kGrid.n_r());
    m.at(50, 10) = 0.6;
    m.at(20, 300) = 0.6;
    const auto d = detect_lines(m, kGrid, 0.1);
    REQUIRE(d.size() == 2);
    CHECK(d[0].t_centroid == 20.0);
    CHECK(d[1].t_centroid == 50.0);
  }
  SUBCASE("invalid arguments") {
    const ProbabilityMap m(kGrid.n_theta(), kGrid.n_r());
    CHECK_THROWS_AS(detect_lines(m, kGrid, 0.0), InvalidInput);
    CHECK_THROWS_AS(detect_lines(m, kGrid, 1.0), InvalidInput);
    CHECK_THROWS_AS(detect_lines(ProbabilityMap(3, 3), kGrid, 0.5), InvalidInput);
  }
}

TEST_CASE("round trip of separated lines") {
  Rng rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    const int k = 1 + trial % 5;
    const auto chords = dht::testing::separated_chords(rng, kGrid, k, 6);
    std::vector<ParametricLine> lines;
    for (const auto& c : chords) lines.push_back(params_from_segment(c, kGrid.dims()));
    const auto d = detect_lines(ground_truth_map(lines, kGrid), kGrid, 0.01);
    REQUIRE(static_cast<int>(d.size()) == k);
    std::vector<bool> used(chords.size(), false);
    for (const auto& det : d) {
      const auto seg = segment_from_params(det.line, kGrid.dims());
      int best = -1;
      double best_ea = -1.0;
      for (std::size_t j = 0; j < chords.size(); ++j) {
        const double ea = ea_score(seg, chords[j], kGrid.dims()).value;
        if (!used[j] && ea > best_ea) {
          best_ea = ea;
          best = static_cast<int>(j);
        }
      }
      REQUIRE(best >= 0);
      used[static_cast<std::size_t>(best)] = true;
      CHECK(best_ea >= 0.95);
    }
  }
}

TEST_CASE("raising the threshold never adds detections on separated blobs") {
  Rng rng(77);
  for (int trial = 0; trial < 30; ++trial) {
    const auto chords = dht::testing::separated_chords(rng, kGrid, 1 + trial % 5, 6);
    std::vector<ParametricLine> lines;
    for (const auto& c : chords) lines.push_back(params_from_segment(c, kGrid.dims()));
    const auto m = ground_truth_map(lines, kGrid);
    std::size_t prev = detect_lines(m, kGrid, 0.01).size();
    for (double tau = 0.05; tau < 1.0; tau += 0.05) {
      const std::size_t n = detect_lines(m, kGrid, tau).size();
      CHECK(n <= prev);
      prev = n;
    }
  }
}

TEST_CASE("a saddle splits one component into two as the threshold rises") {
  ProbabilityMap m(kGrid.n_theta(), kGrid.n_r());
  m.at(10, 10) = 0.9;
  m.at(10, 11) = 0.3;
  m.at(10, 12) = 0.8;
  CHECK(detect_lines(m, kGrid, 0.2).size() == 1);
  CHECK(detect_lines(m, kGrid, 0.5).size() == 2);
}

TEST_CASE("centroids lie inside their component boxes") {
  Rng rng(78);
  const QuantizationGrid grid({21, 21}, std::numbers::pi / 20, std::hypot(21.0, 21.0) / 30);
  for (int trial = 0; trial < 30; ++trial) {
    ProbabilityMap m(20, 30);
    for (int i = 0; i < 150; ++i) {
      m.at(dht::testing::uniform_int(rng, 0, 19), dht::testing::uniform_int(rng, 0, 29)) =
          dht::testing::uniform(rng, 0.0, 1.0);
    }
    for (const auto& d : detect_lines(m, grid, 0.2)) {
      CHECK(d.t_centroid >= d.box_min.t);
      CHECK(d.t_centroid <= d.box_max.t);
      CHECK(d.s_centroid >= d.box_min.s);
      CHECK(d.s_centroid <= d.box_max.s);
      CHECK(d.component_size >= 1);
      CHECK(d.score >= 0.2);
    }
  }
}
