#include "dht/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "dht/assignment.hpp"
#include "dht/error.hpp"
#include "dht/raster.hpp"

namespace dht {

std::string_view metric_name(MetricKind kind) noexcept {
  switch (kind) {
    case MetricKind::kEa:
      return "ea";
    case MetricKind::kChamfer:
      return "chamfer";
    case MetricKind::kEmd:
      return "emd";
  }
  return "unknown";
}

std::optional<MetricKind> parse_metric(std::string_view name) noexcept {
  if (name == "ea") return MetricKind::kEa;
  if (name == "chamfer") return MetricKind::kChamfer;
  if (name == "emd") return MetricKind::kEmd;
  return std::nullopt;
}

namespace {

void require_nondegenerate(const LineSegment& s) {
  if (s.p0 == s.p1) throw InvalidInput("degenerate segment: coincident endpoints");
}

double direction(const LineSegment& s) {
  return fold_angle(std::atan2(s.p1.y - s.p0.y, s.p1.x - s.p0.x));
}

struct PixelCenters {
  std::vector<float> xs;
  std::vector<float> ys;
};

PixelCenters pixel_centers(const LineSegment& s, const ImageDims& dims) {
  const auto pixels = rasterize_segment(s, dims);
  if (pixels.empty()) throw InvalidInput("segment covers no pixel of the image");
  PixelCenters pc;
  pc.xs.reserve(pixels.size());
  pc.ys.reserve(pixels.size());
  for (const auto& p : pixels) {
    pc.xs.push_back(static_cast<float>(p.col) + 0.5f);
    pc.ys.push_back(static_cast<float>(p.row) + 0.5f);
  }
  return pc;
}

double mean_nearest(const PixelCenters& from, const PixelCenters& to, const simd::Kernels& k) {
  double sum = 0.0;
  for (std::size_t i = 0; i < from.xs.size(); ++i) {
    const float d2 = k.min_sq_distance(from.xs[i], from.ys[i], to.xs.data(), to.ys.data(),
                                       to.xs.size());
    sum += std::sqrt(static_cast<double>(d2));
  }
  return sum / static_cast<double>(from.xs.size());
}

std::vector<Point> arc_length_samples(const PixelCenters& pc, int m) {
  const std::size_t n = pc.xs.size();
  std::vector<double> cum(n, 0.0);
  for (std::size_t i = 1; i < n; ++i) {
    cum[i] = cum[i - 1] + std::hypot(static_cast<double>(pc.xs[i] - pc.xs[i - 1]),
                                     static_cast<double>(pc.ys[i] - pc.ys[i - 1]));
  }
  const double total = cum.back();
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(m));
  std::size_t seg = 0;
  for (int k = 0; k < m; ++k) {
    if (total == 0.0) {
      out.push_back({pc.xs[0], pc.ys[0]});
      continue;
    }
    const double target = (k + 0.5) * total / m;
    while (seg + 2 < n && cum[seg + 1] < target) ++seg;
    const double len = cum[seg + 1] - cum[seg];
    const double f = len > 0.0 ? (target - cum[seg]) / len : 0.0;
    out.push_back({pc.xs[seg] + f * (pc.xs[seg + 1] - pc.xs[seg]),
                   pc.ys[seg] + f * (pc.ys[seg + 1] - pc.ys[seg])});
  }
  return out;
}

}  // namespace

double angular_similarity(const LineSegment& a, const LineSegment& b) {
  require_nondegenerate(a);
  require_nondegenerate(b);
  const double diff = std::abs(direction(a) - direction(b));
  const double acute = std::min(diff, std::numbers::pi - diff);
  return std::clamp(1.0 - acute / (std::numbers::pi / 2), 0.0, 1.0);
}

double euclidean_similarity(const LineSegment& a, const LineSegment& b, const ImageDims& dims) {
  require_nondegenerate(a);
  require_nondegenerate(b);
  const Point ma = a.midpoint();
  const Point mb = b.midpoint();
  const double dx = (ma.x - mb.x) / dims.width;
  const double dy = (ma.y - mb.y) / dims.height;
  return std::max(0.0, 1.0 - std::hypot(dx, dy));
}

SimilarityScore ea_score(const LineSegment& a, const LineSegment& b, const ImageDims& dims) {
  const double s = angular_similarity(a, b) * euclidean_similarity(a, b, dims);
  return {s * s, MetricKind::kEa};
}

SimilarityScore chamfer_similarity(const LineSegment& a, const LineSegment& b,
                                   const ImageDims& dims, const ComputeOptions& opts) {
  require_nondegenerate(a);
  require_nondegenerate(b);
  const auto pa = pixel_centers(a, dims);
  const auto pb = pixel_centers(b, dims);
  const auto& k = opts.kernels();
  const double dist = 0.5 * (mean_nearest(pa, pb, k) + mean_nearest(pb, pa, k));
  return {std::clamp(1.0 - dist / dims.diagonal(), 0.0, 1.0), MetricKind::kChamfer};
}

SimilarityScore emd_similarity(const LineSegment& a, const LineSegment& b, const ImageDims& dims) {
  require_nondegenerate(a);
  require_nondegenerate(b);
  const auto sa = arc_length_samples(pixel_centers(a, dims), kEmdSamples);
  const auto sb = arc_length_samples(pixel_centers(b, dims), kEmdSamples);
  std::vector<double> cost(static_cast<std::size_t>(kEmdSamples) * kEmdSamples);
  for (int i = 0; i < kEmdSamples; ++i) {
    for (int j = 0; j < kEmdSamples; ++j) {
      cost[static_cast<std::size_t>(i) * kEmdSamples + j] =
          std::hypot(sa[i].x - sb[j].x, sa[i].y - sb[j].y);
    }
  }
  const auto match = solve_min_cost_assignment(cost, kEmdSamples, kEmdSamples);
  // Sum matched costs in sorted order so swapping the arguments gives the
  // same bits.
  std::vector<double> matched;
  matched.reserve(match.size());
  for (int i = 0; i < kEmdSamples; ++i) {
    matched.push_back(cost[static_cast<std::size_t>(i) * kEmdSamples + match[i]]);
  }
  std::sort(matched.begin(), matched.end());
  double total = 0.0;
  for (double c : matched) total += c;
  const double emd = total / kEmdSamples;
  return {std::clamp(1.0 - emd / dims.diagonal(), 0.0, 1.0), MetricKind::kEmd};
}

SimilarityScore similarity(MetricKind kind, const LineSegment& a, const LineSegment& b,
                           const ImageDims& dims) {
  switch (kind) {
    case MetricKind::kEa:
      return ea_score(a, b, dims);
    case MetricKind::kChamfer:
      return chamfer_similarity(a, b, dims);
    case MetricKind::kEmd:
      return emd_similarity(a, b, dims);
  }
  throw InvalidInput("unknown metric kind");
}

}  // namespace dht
