#include "dht/geometry.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "dht/error.hpp"

namespace dht {

namespace {

// Absorbs rounding when a value lands exactly on a bin edge, e.g. r = 0 with
// dr = sqrt(2) on a 400x400 image sits on the edge of bin 200.
constexpr double kBinEps = 1e-9;
constexpr double kBoundaryTol = 1e-6;

int checked_levels(double extent, double interval) {
  const double levels = std::ceil(extent / interval - kBinEps);
  return std::max(1, static_cast<int>(levels));
}

// Parameter interval [t_lo, t_hi] of p + t*d inside [x0, x1] x [y0, y1].
// Returns false if empty.
bool clip_parametric(Point p, Point d, double x0, double x1, double y0, double y1,
                     double& t_lo, double& t_hi) {
  const double q[4] = {p.x - x0, x1 - p.x, p.y - y0, y1 - p.y};
  const double dp[4] = {-d.x, d.x, -d.y, d.y};
  for (int i = 0; i < 4; ++i) {
    if (dp[i] == 0.0) {
      if (q[i] < 0.0) return false;
      continue;
    }
    const double t = q[i] / dp[i];
    if (dp[i] < 0.0) {
      t_lo = std::max(t_lo, t);
    } else {
      t_hi = std::min(t_hi, t);
    }
  }
  return t_lo <= t_hi;
}

}  // namespace

ImageDims::ImageDims(int w, int h) : width(w), height(h) {
  if (w < 1 || h < 1) {
    throw InvalidInput("image dimensions must be positive, got " + std::to_string(w) + "x" +
                       std::to_string(h));
  }
}

QuantizationGrid::QuantizationGrid(ImageDims dims, double dtheta, double dr)
    : dims_(dims), dtheta_(dtheta), dr_(dr) {
  if (dims.width < 1 || dims.height < 1) throw InvalidInput("grid requires positive image dims");
  if (!(dtheta > 0.0) || !(dr > 0.0) || !std::isfinite(dtheta) || !std::isfinite(dr)) {
    throw InvalidInput("quantization intervals must be positive and finite");
  }
  n_theta_ = checked_levels(std::numbers::pi, dtheta);
  n_r_ = checked_levels(dims.diagonal(), dr);
}

QuantizationGrid grid_from_intervals(const ImageDims& dims, double dtheta, double dr) {
  return QuantizationGrid(dims, dtheta, dr);
}

double fold_angle(double theta) noexcept {
  theta = std::fmod(theta, std::numbers::pi);
  if (theta < 0.0) theta += std::numbers::pi;
  if (theta >= std::numbers::pi) theta = 0.0;
  return theta;
}

ParametricLine params_from_segment(const LineSegment& seg, const ImageDims& dims) {
  const double dx = seg.p1.x - seg.p0.x;
  const double dy = seg.p1.y - seg.p0.y;
  if (dx == 0.0 && dy == 0.0) throw InvalidInput("degenerate segment: coincident endpoints");
  const double theta = fold_angle(std::atan2(dy, dx));
  const double x = seg.p0.x - dims.width / 2.0;
  const double y = seg.p0.y - dims.height / 2.0;
  return {theta, -x * std::sin(theta) + y * std::cos(theta)};
}

LineSegment segment_from_params(const ParametricLine& pl, const ImageDims& dims) {
  const double c = std::cos(pl.theta);
  const double s = std::sin(pl.theta);
  const double hw = dims.width / 2.0;
  const double hh = dims.height / 2.0;
  const Point foot{-pl.r * s, pl.r * c};
  double t_lo = -std::numeric_limits<double>::infinity();
  double t_hi = std::numeric_limits<double>::infinity();
  if (!clip_parametric(foot, {c, s}, -hw, hw, -hh, hh, t_lo, t_hi) || t_hi - t_lo <= 1e-12) {
    throw NoIntersection("line (theta=" + std::to_string(pl.theta) + ", r=" +
                         std::to_string(pl.r) + ") misses the image");
  }
  const auto on_border = [&](double t) {
    return Point{std::clamp(foot.x + t * c + hw, 0.0, 2 * hw),
                 std::clamp(foot.y + t * s + hh, 0.0, 2 * hh)};
  };
  Point a = on_border(t_lo);
  Point b = on_border(t_hi);
  if (b < a) std::swap(a, b);
  return {a, b};
}

BinIndex quantize(const ParametricLine& pl, const QuantizationGrid& grid) {
  const double half = grid.dims().diagonal() / 2.0;
  if (!(std::abs(pl.r) <= half + kBinEps)) {
    throw OutOfRange("|r| = " + std::to_string(std::abs(pl.r)) + " exceeds half diagonal " +
                     std::to_string(half));
  }
  const double theta = fold_angle(pl.theta);
  const int t = static_cast<int>(std::floor(theta / grid.dtheta() + kBinEps));
  const int s = static_cast<int>(std::floor((pl.r + half) / grid.dr() + kBinEps));
  return {std::clamp(t, 0, grid.n_theta() - 1), std::clamp(s, 0, grid.n_r() - 1)};
}

ParametricLine bin_center(BinIndex b, const QuantizationGrid& grid) {
  if (!grid.contains(b)) {
    throw OutOfRange("bin (" + std::to_string(b.t) + ", " + std::to_string(b.s) +
                     ") outside grid");
  }
  return {(b.t + 0.5) * grid.dtheta(), (b.s + 0.5) * grid.dr() - grid.dims().diagonal() / 2.0};
}

ParametricLine sample_line(BinIndex b, const QuantizationGrid& grid) {
  const ParametricLine center = bin_center(b, grid);
  return {b.t * grid.dtheta(), center.r};
}

double boundary_position(const Point& p, const ImageDims& dims) {
  const double w = dims.width;
  const double h = dims.height;
  const bool in_x = p.x >= -kBoundaryTol && p.x <= w + kBoundaryTol;
  const bool in_y = p.y >= -kBoundaryTol && p.y <= h + kBoundaryTol;
  if (in_x && std::abs(p.y) <= kBoundaryTol) return std::clamp(p.x, 0.0, w);
  if (in_y && std::abs(p.x - w) <= kBoundaryTol) return w + std::clamp(p.y, 0.0, h);
  if (in_x && std::abs(p.y - h) <= kBoundaryTol) return w + h + (w - std::clamp(p.x, 0.0, w));
  if (in_y && std::abs(p.x) <= kBoundaryTol) {
    const double u = 2 * w + h + (h - std::clamp(p.y, 0.0, h));
    return u >= 2 * (w + h) ? 0.0 : u;
  }
  throw InvalidInput("point (" + std::to_string(p.x) + ", " + std::to_string(p.y) +
                     ") is not on the image border");
}

Point boundary_point(double position, const ImageDims& dims) {
  const double w = dims.width;
  const double h = dims.height;
  double u = std::fmod(position, 2 * (w + h));
  if (u < 0.0) u += 2 * (w + h);
  if (u <= w) return {u, 0.0};
  if (u <= w + h) return {w, u - w};
  if (u <= 2 * w + h) return {w - (u - w - h), h};
  return {0.0, h - (u - 2 * w - h)};
}

LineSegment boundary_walk(const LineSegment& seg, const ImageDims& dims, int offset0,
                          int offset1) {
  const Point a = boundary_point(boundary_position(seg.p0, dims) + offset0, dims);
  const Point b = boundary_point(boundary_position(seg.p1, dims) + offset1, dims);
  if (std::hypot(a.x - b.x, a.y - b.y) < 1e-9) {
    throw InvalidInput("boundary walk collapsed the segment to a point");
  }
  return {a, b};
}

bool clip_to_image(LineSegment& seg, const ImageDims& dims) {
  const Point d{seg.p1.x - seg.p0.x, seg.p1.y - seg.p0.y};
  double t_lo = 0.0;
  double t_hi = 1.0;
  if (!clip_parametric(seg.p0, d, 0.0, dims.width, 0.0, dims.height, t_lo, t_hi)) return false;
  const Point p0 = seg.p0;
  seg.p0 = {p0.x + t_lo * d.x, p0.y + t_lo * d.y};
  seg.p1 = {p0.x + t_hi * d.x, p0.y + t_hi * d.y};
  return true;
}

}  // namespace dht
