#pragma once

#include <cmath>
#include <compare>
#include <numbers>

namespace dht {

struct ImageDims {
  int width = 0;
  int height = 0;

  ImageDims() = default;
  ImageDims(int w, int h);  // throws InvalidInput unless w, h >= 1

  double diagonal() const noexcept {
    return std::hypot(static_cast<double>(width), static_cast<double>(height));
  }
  friend bool operator==(const ImageDims&, const ImageDims&) = default;
};

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
  friend auto operator<=>(const Point&, const Point&) = default;
};

// Raster convention: x grows rightward in [0, W], y grows downward in [0, H].
struct LineSegment {
  Point p0;
  Point p1;

  Point midpoint() const noexcept { return {(p0.x + p1.x) / 2, (p0.y + p1.y) / 2}; }
  double length() const noexcept { return std::hypot(p1.x - p0.x, p1.y - p0.y); }
  friend bool operator==(const LineSegment&, const LineSegment&) = default;
};

// theta in [0, pi) is the direction angle of the line against the x axis;
// r = -x*sin(theta) + y*cos(theta) for any point (x, y) on the line, in
// coordinates centered at (W/2, H/2). With y pointing down, (theta = 0,
// r > 0) lines lie below the image center.
struct ParametricLine {
  double theta = 0.0;
  double r = 0.0;
};

struct BinIndex {
  int t = 0;  // angle bin
  int s = 0;  // distance bin
  friend bool operator==(const BinIndex&, const BinIndex&) = default;
  friend auto operator<=>(const BinIndex&, const BinIndex&) = default;
};

// Discretization of the (theta, r) plane. Owns every bin <-> parameter
// conversion. Bins are half-open: [k*d, (k+1)*d).
class QuantizationGrid {
 public:
  QuantizationGrid(ImageDims dims, double dtheta, double dr);

  const ImageDims& dims() const noexcept { return dims_; }
  double dtheta() const noexcept { return dtheta_; }
  double dr() const noexcept { return dr_; }
  int n_theta() const noexcept { return n_theta_; }
  int n_r() const noexcept { return n_r_; }
  int bin_count() const noexcept { return n_theta_ * n_r_; }
  bool contains(BinIndex b) const noexcept {
    return b.t >= 0 && b.t < n_theta_ && b.s >= 0 && b.s < n_r_;
  }
  int flat(BinIndex b) const noexcept { return b.t * n_r_ + b.s; }

 private:
  ImageDims dims_;
  double dtheta_;
  double dr_;
  int n_theta_;
  int n_r_;
};

inline constexpr double kDefaultDTheta = std::numbers::pi / 100.0;
inline constexpr double kDefaultDr = std::numbers::sqrt2;

ParametricLine params_from_segment(const LineSegment& seg, const ImageDims& dims);
LineSegment segment_from_params(const ParametricLine& pl, const ImageDims& dims);

BinIndex quantize(const ParametricLine& pl, const QuantizationGrid& grid);
ParametricLine bin_center(BinIndex b, const QuantizationGrid& grid);
// Line integrated by the transform for bin b: angle at the grid angle
// t * dtheta, distance at the bin center. Axis-aligned lines then fall on
// exactly one bin.
ParametricLine sample_line(BinIndex b, const QuantizationGrid& grid);
QuantizationGrid grid_from_intervals(const ImageDims& dims, double dtheta, double dr);

// Moves each endpoint along the image border by the given arc length in
// pixels. Positive offsets go clockwise: (0,0) -> (W,0) -> (W,H) -> (0,H).
LineSegment boundary_walk(const LineSegment& seg, const ImageDims& dims, int offset0,
                          int offset1);

// Arc-length coordinate of a border point in [0, 2(W+H)).
double boundary_position(const Point& p, const ImageDims& dims);
Point boundary_point(double position, const ImageDims& dims);

// Clips a segment to the image rectangle without extending it. Returns false
// if nothing of it lies inside.
bool clip_to_image(LineSegment& seg, const ImageDims& dims);

// Folds an angle into [0, pi).
double fold_angle(double theta) noexcept;

}  // namespace dht
