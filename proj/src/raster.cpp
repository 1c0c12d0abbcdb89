#include "dht/raster.hpp"

#include <algorithm>
#include <cmath>

#include "dht/error.hpp"

namespace dht {

namespace {

// Cell index of a coordinate in [0, extent]; the closed upper edge maps to
// the last cell. Returns -1 outside.
int cell_of(double v, int extent) {
  if (v < 0.0 || v > extent) return -1;
  return std::min(static_cast<int>(std::floor(v)), extent - 1);
}

}  // namespace

std::vector<Pixel> rasterize_segment(const LineSegment& seg, const ImageDims& dims) {
  Point a = seg.p0;
  Point b = seg.p1;
  if (b < a) std::swap(a, b);
  const double dx = b.x - a.x;
  const double dy = b.y - a.y;
  std::vector<Pixel> out;

  if (std::abs(dx) >= std::abs(dy)) {
    const int first = std::max(0, static_cast<int>(std::floor(a.x)));
    const int last = std::min(dims.width - 1, std::max(static_cast<int>(std::ceil(b.x)) - 1,
                                                         static_cast<int>(std::floor(a.x))));
    out.reserve(static_cast<std::size_t>(std::max(0, last - first + 1)));
    for (int c = first; c <= last; ++c) {
      const double xs = std::clamp(c + 0.5, a.x, b.x);
      const double y = dx == 0.0 ? a.y : a.y + (xs - a.x) * dy / dx;
      const int row = cell_of(y, dims.height);
      if (row >= 0) out.push_back({row, c});
    }
    return out;
  }

  // y-major: walk rows from a toward b.
  const double ylo = std::min(a.y, b.y);
  const double yhi = std::max(a.y, b.y);
  const int first = std::max(0, static_cast<int>(std::floor(ylo)));
  const int last = std::min(dims.height - 1, std::max(static_cast<int>(std::ceil(yhi)) - 1,
                                                        static_cast<int>(std::floor(ylo))));
  if (last < first) return out;
  out.reserve(static_cast<std::size_t>(last - first + 1));
  const bool down = a.y <= b.y;
  for (int k = 0; k <= last - first; ++k) {
    const int r = down ? first + k : last - k;
    const double ys = std::clamp(r + 0.5, ylo, yhi);
    const double x = a.x + (ys - a.y) * dx / dy;
    const int col = cell_of(x, dims.width);
    if (col >= 0) out.push_back({r, col});
  }
  return out;
}

std::vector<Pixel> line_pixels(const ParametricLine& pl, const ImageDims& dims) {
  const double c = std::cos(pl.theta);
  const double s = std::sin(pl.theta);
  const double hw = dims.width / 2.0;
  const double hh = dims.height / 2.0;
  std::vector<Pixel> out;
  if (std::abs(c) >= std::abs(s)) {
    out.reserve(static_cast<std::size_t>(dims.width));
    for (int col = 0; col < dims.width; ++col) {
      const double x = col + 0.5 - hw;
      const int row = cell_of((pl.r + x * s) / c + hh, dims.height);
      if (row >= 0) out.push_back({row, col});
    }
    return out;
  }
  // Steep line: x grows with y when cos(theta) >= 0, so walk rows downward
  // to start from the endpoint with the smaller x.
  out.reserve(static_cast<std::size_t>(dims.height));
  for (int k = 0; k < dims.height; ++k) {
    const int row = c >= 0.0 ? k : dims.height - 1 - k;
    const double y = row + 0.5 - hh;
    const int col = cell_of((y * c - pl.r) / s + hw, dims.width);
    if (col >= 0) out.push_back({row, col});
  }
  return out;
}

RasterLine rasterize_line(const ParametricLine& pl, const ImageDims& dims) {
  RasterLine line{line_pixels(pl, dims)};
  if (line.pixels.empty()) throw NoIntersection("line covers no pixel of the image");
  return line;
}

std::vector<std::int32_t> line_pixel_indices(const ParametricLine& pl, const ImageDims& dims) {
  const auto pixels = line_pixels(pl, dims);
  std::vector<std::int32_t> idx;
  idx.reserve(pixels.size());
  for (const auto& p : pixels) idx.push_back(p.row * dims.width + p.col);
  return idx;
}

}  // namespace dht
