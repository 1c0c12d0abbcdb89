#pragma once

#include <cstdint>
#include <vector>

#include "dht/geometry.hpp"

namespace dht {

struct Pixel {
  int row = 0;
  int col = 0;
  friend bool operator==(const Pixel&, const Pixel&) = default;
  friend auto operator<=>(const Pixel&, const Pixel&) = default;
};

// In-bounds, 8-connected, duplicate-free pixel chain ordered from the
// lexicographically smaller endpoint.
struct RasterLine {
  std::vector<Pixel> pixels;
};

// Digital straight line of a segment: one pixel per column for x-major
// segments (one per row otherwise), picked by sampling the exact line at
// pixel centers, so every pixel center is within 0.5 px of the line. End
// cells only partly covered sample the endpoint instead (within sqrt(2)/2).
// Parts of the segment outside the image are dropped; the result may be
// empty.
std::vector<Pixel> rasterize_segment(const LineSegment& seg, const ImageDims& dims);

// Digital line of an infinite line: for shallow lines (|cos| >= |sin|) the
// pixel of each column whose center abscissa puts the line inside the image,
// otherwise one pixel per row. Ordered from the lexicographically smaller
// end of the chord. Empty when the line misses the image.
std::vector<Pixel> line_pixels(const ParametricLine& pl, const ImageDims& dims);

// line_pixels(), but throws NoIntersection when nothing is covered.
RasterLine rasterize_line(const ParametricLine& pl, const ImageDims& dims);

// line_pixels() as row-major flat indices (row * W + col).
std::vector<std::int32_t> line_pixel_indices(const ParametricLine& pl, const ImageDims& dims);

}  // namespace dht
