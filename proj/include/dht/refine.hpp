#pragma once

#include <vector>

#include "dht/geometry.hpp"
#include "dht/parallel.hpp"
#include "dht/tensor.hpp"

namespace dht {

// H x W edge strengths in [0, 1].
class EdgeMap {
 public:
  EdgeMap(ImageDims dims, std::vector<float> values);  // validates range and size
  explicit EdgeMap(const FeatureMap& single_channel);

  const ImageDims& dims() const noexcept { return dims_; }
  float at(int row, int col) const noexcept {
    return values_[static_cast<std::size_t>(row) * dims_.width + col];
  }
  const std::vector<float>& values() const noexcept { return values_; }

 private:
  ImageDims dims_;
  std::vector<float> values_;
};

inline constexpr int kDefaultDeltaR = 5;

// 3x3 Sobel gradient magnitude with replicate padding, divided by its
// maximum. Constant images give an all-zero map.
EdgeMap sobel_edge_map(const FeatureMap& image, const ComputeOptions& opts = {});

// Mean edge value over the segment's raster widened by one pixel on each
// side (rows for x-major lines, columns otherwise), duplicates removed.
double edge_density(const LineSegment& seg, const EdgeMap& edges);

struct RefineCandidate {
  int offset0 = 0;
  int offset1 = 0;
  LineSegment segment;
};

// Boundary walks of both endpoints over offsets -ceil(d/2) .. floor(d/2),
// skipping walks that collapse the segment. At most (d + 1)^2 entries.
std::vector<RefineCandidate> refine_candidates(const LineSegment& seg, const ImageDims& dims,
                                               int delta_r);

// Candidate with the highest edge density. Ties prefer the unmoved segment,
// then the smaller |offset0| + |offset1|, then the smaller (offset0, offset1).
LineSegment refine_line(const LineSegment& seg, const EdgeMap& edges, int delta_r = kDefaultDeltaR,
                        const ComputeOptions& opts = {});

}  // namespace dht
