#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include "dht/geometry.hpp"
#include "dht/parallel.hpp"
#include "dht/tensor.hpp"

namespace dht {

// Line-to-pixel incidence for every bin of a grid, plus the forward
// (feature aggregation) and adjoint (reverse voting) operators over it.
//
// Pixel membership of bin b is the rasterization of sample_line(b). forward() sums, per channel, the features of those pixels
// in raster order; adjoint() sends each bin value back to the pixels of its
// line. Work is split across bins (forward) or pixels (adjoint), never
// inside one output sum, so results do not depend on the thread count or on
// the SIMD variant.
class HoughTransform {
 public:
  explicit HoughTransform(const QuantizationGrid& grid, unsigned build_threads = 0);

  const QuantizationGrid& grid() const noexcept { return grid_; }

  // Flat pixel indices (row * W + col) of bin b, in raster order.
  std::span<const std::int32_t> line_pixels(BinIndex b) const noexcept;
  std::size_t incidence_count() const noexcept { return bin_pixels_.size(); }

  ParametricMap forward(const FeatureMap& x, const ComputeOptions& opts = {}) const;
  FeatureMap adjoint(const ParametricMap& y, const ComputeOptions& opts = {}) const;

  // Pixel-to-bin (scatter) evaluation of forward(). Single-threaded; sums per
  // bin run in pixel-index order instead of raster order, so values agree
  // with forward() exactly only when the sums are exact.
  ParametricMap forward_scatter(const FeatureMap& x) const;

 private:
  struct PixelIncidence;
  const PixelIncidence& pixel_incidence() const;
  void check_feature_dims(const FeatureMap& x) const;

  QuantizationGrid grid_;
  std::vector<std::int64_t> bin_offsets_;  // bin_count + 1
  std::vector<std::int32_t> bin_pixels_;
  mutable std::shared_ptr<const PixelIncidence> pixel_incidence_;
  mutable std::shared_ptr<std::once_flag> pixel_once_;
};

ParametricMap dht_forward(const FeatureMap& x, const QuantizationGrid& grid,
                          const ComputeOptions& opts = {});
FeatureMap rht_adjoint(const ParametricMap& y, const QuantizationGrid& grid,
                       const ComputeOptions& opts = {});

// Standard Hough voting: dht_forward of the edge map binarized at
// vote_threshold (1 where value >= threshold). Requires one channel.
ParametricMap classical_accumulate(const FeatureMap& edges, const QuantizationGrid& grid,
                                   float vote_threshold, const ComputeOptions& opts = {});

// Bilinear resize over (Theta, R), half-pixel centers (align_corners = false).
ParametricMap resample_parametric_map(const ParametricMap& y, int new_theta, int new_r);

// Channel-axis concatenation in input order.
ParametricMap concat_channels(std::span<const ParametricMap> maps);

}  // namespace dht
