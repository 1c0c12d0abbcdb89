#pragma once

#include <optional>
#include <string_view>

#include "dht/geometry.hpp"
#include "dht/parallel.hpp"

namespace dht {

enum class MetricKind { kEa, kChamfer, kEmd };

std::string_view metric_name(MetricKind kind) noexcept;
std::optional<MetricKind> parse_metric(std::string_view name) noexcept;

// Symmetric similarity in [0, 1]; 1 for identical lines.
struct SimilarityScore {
  double value = 0.0;
  MetricKind kind = MetricKind::kEa;
};

// 1 - angle / (pi/2) for the acute angle between the undirected lines.
double angular_similarity(const LineSegment& a, const LineSegment& b);

// 1 - distance between midpoints after scaling x by 1/W and y by 1/H,
// clamped at 0.
double euclidean_similarity(const LineSegment& a, const LineSegment& b, const ImageDims& dims);

// (angular * euclidean)^2
SimilarityScore ea_score(const LineSegment& a, const LineSegment& b, const ImageDims& dims);

// 1 - symmetric mean nearest-pixel distance between the two rasters,
// normalized by the image diagonal.
SimilarityScore chamfer_similarity(const LineSegment& a, const LineSegment& b,
                                   const ImageDims& dims, const ComputeOptions& opts = {});

inline constexpr int kEmdSamples = 64;

// 1 - earth mover's distance between the rasters, each resampled to 64
// equal-mass points by arc length, normalized by the image diagonal.
SimilarityScore emd_similarity(const LineSegment& a, const LineSegment& b, const ImageDims& dims);

SimilarityScore similarity(MetricKind kind, const LineSegment& a, const LineSegment& b,
                           const ImageDims& dims);

}  // namespace dht
