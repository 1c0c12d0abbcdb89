#include "dht/pipeline.hpp"

#include <algorithm>

#include "dht/error.hpp"
#include "dht/hough.hpp"

namespace dht {

ProbabilityMap normalize_votes(const ParametricMap& votes) {
  if (votes.channels() != 1) throw InvalidInput("vote map must have one channel");
  const auto data = votes.data();
  const float peak = *std::max_element(data.begin(), data.end());
  std::vector<double> values(data.size(), 0.0);
  if (peak > 0.0f) {
    for (std::size_t i = 0; i < data.size(); ++i) {
      values[i] = std::clamp(static_cast<double>(data[i]) / peak, 0.0, 1.0);
    }
  }
  return ProbabilityMap(votes.rows(), votes.cols(), std::move(values));
}

std::vector<Detection> detect_classical(const FeatureMap& image, const QuantizationGrid& grid,
                                        const ClassicalOptions& options,
                                        const ComputeOptions& compute) {
  const EdgeMap edges = sobel_edge_map(image, compute);
  FeatureMap edge_plane(1, edges.dims().height, edges.dims().width,
                        std::vector<float>(edges.values()));
  const ParametricMap votes =
      classical_accumulate(edge_plane, grid, options.edge_threshold, compute);
  auto detections = detect_lines(normalize_votes(votes), grid, options.peak_fraction);
  // Vote peaks sit on sample_line() angles, not on bin-center angles.
  for (auto& d : detections) d.line.theta = fold_angle(d.t_centroid * grid.dtheta());
  return detections;
}

std::vector<LineSegment> detections_to_segments(std::span<const Detection> detections,
                                                const ImageDims& dims) {
  std::vector<LineSegment> out;
  out.reserve(detections.size());
  for (const auto& d : detections) {
    try {
      out.push_back(segment_from_params(d.line, dims));
    } catch (const NoIntersection&) {
    }
  }
  return out;
}

std::vector<LineSegment> refine_all(std::span<const LineSegment> segments, const EdgeMap& edges,
                                    int delta_r, const ComputeOptions& compute) {
  std::vector<LineSegment> out;
  out.reserve(segments.size());
  for (const auto& s : segments) out.push_back(refine_line(s, edges, delta_r, compute));
  return out;
}

}  // namespace dht
