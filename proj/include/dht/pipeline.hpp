#pragma once

#include <span>
#include <vector>

#include "dht/detect.hpp"
#include "dht/geometry.hpp"
#include "dht/parallel.hpp"
#include "dht/refine.hpp"
#include "dht/tensor.hpp"

namespace dht {

// Glue for the edge-detector + Hough-voting baseline.
struct ClassicalOptions {
  float edge_threshold = 0.5f;  // edge strength that casts a vote
  double peak_fraction = 0.5;   // detection threshold on votes / max vote
};

// Votes divided by the largest vote; an empty accumulator stays zero.
ProbabilityMap normalize_votes(const ParametricMap& votes);

// Sobel -> binarized voting -> normalized accumulator -> detect_lines.
std::vector<Detection> detect_classical(const FeatureMap& image, const QuantizationGrid& grid,
                                        const ClassicalOptions& options,
                                        const ComputeOptions& compute = {});

// Chords of the detected lines; detections whose line misses the image are
// dropped.
std::vector<LineSegment> detections_to_segments(std::span<const Detection> detections,
                                                const ImageDims& dims);

std::vector<LineSegment> refine_all(std::span<const LineSegment> segments, const EdgeMap& edges,
                                    int delta_r, const ComputeOptions& compute = {});

}  // namespace dht
