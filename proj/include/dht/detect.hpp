#pragma once

#include <span>
#include <vector>

#include "dht/geometry.hpp"

namespace dht {

// Theta x R map of line probabilities in [0, 1].
class ProbabilityMap {
 public:
  ProbabilityMap(int n_theta, int n_r);
  // Throws InvalidInput on a size mismatch or a value outside [0, 1].
  ProbabilityMap(int n_theta, int n_r, std::vector<double> values);

  int n_theta() const noexcept { return n_theta_; }
  int n_r() const noexcept { return n_r_; }
  double& at(int t, int s) noexcept { return values_[static_cast<std::size_t>(t) * n_r_ + s]; }
  double at(int t, int s) const noexcept {
    return values_[static_cast<std::size_t>(t) * n_r_ + s];
  }
  std::span<const double> values() const noexcept { return values_; }

 private:
  int n_theta_;
  int n_r_;
  std::vector<double> values_;
};

struct Detection {
  ParametricLine line;
  double score = 0.0;  // peak probability of the component
  int component_size = 0;
  // Weighted centroid in continuous bin coordinates and the component's
  // bounding box (inclusive).
  double t_centroid = 0.0;
  double s_centroid = 0.0;
  BinIndex box_min;
  BinIndex box_max;
};

inline constexpr double kDefaultDetectThreshold = 0.01;
inline constexpr double kGaussianSigma = 1.0;
inline constexpr int kGaussianRadius = 2;  // 5 x 5 kernel

// Marks quantize(line) for every line and spreads it with a peak-normalized
// 5x5 Gaussian (sigma 1, zero padding). Overlaps combine by max, so every
// ground-truth bin holds exactly 1.
ProbabilityMap ground_truth_map(std::span<const ParametricLine> lines,
                                const QuantizationGrid& grid);

// Summed binary cross-entropy; pred is clamped to [1e-7, 1 - 1e-7].
double bce_loss(const ProbabilityMap& pred, const ProbabilityMap& target);

// Binarize at >= threshold, label 8-connected components, and turn each
// component's probability-weighted centroid back into line parameters.
// Sorted by score, descending; ties by centroid (t, s).
std::vector<Detection> detect_lines(const ProbabilityMap& prob, const QuantizationGrid& grid,
                                    double threshold = kDefaultDetectThreshold);

}  // namespace dht
