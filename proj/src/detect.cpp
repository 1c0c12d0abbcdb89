#include "dht/detect.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <string>

#include "dht/error.hpp"

namespace dht {

namespace {

constexpr double kLogClamp = 1e-7;

void check_extents(int n_theta, int n_r) {
  if (n_theta < 1 || n_r < 1) {
    throw InvalidInput("probability map extents must be positive, got " +
                       std::to_string(n_theta) + "x" + std::to_string(n_r));
  }
}

}  // namespace

ProbabilityMap::ProbabilityMap(int n_theta, int n_r) : n_theta_(n_theta), n_r_(n_r) {
  check_extents(n_theta, n_r);
  values_.assign(static_cast<std::size_t>(n_theta) * n_r, 0.0);
}

ProbabilityMap::ProbabilityMap(int n_theta, int n_r, std::vector<double> values)
    : n_theta_(n_theta), n_r_(n_r), values_(std::move(values)) {
  check_extents(n_theta, n_r);
  if (values_.size() != static_cast<std::size_t>(n_theta) * n_r) {
    throw InvalidInput("probability map payload does not match " + std::to_string(n_theta) +
                       "x" + std::to_string(n_r));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] >= 0.0 && values_[i] <= 1.0)) {
      throw InvalidInput("probability at flat index " + std::to_string(i) +
                         " is outside [0, 1]: " + std::to_string(values_[i]));
    }
  }
}

ProbabilityMap ground_truth_map(std::span<const ParametricLine> lines,
                                const QuantizationGrid& grid) {
  constexpr int kSide = 2 * kGaussianRadius + 1;
  std::array<double, kSide * kSide> kernel{};
  for (int dt = -kGaussianRadius; dt <= kGaussianRadius; ++dt) {
    for (int ds = -kGaussianRadius; ds <= kGaussianRadius; ++ds) {
      kernel[(dt + kGaussianRadius) * kSide + ds + kGaussianRadius] =
          std::exp(-(dt * dt + ds * ds) / (2.0 * kGaussianSigma * kGaussianSigma));
    }
  }

  ProbabilityMap map(grid.n_theta(), grid.n_r());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    BinIndex b;
    try {
      b = quantize(lines[i], grid);
    } catch (const OutOfRange& e) {
      throw InvalidInput("ground-truth line " + std::to_string(i) + ": " + e.what());
    }
    for (int dt = -kGaussianRadius; dt <= kGaussianRadius; ++dt) {
      const int t = b.t + dt;
      if (t < 0 || t >= grid.n_theta()) continue;
      for (int ds = -kGaussianRadius; ds <= kGaussianRadius; ++ds) {
        const int s = b.s + ds;
        if (s < 0 || s >= grid.n_r()) continue;
        const double k = kernel[(dt + kGaussianRadius) * kSide + ds + kGaussianRadius];
        map.at(t, s) = std::max(map.at(t, s), k);
      }
    }
  }
  return map;
}

double bce_loss(const ProbabilityMap& pred, const ProbabilityMap& target) {
  if (pred.n_theta() != target.n_theta() || pred.n_r() != target.n_r()) {
    throw InvalidInput("bce_loss: prediction and target shapes differ");
  }
  const auto p = pred.values();
  const auto g = target.values();
  double loss = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double q = std::clamp(p[i], kLogClamp, 1.0 - kLogClamp);
    loss -= g[i] * std::log(q) + (1.0 - g[i]) * std::log(1.0 - q);
  }
  return loss;
}

std::vector<Detection> detect_lines(const ProbabilityMap& prob, const QuantizationGrid& grid,
                                    double threshold) {
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw InvalidInput("detection threshold must lie in (0, 1), got " + std::to_string(threshold));
  }
  if (prob.n_theta() != grid.n_theta() || prob.n_r() != grid.n_r()) {
    throw InvalidInput("probability map does not match the grid");
  }
  const int rows = prob.n_theta();
  const int cols = prob.n_r();
  std::vector<int> label(static_cast<std::size_t>(rows) * cols, -1);
  std::vector<Detection> out;
  std::vector<BinIndex> stack;

  for (int t0 = 0; t0 < rows; ++t0) {
    for (int s0 = 0; s0 < cols; ++s0) {
      const std::size_t seed = static_cast<std::size_t>(t0) * cols + s0;
      if (label[seed] >= 0 || prob.at(t0, s0) < threshold) continue;
      const int id = static_cast<int>(out.size());
      Detection det;
      det.box_min = {t0, s0};
      det.box_max = {t0, s0};
      double weight = 0.0;
      double wt = 0.0;
      double ws = 0.0;
      label[seed] = id;
      stack.push_back({t0, s0});
      while (!stack.empty()) {
        const BinIndex b = stack.back();
        stack.pop_back();
        const double p = prob.at(b.t, b.s);
        weight += p;
        wt += p * b.t;
        ws += p * b.s;
        det.score = std::max(det.score, p);
        ++det.component_size;
        det.box_min = {std::min(det.box_min.t, b.t), std::min(det.box_min.s, b.s)};
        det.box_max = {std::max(det.box_max.t, b.t), std::max(det.box_max.s, b.s)};
        for (int dt = -1; dt <= 1; ++dt) {
          for (int ds = -1; ds <= 1; ++ds) {
            const int t = b.t + dt;
            const int s = b.s + ds;
            if ((dt == 0 && ds == 0) || t < 0 || t >= rows || s < 0 || s >= cols) continue;
            const std::size_t flat = static_cast<std::size_t>(t) * cols + s;
            if (label[flat] >= 0 || prob.at(t, s) < threshold) continue;
            label[flat] = id;
            stack.push_back({t, s});
          }
        }
      }
      det.t_centroid = std::clamp(wt / weight, double(det.box_min.t), double(det.box_max.t));
      det.s_centroid = std::clamp(ws / weight, double(det.box_min.s), double(det.box_max.s));
      det.line = {(det.t_centroid + 0.5) * grid.dtheta(),
                  (det.s_centroid + 0.5) * grid.dr() - grid.dims().diagonal() / 2.0};
      out.push_back(det);
    }
  }

  std::sort(out.begin(), out.end(), [](const Detection& a, const Detection& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.t_centroid != b.t_centroid) return a.t_centroid < b.t_centroid;
    return a.s_centroid < b.s_centroid;
  });
  return out;
}

}  // namespace dht
