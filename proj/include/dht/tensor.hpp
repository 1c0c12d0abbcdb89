#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "dht/error.hpp"

namespace dht {

// Dense C x rows x cols float tensor, row-major (channel, row, column). The
// tag keeps spatial and parametric maps from being mixed up.
template <typename Tag>
class Tensor3 {
 public:
  Tensor3() = default;
  Tensor3(int channels, int rows, int cols, float fill = 0.0f)
      : channels_(channels), rows_(rows), cols_(cols) {
    if (channels < 1 || rows < 1 || cols < 1) {
      throw InvalidInput("tensor extents must be positive, got " + std::to_string(channels) +
                         "x" + std::to_string(rows) + "x" + std::to_string(cols));
    }
    data_.assign(static_cast<std::size_t>(channels) * rows * cols, fill);
  }
  Tensor3(int channels, int rows, int cols, std::vector<float> data)
      : channels_(channels), rows_(rows), cols_(cols), data_(std::move(data)) {
    if (channels < 1 || rows < 1 || cols < 1) throw InvalidInput("tensor extents must be positive");
    if (data_.size() != static_cast<std::size_t>(channels) * rows * cols) {
      throw InvalidInput("tensor payload size does not match its extents");
    }
  }

  int channels() const noexcept { return channels_; }
  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  std::size_t plane_size() const noexcept { return static_cast<std::size_t>(rows_) * cols_; }
  std::size_t size() const noexcept { return data_.size(); }

  float& operator()(int c, int r, int k) noexcept { return data_[index(c, r, k)]; }
  float operator()(int c, int r, int k) const noexcept { return data_[index(c, r, k)]; }

  std::span<float> data() noexcept { return data_; }
  std::span<const float> data() const noexcept { return data_; }
  std::span<float> plane(int c) noexcept { return {data_.data() + c * plane_size(), plane_size()}; }
  std::span<const float> plane(int c) const noexcept {
    return {data_.data() + c * plane_size(), plane_size()};
  }

  bool all_finite() const noexcept {
    for (float v : data_)
      if (!std::isfinite(v)) return false;
    return true;
  }

  friend bool operator==(const Tensor3&, const Tensor3&) = default;

 private:
  std::size_t index(int c, int r, int k) const noexcept {
    return (static_cast<std::size_t>(c) * rows_ + r) * cols_ + k;
  }

  int channels_ = 0;
  int rows_ = 0;
  int cols_ = 0;
  std::vector<float> data_;
};

struct SpatialTag {};
struct ParametricTag {};

// C x H x W image-domain features.
using FeatureMap = Tensor3<SpatialTag>;
// C x Theta x R Hough-domain features.
using ParametricMap = Tensor3<ParametricTag>;

}  // namespace dht
