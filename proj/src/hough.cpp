#include "dht/hough.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dht/error.hpp"
#include "dht/raster.hpp"

namespace dht {

struct HoughTransform::PixelIncidence {
  std::vector<std::int64_t> offsets;  // pixel_count + 1
  std::vector<std::int32_t> bins;     // ascending per pixel
};

HoughTransform::HoughTransform(const QuantizationGrid& grid, unsigned build_threads)
    : grid_(grid), pixel_once_(std::make_shared<std::once_flag>()) {
  const std::size_t n_bins = static_cast<std::size_t>(grid.bin_count());
  std::vector<std::vector<std::int32_t>> per_bin(n_bins);
  const unsigned threads = ComputeOptions{build_threads, {}}.resolved_threads();
  parallel_for(n_bins, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t b = begin; b < end; ++b) {
      const BinIndex bin{static_cast<int>(b) / grid.n_r(), static_cast<int>(b) % grid.n_r()};
      per_bin[b] = line_pixel_indices(sample_line(bin, grid), grid.dims());
    }
  });
  bin_offsets_.resize(n_bins + 1, 0);
  for (std::size_t b = 0; b < n_bins; ++b) {
    bin_offsets_[b + 1] = bin_offsets_[b] + static_cast<std::int64_t>(per_bin[b].size());
  }
  bin_pixels_.reserve(static_cast<std::size_t>(bin_offsets_.back()));
  for (auto& v : per_bin) {
    bin_pixels_.insert(bin_pixels_.end(), v.begin(), v.end());
    std::vector<std::int32_t>().swap(v);
  }
}

std::span<const std::int32_t> HoughTransform::line_pixels(BinIndex b) const noexcept {
  const std::size_t flat = static_cast<std::size_t>(grid_.flat(b));
  return {bin_pixels_.data() + bin_offsets_[flat],
          static_cast<std::size_t>(bin_offsets_[flat + 1] - bin_offsets_[flat])};
}

const HoughTransform::PixelIncidence& HoughTransform::pixel_incidence() const {
  std::call_once(*pixel_once_, [this] {
    const auto& d = grid_.dims();
    const std::size_t n_pix = static_cast<std::size_t>(d.width) * d.height;
    auto inc = std::make_shared<PixelIncidence>();
    inc->offsets.assign(n_pix + 1, 0);
    for (std::int32_t p : bin_pixels_) ++inc->offsets[static_cast<std::size_t>(p) + 1];
    for (std::size_t i = 0; i < n_pix; ++i) inc->offsets[i + 1] += inc->offsets[i];
    inc->bins.resize(bin_pixels_.size());
    std::vector<std::int64_t> cursor(inc->offsets.begin(), inc->offsets.end() - 1);
    const std::size_t n_bins = bin_offsets_.size() - 1;
    for (std::size_t b = 0; b < n_bins; ++b) {
      for (std::int64_t k = bin_offsets_[b]; k < bin_offsets_[b + 1]; ++k) {
        inc->bins[static_cast<std::size_t>(cursor[static_cast<std::size_t>(bin_pixels_[k])]++)] =
            static_cast<std::int32_t>(b);
      }
    }
    pixel_incidence_ = std::move(inc);
  });
  return *pixel_incidence_;
}

void HoughTransform::check_feature_dims(const FeatureMap& x) const {
  const auto& d = grid_.dims();
  if (x.rows() != d.height || x.cols() != d.width) {
    throw InvalidInput("feature map is " + std::to_string(x.rows()) + "x" +
                       std::to_string(x.cols()) + " but grid expects " +
                       std::to_string(d.height) + "x" + std::to_string(d.width));
  }
}

namespace {

// C x N planar -> N x C interleaved, so one pixel's channels are contiguous.
std::vector<float> interleave(std::span<const float> planar, std::size_t channels,
                              std::size_t n) {
  std::vector<float> out(planar.size());
  for (std::size_t c = 0; c < channels; ++c) {
    const float* src = planar.data() + c * n;
    for (std::size_t i = 0; i < n; ++i) out[i * channels + c] = src[i];
  }
  return out;
}

}  // namespace

ParametricMap HoughTransform::forward(const FeatureMap& x, const ComputeOptions& opts) const {
  check_feature_dims(x);
  const std::size_t channels = static_cast<std::size_t>(x.channels());
  const std::size_t n_bins = static_cast<std::size_t>(grid_.bin_count());
  ParametricMap out(x.channels(), grid_.n_theta(), grid_.n_r());
  const auto& k = opts.kernels();

  std::vector<float> interleaved;
  const float* src = x.data().data();
  if (channels > 1) {
    interleaved = interleave(x.data(), channels, x.plane_size());
    src = interleaved.data();
  }
  float* dst = out.data().data();
  parallel_for(n_bins, opts.resolved_threads(), [&](std::size_t begin, std::size_t end) {
    std::vector<float> acc(channels);
    for (std::size_t b = begin; b < end; ++b) {
      const std::int64_t off = bin_offsets_[b];
      const std::size_t len = static_cast<std::size_t>(bin_offsets_[b + 1] - off);
      k.gather_sum(src, channels, bin_pixels_.data() + off, len, acc.data(), channels);
      for (std::size_t c = 0; c < channels; ++c) dst[c * n_bins + b] = acc[c];
    }
  });
  return out;
}

FeatureMap HoughTransform::adjoint(const ParametricMap& y, const ComputeOptions& opts) const {
  if (y.rows() != grid_.n_theta() || y.cols() != grid_.n_r()) {
    throw InvalidInput("parametric map is " + std::to_string(y.rows()) + "x" +
                       std::to_string(y.cols()) + " but grid is " +
                       std::to_string(grid_.n_theta()) + "x" + std::to_string(grid_.n_r()));
  }
  const auto& inc = pixel_incidence();
  const auto& d = grid_.dims();
  const std::size_t channels = static_cast<std::size_t>(y.channels());
  const std::size_t n_pix = static_cast<std::size_t>(d.width) * d.height;
  FeatureMap out(y.channels(), d.height, d.width);
  const auto& k = opts.kernels();

  std::vector<float> interleaved;
  const float* src = y.data().data();
  if (channels > 1) {
    interleaved = interleave(y.data(), channels, y.plane_size());
    src = interleaved.data();
  }
  float* dst = out.data().data();
  parallel_for(n_pix, opts.resolved_threads(), [&](std::size_t begin, std::size_t end) {
    std::vector<float> acc(channels);
    for (std::size_t i = begin; i < end; ++i) {
      const std::int64_t off = inc.offsets[i];
      const std::size_t len = static_cast<std::size_t>(inc.offsets[i + 1] - off);
      k.gather_sum(src, channels, inc.bins.data() + off, len, acc.data(), channels);
      for (std::size_t c = 0; c < channels; ++c) dst[c * n_pix + i] = acc[c];
    }
  });
  return out;
}

ParametricMap HoughTransform::forward_scatter(const FeatureMap& x) const {
  check_feature_dims(x);
  const auto& inc = pixel_incidence();
  const std::size_t n_pix = x.plane_size();
  ParametricMap out(x.channels(), grid_.n_theta(), grid_.n_r());
  for (int c = 0; c < x.channels(); ++c) {
    const auto in = x.plane(c);
    auto acc = out.plane(c);
    for (std::size_t i = 0; i < n_pix; ++i) {
      for (std::int64_t k = inc.offsets[i]; k < inc.offsets[i + 1]; ++k) {
        acc[static_cast<std::size_t>(inc.bins[static_cast<std::size_t>(k)])] += in[i];
      }
    }
  }
  return out;
}

ParametricMap dht_forward(const FeatureMap& x, const QuantizationGrid& grid,
                          const ComputeOptions& opts) {
  return HoughTransform(grid, opts.threads).forward(x, opts);
}

FeatureMap rht_adjoint(const ParametricMap& y, const QuantizationGrid& grid,
                       const ComputeOptions& opts) {
  return HoughTransform(grid, opts.threads).adjoint(y, opts);
}

ParametricMap classical_accumulate(const FeatureMap& edges, const QuantizationGrid& grid,
                                   float vote_threshold, const ComputeOptions& opts) {
  if (edges.channels() != 1) {
    throw InvalidInput("classical accumulation needs a single-channel edge map, got " +
                       std::to_string(edges.channels()) + " channels");
  }
  FeatureMap votes(1, edges.rows(), edges.cols());
  std::transform(edges.data().begin(), edges.data().end(), votes.data().begin(),
                 [vote_threshold](float v) { return v >= vote_threshold ? 1.0f : 0.0f; });
  return dht_forward(votes, grid, opts);
}

ParametricMap resample_parametric_map(const ParametricMap& y, int new_theta, int new_r) {
  if (new_theta < 1 || new_r < 1) {
    throw InvalidInput("resample target must be positive, got " + std::to_string(new_theta) +
                       "x" + std::to_string(new_r));
  }
  struct Tap {
    int lo, hi;
    double w;
  };
  const auto taps = [](int in, int out) {
    std::vector<Tap> t(static_cast<std::size_t>(out));
    const double scale = static_cast<double>(in) / out;
    for (int i = 0; i < out; ++i) {
      const double src = std::max(0.0, (i + 0.5) * scale - 0.5);
      const int lo = std::min(static_cast<int>(src), in - 1);
      t[static_cast<std::size_t>(i)] = {lo, std::min(lo + 1, in - 1), src - lo};
    }
    return t;
  };
  const auto ty = taps(y.rows(), new_theta);
  const auto tx = taps(y.cols(), new_r);
  ParametricMap out(y.channels(), new_theta, new_r);
  for (int c = 0; c < y.channels(); ++c) {
    for (int i = 0; i < new_theta; ++i) {
      const Tap& a = ty[static_cast<std::size_t>(i)];
      for (int j = 0; j < new_r; ++j) {
        const Tap& b = tx[static_cast<std::size_t>(j)];
        const double top = (1.0 - b.w) * y(c, a.lo, b.lo) + b.w * y(c, a.lo, b.hi);
        const double bottom = (1.0 - b.w) * y(c, a.hi, b.lo) + b.w * y(c, a.hi, b.hi);
        out(c, i, j) = static_cast<float>((1.0 - a.w) * top + a.w * bottom);
      }
    }
  }
  return out;
}

ParametricMap concat_channels(std::span<const ParametricMap> maps) {
  if (maps.empty()) throw InvalidInput("concat_channels needs at least one map");
  const int rows = maps.front().rows();
  const int cols = maps.front().cols();
  int channels = 0;
  for (const auto& m : maps) {
    if (m.rows() != rows || m.cols() != cols) {
      throw InvalidInput("concat_channels: maps disagree on (Theta, R)");
    }
    channels += m.channels();
  }
  std::vector<float> data;
  data.reserve(static_cast<std::size_t>(channels) * rows * cols);
  for (const auto& m : maps) data.insert(data.end(), m.data().begin(), m.data().end());
  return ParametricMap(channels, rows, cols, std::move(data));
}

}  // namespace dht
