#include "dht/refine.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#include "dht/error.hpp"
#include "dht/raster.hpp"

namespace dht {

EdgeMap::EdgeMap(ImageDims dims, std::vector<float> values)
    : dims_(dims), values_(std::move(values)) {
  if (values_.size() != static_cast<std::size_t>(dims.width) * dims.height) {
    throw InvalidInput("edge map payload does not match " + std::to_string(dims.width) + "x" +
                       std::to_string(dims.height));
  }
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (!(values_[i] >= 0.0f && values_[i] <= 1.0f)) {
      throw InvalidInput("edge value at flat index " + std::to_string(i) + " is outside [0, 1]");
    }
  }
}

namespace {

std::vector<float> single_plane(const FeatureMap& m) {
  if (m.channels() != 1) {
    throw InvalidInput("expected a single-channel map, got " + std::to_string(m.channels()) +
                       " channels");
  }
  return {m.data().begin(), m.data().end()};
}

}  // namespace

EdgeMap::EdgeMap(const FeatureMap& single_channel)
    : EdgeMap(ImageDims(single_channel.cols(), single_channel.rows()),
              single_plane(single_channel)) {}

EdgeMap sobel_edge_map(const FeatureMap& image, const ComputeOptions& opts) {
  if (image.channels() != 1) {
    throw InvalidInput("sobel_edge_map needs a single-channel image, got " +
                       std::to_string(image.channels()) + " channels");
  }
  const int h = image.rows();
  const int w = image.cols();
  const std::size_t pw = static_cast<std::size_t>(w) + 2;
  std::vector<float> padded(pw * (static_cast<std::size_t>(h) + 2));
  for (int r = -1; r <= h; ++r) {
    const int sr = std::clamp(r, 0, h - 1);
    float* dst = padded.data() + static_cast<std::size_t>(r + 1) * pw;
    for (int c = -1; c <= w; ++c) dst[c + 1] = image(0, sr, std::clamp(c, 0, w - 1));
  }

  std::vector<float> mag(static_cast<std::size_t>(w) * h);
  const auto& k = opts.kernels();
  parallel_for(static_cast<std::size_t>(h), opts.resolved_threads(),
               [&](std::size_t begin, std::size_t end) {
                 for (std::size_t r = begin; r < end; ++r) {
                   k.sobel_row(padded.data() + r * pw, padded.data() + (r + 1) * pw,
                               padded.data() + (r + 2) * pw, mag.data() + r * w,
                               static_cast<std::size_t>(w));
                 }
               });
  const float peak = *std::max_element(mag.begin(), mag.end());
  if (peak > 0.0f) {
    for (float& v : mag) v = std::min(1.0f, v / peak);
  }
  return EdgeMap(ImageDims(w, h), std::move(mag));
}

double edge_density(const LineSegment& seg, const EdgeMap& edges) {
  const auto& dims = edges.dims();
  const auto pixels = rasterize_segment(seg, dims);
  if (pixels.empty()) throw InvalidInput("segment covers no pixel of the edge map");
  const bool x_major = std::abs(seg.p1.x - seg.p0.x) >= std::abs(seg.p1.y - seg.p0.y);

  std::vector<std::int32_t> band;
  band.reserve(pixels.size() * 3);
  for (const auto& p : pixels) {
    for (int d = -1; d <= 1; ++d) {
      const int r = x_major ? p.row + d : p.row;
      const int c = x_major ? p.col : p.col + d;
      if (r < 0 || r >= dims.height || c < 0 || c >= dims.width) continue;
      band.push_back(r * dims.width + c);
    }
  }
  std::sort(band.begin(), band.end());
  band.erase(std::unique(band.begin(), band.end()), band.end());
  double sum = 0.0;
  for (std::int32_t i : band) sum += edges.values()[static_cast<std::size_t>(i)];
  return sum / static_cast<double>(band.size());
}

std::vector<RefineCandidate> refine_candidates(const LineSegment& seg, const ImageDims& dims,
                                               int delta_r) {
  if (delta_r < 0) throw InvalidInput("delta_r must be non-negative");
  const int lo = -((delta_r + 1) / 2);
  const int hi = delta_r / 2;
  std::vector<RefineCandidate> out;
  out.reserve(static_cast<std::size_t>(delta_r + 1) * (delta_r + 1));
  for (int o0 = lo; o0 <= hi; ++o0) {
    for (int o1 = lo; o1 <= hi; ++o1) {
      if (o0 == 0 && o1 == 0) {
        boundary_position(seg.p0, dims);  // validates that seg is a chord
        boundary_position(seg.p1, dims);
        out.push_back({0, 0, seg});
        continue;
      }
      try {
        out.push_back({o0, o1, boundary_walk(seg, dims, o0, o1)});
      } catch (const InvalidInput&) {
        // collapsed endpoints
      }
    }
  }
  return out;
}

LineSegment refine_line(const LineSegment& seg, const EdgeMap& edges, int delta_r,
                        const ComputeOptions& opts) {
  const auto candidates = refine_candidates(seg, edges.dims(), delta_r);
  std::vector<double> density(candidates.size(), -1.0);
  parallel_for(candidates.size(), opts.resolved_threads(),
               [&](std::size_t begin, std::size_t end) {
                 for (std::size_t i = begin; i < end; ++i) {
                   if (!rasterize_segment(candidates[i].segment, edges.dims()).empty()) {
                     density[i] = edge_density(candidates[i].segment, edges);
                   }
                 }
               });

  const auto rank = [](const RefineCandidate& c) {
    return std::abs(c.offset0) + std::abs(c.offset1);
  };
  std::size_t best = candidates.size();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    if (density[i] < 0.0) continue;
    if (best == candidates.size() || density[i] > density[best]) {
      best = i;
      continue;
    }
    if (density[i] < density[best]) continue;
    const auto& a = candidates[i];
    const auto& b = candidates[best];
    if (rank(a) < rank(b) ||
        (rank(a) == rank(b) && std::pair(a.offset0, a.offset1) < std::pair(b.offset0, b.offset1))) {
      best = i;
    }
  }
  if (best == candidates.size()) throw InvalidInput("every refinement candidate is degenerate");
  return candidates[best].segment;
}

}  // namespace dht
