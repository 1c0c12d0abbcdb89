#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "dht/detect.hpp"
#include "dht/geometry.hpp"
#include "dht/refine.hpp"
#include "dht/tensor.hpp"

namespace dht::io {

// Line annotations, text:
//   W H
//   x1 y1 x2 y2      (one segment per non-empty line)
// '#' starts a comment. Segments are clipped to the image on read.
struct Annotations {
  ImageDims dims;
  std::vector<LineSegment> lines;
};

Annotations parse_annotations(std::istream& in);
Annotations read_annotations(const std::filesystem::path& path);
void format_annotations(const ImageDims& dims, std::span<const LineSegment> lines,
                        std::ostream& out);
void write_annotations(const ImageDims& dims, std::span<const LineSegment> lines,
                       const std::filesystem::path& path);

// Tensor container: "DHTTENS1", u32 rank, rank x u32 dims, then
// product(dims) IEEE-754 float32 values; all little-endian, row-major.
inline constexpr char kTensorMagic[8] = {'D', 'H', 'T', 'T', 'E', 'N', 'S', '1'};

struct RawTensor {
  std::vector<std::uint32_t> dims;
  std::vector<float> values;
};

RawTensor decode_tensor(std::span<const std::byte> bytes);
std::vector<std::byte> encode_tensor(std::span<const std::uint32_t> dims,
                                     std::span<const float> values);
RawTensor read_tensor(const std::filesystem::path& path);
void write_tensor(const std::filesystem::path& path, std::span<const std::uint32_t> dims,
                  std::span<const float> values);

// Rank 3 is C x rows x cols; rank 2 is read as a single channel.
FeatureMap read_feature_map(const std::filesystem::path& path);
ParametricMap read_parametric_map(const std::filesystem::path& path);

template <typename Tag>
void write_tensor(const std::filesystem::path& path, const Tensor3<Tag>& t) {
  const std::uint32_t dims[3] = {static_cast<std::uint32_t>(t.channels()),
                                 static_cast<std::uint32_t>(t.rows()),
                                 static_cast<std::uint32_t>(t.cols())};
  write_tensor(path, dims, t.data());
}

// Theta x R tensor (rank 2, or rank 3 with one channel), values in [0, 1].
ProbabilityMap read_probability_map(const std::filesystem::path& path);
void write_probability_map(const std::filesystem::path& path, const ProbabilityMap& map);

// Binary PGM (P5), maxval 1..255, scaled to [0, 1].
FeatureMap decode_pgm(std::span<const std::byte> bytes);
FeatureMap read_image_pgm(const std::filesystem::path& path);
// Values are clamped to [0, 1] and written with maxval 255.
void write_image_pgm(const std::filesystem::path& path, const FeatureMap& image);

// Either a tensor file (single channel) or a PGM, told apart by magic.
EdgeMap read_edge_map(const std::filesystem::path& path);

std::vector<std::byte> read_file(const std::filesystem::path& path);

}  // namespace dht::io
