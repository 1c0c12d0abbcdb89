#include "dht/io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "dht/error.hpp"

namespace dht::io {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\r') ++i;
    if (i > start) out.push_back(s.substr(start, i - start));
  }
  return out;
}

template <typename T>
bool parse_number(std::string_view tok, T& value) {
  const char* end = tok.data() + tok.size();
  const auto res = std::from_chars(tok.data(), end, value);
  return res.ec == std::errc() && res.ptr == end;
}

std::uint32_t load_u32_le(const std::byte* p) {
  return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
         (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void store_u32_le(std::vector<std::byte>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::byte>((v >> (8 * i)) & 0xffu));
}

void write_bytes(const std::filesystem::path& path, std::span<const std::byte> bytes) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw IoError("failed writing " + path.string());
}

}  // namespace

std::vector<std::byte> read_file(const std::filesystem::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string());
  std::vector<char> buf((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
  std::vector<std::byte> out(buf.size());
  std::memcpy(out.data(), buf.data(), buf.size());
  return out;
}

// ---------------------------------------------------------------------------
// Annotations

Annotations parse_annotations(std::istream& in) {
  Annotations ann;
  bool have_header = false;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto tok = split_ws(line);

    if (!have_header) {
      int w = 0;
      int h = 0;
      if (tok.size() != 2 || !parse_number(tok[0], w) || !parse_number(tok[1], h) || w < 1 ||
          h < 1) {
        throw ParseError("line " + std::to_string(line_no) +
                             ": expected header \"W H\" with positive integers",
                         line_no);
      }
      ann.dims = ImageDims(w, h);
      have_header = true;
      continue;
    }

    double v[4];
    bool ok = tok.size() == 4;
    for (std::size_t i = 0; ok && i < 4; ++i) ok = parse_number(tok[i], v[i]) && std::isfinite(v[i]);
    if (!ok) {
      throw ParseError("line " + std::to_string(line_no) + ": expected \"x1 y1 x2 y2\"", line_no);
    }
    LineSegment seg{{v[0], v[1]}, {v[2], v[3]}};
    if (seg.p0 == seg.p1) {
      throw ParseError("line " + std::to_string(line_no) + ": degenerate segment", line_no);
    }
    if (!clip_to_image(seg, ann.dims) || seg.p0 == seg.p1) {
      throw InvalidInput("annotation row " + std::to_string(line_no) +
                         ": segment lies outside the image");
    }
    ann.lines.push_back(seg);
  }
  if (!have_header) throw ParseError("missing \"W H\" header", line_no + 1);
  return ann;
}

Annotations read_annotations(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open " + path.string());
  try {
    return parse_annotations(f);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line());
  } catch (const InvalidInput& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

void format_annotations(const ImageDims& dims, std::span<const LineSegment> lines,
                        std::ostream& out) {
  out << dims.width << ' ' << dims.height << '\n';
  char buf[160];
  for (const auto& s : lines) {
    std::snprintf(buf, sizeof buf, "%.6f %.6f %.6f %.6f\n", s.p0.x, s.p0.y, s.p1.x, s.p1.y);
    out << buf;
  }
}

void write_annotations(const ImageDims& dims, std::span<const LineSegment> lines,
                       const std::filesystem::path& path) {
  std::ostringstream os;
  format_annotations(dims, lines, os);
  const std::string text = os.str();
  write_bytes(path, std::as_bytes(std::span(text.data(), text.size())));
}

// ---------------------------------------------------------------------------
// Tensors

RawTensor decode_tensor(std::span<const std::byte> bytes) {
  if (bytes.size() < 12) {
    throw FormatError("tensor truncated: " + std::to_string(bytes.size()) +
                      " bytes, header needs at least 12");
  }
  if (std::memcmp(bytes.data(), kTensorMagic, 8) != 0) {
    throw FormatError("bad tensor magic at byte 0: expected \"DHTTENS1\"");
  }
  const std::uint32_t rank = load_u32_le(bytes.data() + 8);
  if (rank == 0 || rank > 8) {
    throw FormatError("unsupported tensor rank " + std::to_string(rank) + " at byte 8");
  }
  const std::size_t header = 12 + 4 * static_cast<std::size_t>(rank);
  if (bytes.size() < header) {
    throw FormatError("tensor truncated inside the dims block (" + std::to_string(bytes.size()) +
                      " of " + std::to_string(header) + " header bytes)");
  }
  RawTensor t;
  std::uint64_t count = 1;
  for (std::uint32_t i = 0; i < rank; ++i) {
    const std::uint32_t d = load_u32_le(bytes.data() + 12 + 4 * i);
    if (d == 0) throw FormatError("zero extent at byte " + std::to_string(12 + 4 * i));
    t.dims.push_back(d);
    count *= d;
    if (count > (std::uint64_t{1} << 34)) throw FormatError("tensor too large");
  }
  const std::uint64_t expected = header + count * 4;
  if (bytes.size() != expected) {
    throw FormatError("tensor payload is " + std::to_string(bytes.size() - header) +
                      " bytes, expected " + std::to_string(count * 4));
  }
  t.values.resize(static_cast<std::size_t>(count));
  for (std::size_t i = 0; i < t.values.size(); ++i) {
    const std::uint32_t bits = load_u32_le(bytes.data() + header + 4 * i);
    const float v = std::bit_cast<float>(bits);
    if (!std::isfinite(v)) {
      throw FormatError("non-finite value at byte " + std::to_string(header + 4 * i));
    }
    t.values[i] = v;
  }
  return t;
}

std::vector<std::byte> encode_tensor(std::span<const std::uint32_t> dims,
                                     std::span<const float> values) {
  std::uint64_t count = 1;
  for (auto d : dims) count *= d;
  if (dims.empty() || count != values.size()) {
    throw InvalidInput("tensor dims do not match the value count");
  }
  std::vector<std::byte> out;
  out.reserve(12 + 4 * dims.size() + 4 * values.size());
  for (char c : kTensorMagic) out.push_back(static_cast<std::byte>(c));
  store_u32_le(out, static_cast<std::uint32_t>(dims.size()));
  for (auto d : dims) store_u32_le(out, d);
  for (float v : values) store_u32_le(out, std::bit_cast<std::uint32_t>(v));
  return out;
}

RawTensor read_tensor(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  try {
    return decode_tensor(bytes);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_tensor(const std::filesystem::path& path, std::span<const std::uint32_t> dims,
                  std::span<const float> values) {
  write_bytes(path, encode_tensor(dims, values));
}

namespace {

template <typename Tag>
Tensor3<Tag> as_tensor3(RawTensor t, const std::filesystem::path& path) {
  if (t.dims.size() == 2) t.dims.insert(t.dims.begin(), 1u);
  if (t.dims.size() != 3) {
    throw FormatError(path.string() + ": expected a rank-2 or rank-3 tensor, got rank " +
                      std::to_string(t.dims.size()));
  }
  return Tensor3<Tag>(static_cast<int>(t.dims[0]), static_cast<int>(t.dims[1]),
                      static_cast<int>(t.dims[2]), std::move(t.values));
}

}  // namespace

FeatureMap read_feature_map(const std::filesystem::path& path) {
  return as_tensor3<SpatialTag>(read_tensor(path), path);
}

ParametricMap read_parametric_map(const std::filesystem::path& path) {
  return as_tensor3<ParametricTag>(read_tensor(path), path);
}

ProbabilityMap read_probability_map(const std::filesystem::path& path) {
  const ParametricMap m = read_parametric_map(path);
  if (m.channels() != 1) {
    throw FormatError(path.string() + ": probability map must have one channel, got " +
                      std::to_string(m.channels()));
  }
  std::vector<double> values(m.data().begin(), m.data().end());
  try {
    return ProbabilityMap(m.rows(), m.cols(), std::move(values));
  } catch (const InvalidInput& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_probability_map(const std::filesystem::path& path, const ProbabilityMap& map) {
  std::vector<float> values(map.values().begin(), map.values().end());
  const std::uint32_t dims[2] = {static_cast<std::uint32_t>(map.n_theta()),
                                 static_cast<std::uint32_t>(map.n_r())};
  write_tensor(path, dims, values);
}

// ---------------------------------------------------------------------------
// PGM

FeatureMap decode_pgm(std::span<const std::byte> bytes) {
  std::size_t pos = 0;
  const auto ch = [&](std::size_t i) { return static_cast<char>(bytes[i]); };
  const auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
  };
  // Skips whitespace and comments, then reads one decimal field.
  const auto next_int = [&](const char* what) {
    while (pos < bytes.size()) {
      if (is_space(ch(pos))) {
        ++pos;
      } else if (ch(pos) == '#') {
        while (pos < bytes.size() && ch(pos) != '\n') ++pos;
      } else {
        break;
      }
    }
    const std::size_t start = pos;
    long value = 0;
    while (pos < bytes.size() && ch(pos) >= '0' && ch(pos) <= '9') {
      value = value * 10 + (ch(pos) - '0');
      if (value > 1'000'000) throw FormatError(std::string("PGM ") + what + " too large");
      ++pos;
    }
    if (pos == start) {
      throw FormatError(std::string("PGM: expected ") + what + " at byte " + std::to_string(start));
    }
    return value;
  };

  if (bytes.size() < 2 || ch(0) != 'P' || ch(1) != '5') {
    throw FormatError("not a binary PGM: expected magic \"P5\" at byte 0");
  }
  pos = 2;
  const long width = next_int("width");
  const long height = next_int("height");
  const long maxval = next_int("maxval");
  if (width < 1 || height < 1) throw FormatError("PGM dimensions must be positive");
  if (maxval < 1 || maxval > 255) {
    throw FormatError("PGM maxval must be in 1..255, got " + std::to_string(maxval));
  }
  if (pos >= bytes.size() || !is_space(ch(pos))) {
    throw FormatError("PGM: expected whitespace after maxval at byte " + std::to_string(pos));
  }
  ++pos;
  const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  if (bytes.size() - pos < n) {
    throw FormatError("PGM raster truncated: " + std::to_string(bytes.size() - pos) + " of " +
                      std::to_string(n) + " bytes");
  }
  FeatureMap img(1, static_cast<int>(height), static_cast<int>(width));
  auto out = img.data();
  for (std::size_t i = 0; i < n; ++i) {
    const long v = static_cast<long>(std::to_integer<unsigned char>(bytes[pos + i]));
    if (v > maxval) {
      throw FormatError("PGM sample exceeds maxval at byte " + std::to_string(pos + i));
    }
    out[i] = static_cast<float>(v) / static_cast<float>(maxval);
  }
  return img;
}

FeatureMap read_image_pgm(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  try {
    return decode_pgm(bytes);
  } catch (const FormatError& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_image_pgm(const std::filesystem::path& path, const FeatureMap& image) {
  if (image.channels() != 1) throw InvalidInput("PGM output needs a single-channel image");
  const std::string header =
      "P5\n" + std::to_string(image.cols()) + " " + std::to_string(image.rows()) + "\n255\n";
  std::vector<std::byte> bytes;
  bytes.reserve(header.size() + image.size());
  for (char c : header) bytes.push_back(static_cast<std::byte>(c));
  for (float v : image.data()) {
    const float clamped = std::fmin(1.0f, std::fmax(0.0f, v));
    bytes.push_back(static_cast<std::byte>(static_cast<unsigned char>(std::lround(clamped * 255.0f))));
  }
  write_bytes(path, bytes);
}

EdgeMap read_edge_map(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  const bool pgm =
      bytes.size() >= 2 && static_cast<char>(bytes[0]) == 'P' && static_cast<char>(bytes[1]) == '5';
  FeatureMap plane;
  try {
    plane = pgm ? decode_pgm(bytes) : as_tensor3<SpatialTag>(decode_tensor(bytes), path);
  } catch (const FormatError& e) {
    if (pgm) throw FormatError(path.string() + ": " + e.what());
    throw;
  }
  try {
    return EdgeMap(plane);
  } catch (const InvalidInput& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace dht::io
