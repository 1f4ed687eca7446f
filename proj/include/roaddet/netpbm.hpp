#pragma once

// Binary netpbm codec: P6 for color, P5 for gray planes and masks.
// Only maxval 255 is supported. Encoders always emit the canonical header
// "P<n>\n<w> <h>\n255\n"; decoders accept arbitrary whitespace and '#'
// comments between header tokens.

#include <cctype>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "roaddet/error.hpp"
#include "roaddet/raster.hpp"

namespace roaddet::netpbm {

using Bytes = std::vector<std::uint8_t>;

namespace detail {

struct Header {
  int width = 0;
  int height = 0;
  std::size_t payload_offset = 0;
};

class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      auto c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n' && bytes_[pos_] != '\r') ++pos_;
      } else if (std::isspace(c)) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  long read_uint(const char* field) {
    skip_space_and_comments();
    std::size_t start = pos_;
    long value = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > 1'000'000'000L)
        throw Error(ErrorKind::MalformedHeader, std::string(field) + " is out of range");
      ++pos_;
    }
    if (pos_ == start)
      throw Error(ErrorKind::MalformedHeader, std::string("missing ") + field);
    return value;
  }

  // Exactly one whitespace byte separates maxval from the payload.
  void expect_single_space() {
    if (pos_ >= bytes_.size() || !std::isspace(bytes_[pos_]))
      throw Error(ErrorKind::MalformedHeader, "expected whitespace after maxval");
    ++pos_;
  }

  std::size_t pos() const noexcept { return pos_; }
  void advance(std::size_t n) noexcept { pos_ += n; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

inline Header parse_header(std::span<const std::uint8_t> bytes, char magic,
                           std::size_t channels) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != static_cast<std::uint8_t>(magic))
    throw Error(ErrorKind::MalformedHeader, std::string("expected magic P") + magic);
  HeaderReader reader(bytes);
  reader.advance(2);
  if (bytes.size() > 2 && !std::isspace(bytes[2]) && bytes[2] != '#')
    throw Error(ErrorKind::MalformedHeader, "magic must be followed by whitespace");
  long width = reader.read_uint("width");
  long height = reader.read_uint("height");
  if (width < 1 || height < 1)
    throw Error(ErrorKind::MalformedHeader, "dimensions must be positive");
  long maxval = reader.read_uint("maxval");
  if (maxval != 255)
    throw Error(ErrorKind::UnsupportedMaxval, "maxval " + std::to_string(maxval));
  reader.expect_single_space();
  std::size_t need = static_cast<std::size_t>(width) * static_cast<std::size_t>(height) * channels;
  if (bytes.size() - reader.pos() < need)
    throw Error(ErrorKind::TruncatedPayload, "expected " + std::to_string(need) +
                                                 " payload bytes, got " +
                                                 std::to_string(bytes.size() - reader.pos()));
  return Header{static_cast<int>(width), static_cast<int>(height), reader.pos()};
}

inline Bytes header_bytes(char magic, int width, int height) {
  std::string h = std::string("P") + magic + "\n" + std::to_string(width) + " " +
                  std::to_string(height) + "\n255\n";
  return Bytes(h.begin(), h.end());
}

}  // namespace detail

inline RgbRaster load_ppm(std::span<const std::uint8_t> bytes) {
  auto header = detail::parse_header(bytes, '6', 3);
  RgbRaster out(header.width, header.height);
  const std::uint8_t* p = bytes.data() + header.payload_offset;
  for (std::size_t i = 0; i < out.size(); ++i, p += 3) out[i] = Rgb{p[0], p[1], p[2]};
  return out;
}

inline Bytes save_ppm(const RgbRaster& img) {
  Bytes out = detail::header_bytes('6', img.width(), img.height());
  out.reserve(out.size() + img.size() * 3);
  for (const auto& px : img) {
    out.push_back(px.r);
    out.push_back(px.g);
    out.push_back(px.b);
  }
  return out;
}

// Gray bytes are mapped to byte/255.
inline GrayRaster load_pgm(std::span<const std::uint8_t> bytes) {
  auto header = detail::parse_header(bytes, '5', 1);
  GrayRaster out(header.width, header.height);
  const std::uint8_t* p = bytes.data() + header.payload_offset;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = p[i] / 255.0;
  return out;
}

// Values are clamped to [0,1], scaled by 255 and rounded half-up. With a
// binarize threshold, values strictly above it become 255 and the rest 0.
inline Bytes save_pgm(const GrayRaster& gray, std::optional<double> binarize = std::nullopt) {
  Bytes out = detail::header_bytes('5', gray.width(), gray.height());
  out.reserve(out.size() + gray.size());
  for (double v : gray) {
    if (binarize) {
      out.push_back(v > *binarize ? 255 : 0);
    } else {
      out.push_back(to_byte(std::clamp(v, 0.0, 1.0) * 255.0));
    }
  }
  return out;
}

inline Bytes save_mask(const BinaryMask& mask) {
  Bytes out = detail::header_bytes('5', mask.width(), mask.height());
  out.reserve(out.size() + mask.size());
  for (auto bit : mask) out.push_back(bit ? 255 : 0);
  return out;
}

// Bytes >= 128 decode as 1; ground truth is expected to use 0/255 only.
inline BinaryMask load_mask(std::span<const std::uint8_t> bytes) {
  auto header = detail::parse_header(bytes, '5', 1);
  BinaryMask out(header.width, header.height);
  const std::uint8_t* p = bytes.data() + header.payload_offset;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = p[i] >= 128 ? 1 : 0;
  return out;
}

inline Bytes read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  return Bytes(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

inline void write_file(const std::filesystem::path& path, const Bytes& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorKind::Io, "short write to " + path.string());
}

}  // namespace roaddet::netpbm
