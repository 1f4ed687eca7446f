#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "roaddet/error.hpp"

namespace roaddet {

// Row-major width x height grid. All image types in the library are
// instances of this template; they are plain values (copyable, comparable).
template <typename T>
class Grid {
 public:
  using value_type = T;

  Grid() = default;
  Grid(int width, int height, T fill = T{})
      : width_(width), height_(height),
        data_(checked_size(width, height), fill) {}
  Grid(int width, int height, std::vector<T> data)
      : width_(width), height_(height), data_(std::move(data)) {
    if (data_.size() != checked_size(width, height))
      throw Error(ErrorKind::DimensionMismatch, "grid payload does not match width*height");
  }

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T& operator()(int x, int y) { return data_[index(x, y)]; }
  const T& operator()(int x, int y) const { return data_[index(x, y)]; }
  T& operator[](std::size_t i) { return data_[i]; }
  const T& operator[](std::size_t i) const { return data_[i]; }

  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
           static_cast<std::size_t>(x);
  }
  bool contains(int x, int y) const noexcept {
    return x >= 0 && y >= 0 && x < width_ && y < height_;
  }

  std::span<T> values() noexcept { return data_; }
  std::span<const T> values() const noexcept { return data_; }

  auto begin() noexcept { return data_.begin(); }
  auto end() noexcept { return data_.end(); }
  auto begin() const noexcept { return data_.begin(); }
  auto end() const noexcept { return data_.end(); }

  template <typename U>
  bool same_shape(const Grid<U>& other) const noexcept {
    return width_ == other.width() && height_ == other.height();
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  static std::size_t checked_size(int width, int height) {
    if (width < 0 || height < 0)
      throw Error(ErrorKind::DimensionMismatch, "negative raster dimension");
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

struct Rgb {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  constexpr std::uint8_t operator[](int c) const noexcept {
    return c == 0 ? r : (c == 1 ? g : b);
  }
  constexpr std::uint8_t& channel(int c) noexcept {
    return c == 0 ? r : (c == 1 ? g : b);
  }
  friend bool operator==(const Rgb&, const Rgb&) = default;
};

// Hue is in degrees [0, 360) or kUndefinedHue for achromatic pixels.
struct Hsv {
  static constexpr double kUndefinedHue = -1.0;

  double h = kUndefinedHue;
  double s = 0.0;
  double v = 0.0;

  bool hue_defined() const noexcept { return h >= 0.0; }
  friend bool operator==(const Hsv&, const Hsv&) = default;
};

using RgbRaster = Grid<Rgb>;
using GrayRaster = Grid<double>;
using HsvRaster = Grid<Hsv>;
using BinaryMask = Grid<std::uint8_t>;

template <typename A, typename B>
void require_same_shape(const Grid<A>& a, const Grid<B>& b, const char* what) {
  if (!a.same_shape(b))
    throw Error(ErrorKind::DimensionMismatch,
                std::string(what) + ": " + std::to_string(a.width()) + "x" +
                    std::to_string(a.height()) + " vs " + std::to_string(b.width()) + "x" +
                    std::to_string(b.height()));
}

// Round half-up then clamp to the 8-bit range.
inline std::uint8_t to_byte(double v) noexcept {
  double r = std::floor(v + 0.5);
  return static_cast<std::uint8_t>(std::clamp(r, 0.0, 255.0));
}

inline std::size_t count_set(const BinaryMask& mask) noexcept {
  return static_cast<std::size_t>(std::count_if(mask.begin(), mask.end(),
                                                [](std::uint8_t b) { return b != 0; }));
}

// Extract one channel as a unit-interval plane.
inline GrayRaster channel_plane(const RgbRaster& img, int c) {
  GrayRaster out(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) out[i] = img[i][c] / 255.0;
  return out;
}

inline RgbRaster merge_planes(const std::array<GrayRaster, 3>& planes) {
  require_same_shape(planes[0], planes[1], "merge_planes");
  require_same_shape(planes[0], planes[2], "merge_planes");
  RgbRaster out(planes[0].width(), planes[0].height());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = Rgb{to_byte(planes[0][i] * 255.0), to_byte(planes[1][i] * 255.0),
                 to_byte(planes[2][i] * 255.0)};
  return out;
}

}  // namespace roaddet
