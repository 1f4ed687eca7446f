#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>

#include "roaddet/raster.hpp"

namespace roaddet {

// Intensity/saturation/hue of one pixel. V = (R+G+B)/3 stored on the unit
// interval; S = 1 - 3 min/(R+G+B) with S = 0 for black; H from the arccos
// form, mirrored to 360 - theta when B > G, undefined when S = 0.
inline Hsv rgb_to_hsv(Rgb px) {
  const int r = px.r, g = px.g, b = px.b;
  const int sum = r + g + b;
  Hsv out;
  out.v = sum / (3.0 * 255.0);
  if (sum == 0) return out;
  const int lo = std::min({r, g, b});
  out.s = static_cast<double>(sum - 3 * lo) / sum;
  if (out.s == 0.0) return out;

  const double num = 0.5 * ((r - g) + (r - b));
  const double den = std::sqrt(static_cast<double>((r - g) * (r - g) + (r - b) * (g - b)));
  const double theta = std::acos(std::clamp(num / den, -1.0, 1.0)) * 180.0 / std::numbers::pi;
  out.h = b <= g ? theta : 360.0 - theta;
  if (out.h >= 360.0) out.h = 0.0;
  return out;
}

inline HsvRaster rgb_to_hsv(const RgbRaster& img) {
  HsvRaster out(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) out[i] = rgb_to_hsv(img[i]);
  return out;
}

// Single-channel gray used as guidance everywhere: the V component.
inline GrayRaster gray_of(const RgbRaster& img) {
  GrayRaster out(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i)
    out[i] = (img[i].r + img[i].g + img[i].b) / (3.0 * 255.0);
  return out;
}

}  // namespace roaddet
