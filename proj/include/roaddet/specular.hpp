#pragma once

// Highlight handling under the dichromatic reflection model
//   I(x) = I_D(x) + I_S(x) = w_d(x) B(x) + w_s(x) G,
// with a white illuminant G. Highlights are found on the dark channel and
// removed by subtracting the achromatic specular scalar that brings a
// pixel's maximum chromaticity to the diffuse maximum Lambda_max.

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "roaddet/otsu.hpp"
#include "roaddet/raster.hpp"
#include "roaddet/window.hpp"

namespace roaddet {

struct SpecularParams {
  int patch_radius = 3;
  double achromatic_band = 0.02;  // delta around 1/3
  double lambda_percentile = 0.95;
  double fallback_lambda_max = 0.5;
  double min_separability = 0.0;
  double max_fraction = 1.0;
};

inline void validate(const SpecularParams& p) {
  if (p.patch_radius < 0) throw Error(ErrorKind::InvalidConfig, "patch_radius must be >= 0");
  if (!(p.achromatic_band > 0.0 && p.achromatic_band < 1.0 / 3.0))
    throw Error(ErrorKind::InvalidConfig, "achromatic_band must lie in (0, 1/3)");
  if (!(p.lambda_percentile > 0.0 && p.lambda_percentile <= 1.0))
    throw Error(ErrorKind::InvalidConfig, "lambda_percentile must lie in (0, 1]");
  if (!(p.min_separability >= 0.0 && p.min_separability <= 1.0))
    throw Error(ErrorKind::InvalidConfig, "min_separability must lie in [0,1]");
  if (!(p.max_fraction > 0.0 && p.max_fraction <= 1.0))
    throw Error(ErrorKind::InvalidConfig, "max_fraction must lie in (0,1]");
}

inline GrayRaster dark_channel(const RgbRaster& img, int patch_radius) {
  GrayRaster mins(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i)
    mins[i] = std::min({img[i].r, img[i].g, img[i].b}) / 255.0;
  return box_min(mins, patch_radius);
}

inline BinaryMask detect_highlight_mask(const RgbRaster& img, const SpecularParams& params = {}) {
  validate(params);
  return threshold_above_otsu(dark_channel(img, params.patch_radius), params.min_separability, params.max_fraction);
}

// max_u I_u / sum_u I_u; nullopt for black.
inline std::optional<double> max_chromaticity(Rgb px) {
  const int sum = px.r + px.g + px.b;
  if (sum == 0) return std::nullopt;
  return static_cast<double>(std::max({px.r, px.g, px.b})) / sum;
}

// Nearest-rank percentile of the chromatic non-highlight pixels.
inline double estimate_lambda_max(const RgbRaster& img, const BinaryMask& mask,
                                  const SpecularParams& params = {}) {
  require_same_shape(img, mask, "estimate_lambda_max");
  std::vector<double> diffuse;
  for (std::size_t i = 0; i < img.size(); ++i) {
    if (mask[i]) continue;
    auto lambda = max_chromaticity(img[i]);
    if (lambda && *lambda > 1.0 / 3.0 + params.achromatic_band) diffuse.push_back(*lambda);
  }
  if (diffuse.empty()) return params.fallback_lambda_max;
  std::sort(diffuse.begin(), diffuse.end());
  const auto rank = static_cast<std::size_t>(std::ceil(params.lambda_percentile * diffuse.size()));
  return diffuse[std::clamp<std::size_t>(rank, 1, diffuse.size()) - 1];
}

// (max_u I_u - Lambda_max sum_u I_u) / (1 - 3 Lambda_max)
inline double specular_magnitude(Rgb px, double lambda_max) {
  const double sum = px.r + px.g + px.b;
  const double hi = std::max({px.r, px.g, px.b});
  return (hi - lambda_max * sum) / (1.0 - 3.0 * lambda_max);
}

inline RgbRaster remove_specular(const RgbRaster& img, const BinaryMask& mask,
                                 const SpecularParams& params = {}) {
  validate(params);
  require_same_shape(img, mask, "remove_specular");
  RgbRaster out = img;
  if (count_set(mask) == 0) return out;
  const double lambda_max = estimate_lambda_max(img, mask, params);
  for (std::size_t i = 0; i < img.size(); ++i) {
    if (!mask[i]) continue;
    const auto lambda = max_chromaticity(img[i]);
    if (!lambda || *lambda <= 1.0 / 3.0 + params.achromatic_band) continue;
    const double magnitude = specular_magnitude(img[i], lambda_max);
    if (!(magnitude >= 0.0)) continue;
    Rgb px = img[i];
    for (int c = 0; c < 3; ++c) px.channel(c) = to_byte(img[i][c] - magnitude);
    out[i] = px;
  }
  return out;
}

}  // namespace roaddet
