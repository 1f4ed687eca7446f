#pragma once

// Rain and snow: the streak formation model used to synthesize degraded
// frames, and the two-pass guided/re-guided removal filter.

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <utility>

#include "roaddet/color.hpp"
#include "roaddet/guided_filter.hpp"
#include "roaddet/raster.hpp"

namespace roaddet {

struct RainSynthParams {
  double alpha = 0.7;              // tau / T, fraction of exposure the drop covers a pixel
  double streak_intensity = 255.0;  // I_E
  int count = 200;
  int length = 20;
  double angle_deg = 10.0;  // from vertical
  double angle_jitter_deg = 3.0;
  int width = 1;
  std::uint64_t rng_seed = 1;
};

struct RainFrame {
  RgbRaster image;
  BinaryMask streaks;
};

inline void validate(const RainSynthParams& p) {
  if (!(p.alpha >= 0.0 && p.alpha <= 1.0))
    throw Error(ErrorKind::InvalidConfig, "rain alpha must lie in [0,1]");
  if (!(p.streak_intensity >= 0.0 && p.streak_intensity <= 255.0))
    throw Error(ErrorKind::InvalidConfig, "streak intensity must lie in [0,255]");
  if (p.count < 0 || p.length < 1 || p.width < 1)
    throw Error(ErrorKind::InvalidConfig, "streak geometry must be positive");
}

// Streak pixels become alpha * I_E + (1 - alpha) * I_b per channel.
inline RainFrame synthesize_rain(const RgbRaster& background, const RainSynthParams& params) {
  validate(params);
  const int w = background.width(), h = background.height();
  BinaryMask streaks(w, h, 0);
  std::mt19937_64 rng(params.rng_seed);
  std::uniform_real_distribution<double> ux(0.0, w), uy(-params.length, h);
  std::uniform_real_distribution<double> jitter(-params.angle_jitter_deg, params.angle_jitter_deg);
  for (int s = 0; s < params.count; ++s) {
    const double x0 = ux(rng), y0 = uy(rng);
    const double angle = (params.angle_deg + jitter(rng)) * std::numbers::pi / 180.0;
    const double dx = std::sin(angle), dy = std::cos(angle);
    for (double t = 0.0; t <= params.length; t += 0.5) {
      const int py = static_cast<int>(std::floor(y0 + t * dy));
      const int px = static_cast<int>(std::floor(x0 + t * dx));
      for (int k = 0; k < params.width; ++k)
        if (streaks.contains(px + k, py)) streaks(px + k, py) = 1;
    }
  }
  RainFrame out{background, std::move(streaks)};
  for (std::size_t i = 0; i < out.image.size(); ++i) {
    if (!out.streaks[i]) continue;
    Rgb px = background[i];
    for (int c = 0; c < 3; ++c)
      px.channel(c) = to_byte(params.alpha * params.streak_intensity +
                              (1.0 - params.alpha) * background[i][c]);
    out.image[i] = px;
  }
  return out;
}

struct RainPasses {
  std::array<GrayRaster, 3> first;   // J, per channel on the unit interval
  GrayRaster guidance;               // refined guidance
  std::array<GrayRaster, 3> second;  // final planes before write-back
};

// Pass 1 filters every channel under the gray of the input, giving J.
// The refined guidance averages gray(J) with the gray of the input after
// removing the estimated rain residual on pixels J darkened (streaks are
// brighter than what they cover). Pass 2 re-filters the input under it.
inline RainPasses rain_passes(const RgbRaster& img, const GuidedFilterParams& params = {}) {
  const GrayRaster gray = gray_of(img);
  RainPasses out;
  out.first = guided_filter_rgb(img, gray, params);
  out.guidance = GrayRaster(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i) {
    const double filtered = (out.first[0][i] + out.first[1][i] + out.first[2][i]) / 3.0;
    // The streak candidates take J, everything else keeps the input.
    const double derained = gray[i] - filtered > 0.0 ? filtered : gray[i];
    out.guidance[i] = 0.5 * (filtered + derained);
  }
  out.second = guided_filter_rgb(img, out.guidance, params);
  return out;
}

inline RgbRaster remove_rain_snow(const RgbRaster& img, const GuidedFilterParams& params = {}) {
  return merge_planes(rain_passes(img, params).second);
}

}  // namespace roaddet
