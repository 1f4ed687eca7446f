#pragma once

// Shadow detection on the normalized difference of saturation and value,
// and per-region mean/deviation transfer from a surrounding buffer ring.

#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "roaddet/color.hpp"
#include "roaddet/morphology.hpp"
#include "roaddet/otsu.hpp"
#include "roaddet/raster.hpp"

namespace roaddet {

struct ChannelStats {
  std::array<double, 3> mean{};
  std::array<double, 3> stddev{};  // population
  std::size_t count = 0;
};

struct ShadowRegion {
  int id = 0;
  std::vector<std::pair<int, int>> pixels;
  std::vector<std::pair<int, int>> buffer;
  ChannelStats shadow;
  ChannelStats surround;
};

struct ShadowParams {
  int buffer_width = 5;
  // Otsu splits with a lower between/total variance ratio are treated as
  // having no shadow. 0 accepts every split.
  double min_separability = 0.0;
  // Splits flagging more than this fraction of the frame are discarded.
  double max_fraction = 1.0;
};

// (S - V) / (S + V), 0 where S + V = 0.
inline GrayRaster compute_ndi(const HsvRaster& hsv) {
  GrayRaster out(hsv.width(), hsv.height());
  for (std::size_t i = 0; i < hsv.size(); ++i) {
    const double s = hsv[i].s, v = hsv[i].v;
    const double den = s + v;
    out[i] = den > 0.0 ? std::clamp((s - v) / den, -1.0, 1.0) : 0.0;
  }
  return out;
}

inline BinaryMask detect_shadow_mask(const RgbRaster& img, const ShadowParams& params = {}) {
  return threshold_above_otsu(compute_ndi(rgb_to_hsv(img)), params.min_separability, params.max_fraction);
}

inline ChannelStats channel_stats(const RgbRaster& img, const std::vector<std::pair<int, int>>& pts) {
  ChannelStats st;
  st.count = pts.size();
  if (pts.empty()) return st;
  for (int c = 0; c < 3; ++c) {
    double sum = 0.0;
    for (auto [x, y] : pts) sum += img(x, y)[c];
    const double mean = sum / static_cast<double>(pts.size());
    double sq = 0.0;
    for (auto [x, y] : pts) {
      const double d = img(x, y)[c] - mean;
      sq += d * d;
    }
    st.mean[c] = mean;
    st.stddev[c] = std::sqrt(sq / static_cast<double>(pts.size()));
  }
  return st;
}

// 8-connected shadow components with their buffer rings: the non-shadow
// pixels within Chebyshev distance `buffer_width` of the component.
inline std::vector<ShadowRegion> shadow_regions(const RgbRaster& img, const BinaryMask& mask,
                                                int buffer_width) {
  require_same_shape(img, mask, "shadow_regions");
  if (buffer_width < 1) throw Error(ErrorKind::InvalidConfig, "buffer_width must be >= 1");
  const LabelMap labels = connected_components(mask, Connectivity::Eight);
  const int w = mask.width(), h = mask.height();

  std::vector<ShadowRegion> regions(static_cast<std::size_t>(labels.component_count));
  struct Box { int x0, y0, x1, y1; };
  std::vector<Box> boxes(regions.size(), Box{w, h, -1, -1});
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      const int l = labels.labels(x, y);
      if (l == 0) continue;
      auto& r = regions[static_cast<std::size_t>(l - 1)];
      r.pixels.emplace_back(x, y);
      auto& b = boxes[static_cast<std::size_t>(l - 1)];
      b = Box{std::min(b.x0, x), std::min(b.y0, y), std::max(b.x1, x), std::max(b.y1, y)};
    }

  for (std::size_t k = 0; k < regions.size(); ++k) {
    auto& region = regions[k];
    region.id = static_cast<int>(k) + 1;
    const Box& b = boxes[k];
    const int x0 = std::max(0, b.x0 - buffer_width), x1 = std::min(w - 1, b.x1 + buffer_width);
    const int y0 = std::max(0, b.y0 - buffer_width), y1 = std::min(h - 1, b.y1 + buffer_width);
    const int bw = x1 - x0 + 1, bh = y1 - y0 + 1;
    // Chebyshev dilation of the component = separable max over rows, then columns.
    Grid<std::uint8_t> rows(bw, bh, 0), near(bw, bh, 0);
    for (int y = 0; y < bh; ++y)
      for (int x = 0; x < bw; ++x) {
        if (labels.labels(x + x0, y + y0) != region.id) continue;
        for (int k2 = std::max(0, x - buffer_width); k2 <= std::min(bw - 1, x + buffer_width); ++k2)
          rows(k2, y) = 1;
      }
    for (int y = 0; y < bh; ++y)
      for (int x = 0; x < bw; ++x) {
        if (!rows(x, y)) continue;
        for (int k2 = std::max(0, y - buffer_width); k2 <= std::min(bh - 1, y + buffer_width); ++k2)
          near(x, k2) = 1;
      }
    for (int y = 0; y < bh; ++y)
      for (int x = 0; x < bw; ++x)
        if (near(x, y) && !mask(x + x0, y + y0)) region.buffer.emplace_back(x + x0, y + y0);

    region.shadow = channel_stats(img, region.pixels);
    region.surround = channel_stats(img, region.buffer);
  }
  return regions;
}

// Per component and channel: I' = mu_buff + sigma_buff * (I - mu_k) / sigma_k,
// or mu_buff for a flat component. An empty ring falls back to the global
// non-shadow statistics; a fully shadowed image is returned unchanged.
inline RgbRaster compensate_shadow(const RgbRaster& img, const BinaryMask& mask, int buffer_width = 5) {
  auto regions = shadow_regions(img, mask, buffer_width);
  RgbRaster out = img;
  if (regions.empty()) return out;

  std::vector<std::pair<int, int>> lit;
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x)
      if (!mask(x, y)) lit.emplace_back(x, y);
  const ChannelStats global = channel_stats(img, lit);

  for (const auto& region : regions) {
    const ChannelStats& target = region.surround.count > 0 ? region.surround : global;
    if (target.count == 0) continue;
    for (auto [x, y] : region.pixels) {
      Rgb px = img(x, y);
      for (int c = 0; c < 3; ++c) {
        double v = target.mean[c];
        if (region.shadow.stddev[c] > 0.0)
          v += target.stddev[c] * (img(x, y)[c] - region.shadow.mean[c]) / region.shadow.stddev[c];
        px.channel(c) = to_byte(v);
      }
      out(x, y) = px;
    }
  }
  return out;
}

}  // namespace roaddet
