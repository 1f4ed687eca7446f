#pragma once

#include <array>

#include "roaddet/raster.hpp"
#include "roaddet/window.hpp"

namespace roaddet {

struct GuidedFilterParams {
  int radius = 8;
  double epsilon = 0.04;
};

// Locally affine filter: in each window w_k the output is a_k * I + b_k with
//   a_k = (mean(I p) - mean(I) mean(p)) / (var(I) + eps),  b_k = mean(p) - a_k mean(I),
// and each pixel averages the coefficients of every window covering it.
// A flat guidance window with eps = 0 takes a_k = 0.
inline GrayRaster guided_filter(const GrayRaster& p, const GrayRaster& guide,
                                const GuidedFilterParams& params) {
  require_same_shape(p, guide, "guided_filter");
  if (params.radius < 0 || params.epsilon < 0.0)
    throw Error(ErrorKind::InvalidConfig, "guided filter needs radius >= 0 and epsilon >= 0");
  const int r = params.radius;
  const int w = p.width(), h = p.height();

  GrayRaster guide_p(w, h), guide_sq(w, h);
  for (std::size_t i = 0; i < p.size(); ++i) {
    guide_p[i] = guide[i] * p[i];
    guide_sq[i] = guide[i] * guide[i];
  }
  const GrayRaster mean_i = box_mean(guide, r);
  const GrayRaster mean_p = box_mean(p, r);
  const GrayRaster mean_ip = box_mean(guide_p, r);
  const GrayRaster mean_ii = box_mean(guide_sq, r);

  GrayRaster a(w, h), b(w, h);
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double var = std::max(0.0, mean_ii[i] - mean_i[i] * mean_i[i]);
    const double cov = mean_ip[i] - mean_i[i] * mean_p[i];
    const double den = var + params.epsilon;
    a[i] = den > 1e-14 ? cov / den : 0.0;
    b[i] = mean_p[i] - a[i] * mean_i[i];
  }
  const GrayRaster mean_a = box_mean(a, r);
  const GrayRaster mean_b = box_mean(b, r);

  GrayRaster out(w, h);
  for (std::size_t i = 0; i < p.size(); ++i) out[i] = mean_a[i] * guide[i] + mean_b[i];
  return out;
}

inline std::array<GrayRaster, 3> guided_filter_rgb(const RgbRaster& img, const GrayRaster& guide,
                                                   const GuidedFilterParams& params) {
  return {guided_filter(channel_plane(img, 0), guide, params),
          guided_filter(channel_plane(img, 1), guide, params),
          guided_filter(channel_plane(img, 2), guide, params)};
}

}  // namespace roaddet
