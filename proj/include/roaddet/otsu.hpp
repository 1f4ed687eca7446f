#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "roaddet/raster.hpp"

namespace roaddet {

struct OtsuResult {
  double threshold = 0.0;  // center of the last bin of the lower class
  int bin = 0;             // index of that bin
  // Between-class over total variance of the binned data, in [0,1]. Close
  // to 1 for well separated modes, about 0.64 for a single Gaussian mode.
  double separability = 0.0;
};

// Histogram threshold maximizing between-class variance. Values are mapped
// affinely from [min,max] onto `bins` bins; the returned threshold is the
// center of the split bin and pixels strictly above it form the upper class.
// Ties resolve to the lowest bin.
inline OtsuResult otsu(const GrayRaster& gray, int bins = 256) {
  if (gray.empty()) throw Error(ErrorKind::UniformImage, "empty raster");
  if (bins < 2) throw Error(ErrorKind::UniformImage, "need at least two bins");
  const auto [lo_it, hi_it] = std::minmax_element(gray.begin(), gray.end());
  const double lo = *lo_it, hi = *hi_it;
  if (!(hi > lo)) throw Error(ErrorKind::UniformImage, "all values equal");

  const double scale = bins / (hi - lo);
  std::vector<double> hist(static_cast<std::size_t>(bins), 0.0);
  for (double v : gray) {
    int b = static_cast<int>((v - lo) * scale);
    hist[static_cast<std::size_t>(std::clamp(b, 0, bins - 1))] += 1.0;
  }

  const double n = static_cast<double>(gray.size());
  double total_mean = 0.0, total_sq = 0.0;
  for (int b = 0; b < bins; ++b) {
    total_mean += b * hist[b];
    total_sq += static_cast<double>(b) * b * hist[b];
  }
  total_mean /= n;
  const double total_var = total_sq / n - total_mean * total_mean;

  double w0 = 0.0, sum0 = 0.0;
  double best = -1.0;
  int best_bin = 0;
  for (int k = 0; k < bins - 1; ++k) {
    w0 += hist[k] / n;
    sum0 += k * hist[k] / n;
    const double w1 = 1.0 - w0;
    if (w0 <= 0.0 || w1 <= 0.0) continue;
    const double diff = total_mean * w0 - sum0;
    const double between = diff * diff / (w0 * w1);
    if (between > best) {
      best = between;
      best_bin = k;
    }
  }

  OtsuResult out;
  out.bin = best_bin;
  out.threshold = lo + (best_bin + 0.5) / scale;
  out.separability = total_var > 0.0 ? std::clamp(best / total_var, 0.0, 1.0) : 0.0;
  return out;
}

inline double otsu_threshold(const GrayRaster& gray, int bins = 256) {
  return otsu(gray, bins).threshold;
}

// Binary segmentation `value > threshold`. Uniform inputs, inputs whose Otsu
// separability falls below `min_separability`, and splits whose upper class
// covers more than `max_fraction` of the pixels produce an empty mask.
inline BinaryMask threshold_above_otsu(const GrayRaster& gray, double min_separability = 0.0,
                                       double max_fraction = 1.0) {
  BinaryMask mask(gray.width(), gray.height(), 0);
  OtsuResult split;
  try {
    split = otsu(gray);
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::UniformImage) return mask;
    throw;
  }
  if (split.separability < min_separability) return mask;
  std::size_t above = 0;
  for (std::size_t i = 0; i < gray.size(); ++i) {
    mask[i] = gray[i] > split.threshold ? 1 : 0;
    above += mask[i];
  }
  if (static_cast<double>(above) > max_fraction * static_cast<double>(gray.size()))
    std::fill(mask.begin(), mask.end(), std::uint8_t{0});
  return mask;
}

}  // namespace roaddet
