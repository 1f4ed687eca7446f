#pragma once

// Windowed statistics over square (2r+1)^2 windows. Windows are clipped to
// the image; the divisor is the number of in-bounds pixels.

#include <algorithm>
#include <vector>

#include "roaddet/raster.hpp"

namespace roaddet {

template <typename T>
Grid<T> box_mean(const Grid<T>& src, int radius) {
  if (radius < 0) throw Error(ErrorKind::DimensionMismatch, "negative window radius");
  const int w = src.width(), h = src.height();
  // Summed-area table with a zero guard row/column.
  std::vector<double> sat(static_cast<std::size_t>(w + 1) * (h + 1), 0.0);
  auto at = [w](int x, int y) { return static_cast<std::size_t>(y) * (w + 1) + x; };
  for (int y = 0; y < h; ++y) {
    double row = 0.0;
    for (int x = 0; x < w; ++x) {
      row += static_cast<double>(src(x, y));
      sat[at(x + 1, y + 1)] = sat[at(x + 1, y)] + row;
    }
  }
  Grid<T> out(w, h);
  for (int y = 0; y < h; ++y) {
    const int y0 = std::max(0, y - radius), y1 = std::min(h - 1, y + radius);
    for (int x = 0; x < w; ++x) {
      const int x0 = std::max(0, x - radius), x1 = std::min(w - 1, x + radius);
      const double sum = sat[at(x1 + 1, y1 + 1)] - sat[at(x0, y1 + 1)] -
                         sat[at(x1 + 1, y0)] + sat[at(x0, y0)];
      const double count = static_cast<double>(x1 - x0 + 1) * (y1 - y0 + 1);
      out(x, y) = static_cast<T>(sum / count);
    }
  }
  return out;
}

// Minimum over the clipped square window. A clipped square is the product
// of two clipped intervals, so the filter separates into row and column passes.
template <typename T>
Grid<T> box_min(const Grid<T>& src, int radius) {
  if (radius < 0) throw Error(ErrorKind::DimensionMismatch, "negative window radius");
  const int w = src.width(), h = src.height();
  Grid<T> rows(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      T m = src(x, y);
      for (int k = std::max(0, x - radius); k <= std::min(w - 1, x + radius); ++k)
        m = std::min(m, src(k, y));
      rows(x, y) = m;
    }
  Grid<T> out(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      T m = rows(x, y);
      for (int k = std::max(0, y - radius); k <= std::min(h - 1, y + radius); ++k)
        m = std::min(m, rows(x, k));
      out(x, y) = m;
    }
  return out;
}

}  // namespace roaddet
