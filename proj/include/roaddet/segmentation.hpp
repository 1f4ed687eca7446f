#pragma once

// Per-image road/non-road segmentation: seed sampling from fixed image
// regions, linear SVM training on normalized RGB, per-pixel classification.

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "roaddet/raster.hpp"
#include "roaddet/svm.hpp"

namespace roaddet {

using ColorFeature = Feature<3>;
using ColorTrainingSet = TrainingSet<3>;
using ColorSvm = SvmModel<3>;

inline ColorFeature feature_of(Rgb px) {
  return {px.r / 255.0, px.g / 255.0, px.b / 255.0};
}

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

struct Rect {
  double x0 = 0.0, y0 = 0.0, x1 = 0.0, y1 = 0.0;
  bool contains(Point2 p) const noexcept { return p.x >= x0 && p.x < x1 && p.y >= y0 && p.y < y1; }
  friend bool operator==(const Rect&, const Rect&) = default;
};

// Convex polygon test with vertices in either winding order.
inline bool inside_convex(const std::vector<Point2>& poly, Point2 p) {
  if (poly.size() < 3) return false;
  int sign = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point2 a = poly[i], b = poly[(i + 1) % poly.size()];
    const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
    if (cross == 0.0) continue;
    const int s = cross > 0 ? 1 : -1;
    if (sign == 0) sign = s;
    else if (s != sign) return false;
  }
  return true;
}

// Fractional image coordinates, origin top-left, y downwards.
struct SeedLayout {
  std::vector<Point2> road{{0.35, 1.0}, {0.65, 1.0}, {0.55, 0.7}, {0.45, 0.7}};
  std::vector<Rect> nonroad{{0.0, 0.0, 1.0 / 3.0, 0.15}, {2.0 / 3.0, 0.0, 1.0, 0.15}};
  int samples_per_class = 500;
  std::uint64_t rng_seed = 1;

  friend bool operator==(const SeedLayout&, const SeedLayout&) = default;
};

inline void validate(const SeedLayout& layout) {
  auto in_unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (layout.road.size() < 3) throw Error(ErrorKind::InvalidConfig, "road polygon needs 3+ corners");
  for (auto p : layout.road)
    if (!in_unit(p.x) || !in_unit(p.y))
      throw Error(ErrorKind::InvalidConfig, "road polygon outside the unit square");
  if (layout.nonroad.empty()) throw Error(ErrorKind::InvalidConfig, "no non-road regions");
  for (const auto& r : layout.nonroad)
    if (!in_unit(r.x0) || !in_unit(r.x1) || !in_unit(r.y0) || !in_unit(r.y1) || r.x0 >= r.x1 ||
        r.y0 >= r.y1)
      throw Error(ErrorKind::InvalidConfig, "non-road rectangle outside the unit square");
  // Disjointness is checked on a fine lattice of probe points.
  constexpr int kProbe = 400;
  for (int j = 0; j < kProbe; ++j)
    for (int i = 0; i < kProbe; ++i) {
      const Point2 p{(i + 0.5) / kProbe, (j + 0.5) / kProbe};
      int hits = inside_convex(layout.road, p) ? 1 : 0;
      for (const auto& r : layout.nonroad) hits += r.contains(p) ? 1 : 0;
      if (hits > 1) throw Error(ErrorKind::InvalidConfig, "seed regions overlap");
    }
  if (layout.samples_per_class < 1) throw Error(ErrorKind::InvalidConfig, "samples_per_class < 1");
}

namespace detail {

inline std::vector<std::size_t> draw_without_replacement(std::vector<std::size_t> pool, int count,
                                                         std::mt19937_64& rng) {
  for (int k = 0; k < count; ++k) {
    std::uniform_int_distribution<std::size_t> pick(static_cast<std::size_t>(k), pool.size() - 1);
    std::swap(pool[static_cast<std::size_t>(k)], pool[pick(rng)]);
  }
  pool.resize(static_cast<std::size_t>(count));
  return pool;
}

}  // namespace detail

// Pixels belong to a region when their center does. Road samples are
// labeled +1, non-road samples -1; road samples come first.
inline ColorTrainingSet sample_seeds(const RgbRaster& img, const SeedLayout& layout) {
  validate(layout);
  std::vector<std::size_t> road, nonroad;
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < img.width(); ++x) {
      const Point2 p{(x + 0.5) / img.width(), (y + 0.5) / img.height()};
      if (inside_convex(layout.road, p)) {
        road.push_back(img.index(x, y));
        continue;
      }
      for (const auto& r : layout.nonroad)
        if (r.contains(p)) {
          nonroad.push_back(img.index(x, y));
          break;
        }
    }
  const auto need = static_cast<std::size_t>(layout.samples_per_class);
  if (road.size() < need)
    throw Error(ErrorKind::RegionTooSmall, "road seed region has " + std::to_string(road.size()) +
                                               " pixels, need " + std::to_string(need));
  if (nonroad.size() < need)
    throw Error(ErrorKind::RegionTooSmall, "non-road seed region has " +
                                               std::to_string(nonroad.size()) + " pixels, need " +
                                               std::to_string(need));
  std::mt19937_64 rng(layout.rng_seed);
  ColorTrainingSet out;
  for (auto i : detail::draw_without_replacement(std::move(road), layout.samples_per_class, rng))
    out.add(feature_of(img[i]), 1);
  for (auto i : detail::draw_without_replacement(std::move(nonroad), layout.samples_per_class, rng))
    out.add(feature_of(img[i]), -1);
  return out;
}

// Mask bit 1 where the decision value is >= 0 (road).
inline BinaryMask classify(const ColorSvm& model, const RgbRaster& img) {
  const ColorFeature w = model.weights();
  BinaryMask out(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i)
    out[i] = dot(w, feature_of(img[i])) + model.bias >= 0.0 ? 1 : 0;
  return out;
}

}  // namespace roaddet
