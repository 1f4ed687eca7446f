#pragma once

// Procedural road scenes with exact ground truth, and the three synthetic
// degradations (cast shadows, rain/snow streaks, specular glare) used to
// build evaluation corpora.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "roaddet/rainsnow.hpp"
#include "roaddet/raster.hpp"

namespace roaddet {

struct SceneParams {
  int width = 512;
  int height = 384;
  std::array<double, 3> road_color{128, 102, 90};
  std::array<double, 3> verge_color{100, 140, 95};
  double color_jitter = 6.0;       // per-frame offset of the base colors
  double texture_amplitude = 0.12;  // relative brightness modulation
  double texture_scale = 6.0;       // pixels per texture lattice cell
  double noise_sigma = 32.0;        // per-pixel, per-channel
};

struct Scene {
  RgbRaster image;  // noise-free radiance
  BinaryMask road;  // ground truth, 1 = road
};

namespace scene_detail {

// Bilinear value noise on a lattice with `cell` pixel spacing, two octaves.
inline GrayRaster value_noise(int w, int h, double cell, std::mt19937_64& rng) {
  GrayRaster out(w, h, 0.0);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double amp = 1.0, norm = 0.0;
  for (int octave = 0; octave < 2; ++octave, cell *= 3.0, amp *= 0.6) {
    const int gw = static_cast<int>(w / cell) + 2, gh = static_cast<int>(h / cell) + 2;
    std::vector<double> lattice(static_cast<std::size_t>(gw) * gh);
    for (auto& v : lattice) v = u(rng);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        const double fx = x / cell, fy = y / cell;
        const int ix = static_cast<int>(fx), iy = static_cast<int>(fy);
        const double tx = fx - ix, ty = fy - iy;
        auto at = [&](int i, int j) { return lattice[static_cast<std::size_t>(j) * gw + i]; };
        const double top = at(ix, iy) * (1 - tx) + at(ix + 1, iy) * tx;
        const double bot = at(ix, iy + 1) * (1 - tx) + at(ix + 1, iy + 1) * tx;
        out(x, y) += amp * (top * (1 - ty) + bot * ty);
      }
    norm += amp;
  }
  for (auto& v : out) v /= norm;
  return out;
}

}  // namespace scene_detail

// A straight road receding from the bottom edge towards the top edge; the
// rest of the frame is roadside verge.
inline Scene generate_scene(const SceneParams& p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int w = p.width, h = p.height;

  const double bottom_left = 0.12 + 0.08 * u(rng), bottom_right = 0.80 + 0.08 * u(rng);
  const double top_center = 0.47 + 0.06 * u(rng), top_half = 0.025 + 0.02 * u(rng);
  std::array<double, 3> road = p.road_color, verge = p.verge_color;
  std::normal_distribution<double> jitter(0.0, p.color_jitter);
  const double road_shift = jitter(rng), verge_shift = jitter(rng);
  for (int c = 0; c < 3; ++c) {
    road[c] += road_shift;
    verge[c] += verge_shift;
  }

  const GrayRaster road_tex = scene_detail::value_noise(w, h, p.texture_scale, rng);
  const GrayRaster verge_tex = scene_detail::value_noise(w, h, p.texture_scale, rng);
  Scene s{RgbRaster(w, h), BinaryMask(w, h, 0)};
  for (int y = 0; y < h; ++y) {
    const double t = (y + 0.5) / h;  // 0 at top, 1 at bottom
    const double left = (top_center - top_half) + t * (bottom_left - (top_center - top_half));
    const double right = (top_center + top_half) + t * (bottom_right - (top_center + top_half));
    for (int x = 0; x < w; ++x) {
      const double fx = (x + 0.5) / w;
      const bool is_road = fx >= left && fx < right;
      s.road(x, y) = is_road ? 1 : 0;
      const auto& base = is_road ? road : verge;
      const double mod = 1.0 + p.texture_amplitude * (is_road ? road_tex(x, y) : verge_tex(x, y));
      Rgb px;
      for (int c = 0; c < 3; ++c) px.channel(c) = to_byte(base[c] * mod);
      s.image(x, y) = px;
    }
  }
  return s;
}

// Additive Gaussian sensor noise, applied after any degradation.
inline RgbRaster add_sensor_noise(const RgbRaster& img, double sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sigma);
  RgbRaster out(img.width(), img.height());
  for (std::size_t i = 0; i < img.size(); ++i)
    for (int c = 0; c < 3; ++c) out[i].channel(c) = to_byte(img[i][c] + noise(rng));
  return out;
}

struct Degraded {
  RgbRaster image;
  BinaryMask affected;  // shadow / streak / glare pixels
};

struct ShadowSynthParams {
  std::array<double, 3> attenuation{0.25, 0.32, 0.62};  // skylight-lit: darker and bluer
  int bands = 2;
  double min_thickness = 0.07;  // fraction of height
  double max_thickness = 0.12;
};

// Cast shadows of roadside objects: bands crossing the full frame width
// with slanted, slightly wavy edges, kept out of the top seed strips.
inline Degraded synthesize_shadow(const RgbRaster& img, const ShadowSynthParams& p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int w = img.width(), h = img.height();
  Degraded out{img, BinaryMask(w, h, 0)};
  for (int band = 0; band < p.bands; ++band) {
    // Bands alternate between the upper-middle and lower part of the frame.
    const double lo = band % 2 == 0 ? 0.30 : 0.62, hi = band % 2 == 0 ? 0.50 : 0.85;
    const double y0 = lo + (hi - lo) * u(rng);
    const double thick = p.min_thickness + (p.max_thickness - p.min_thickness) * u(rng);
    const double slope = (u(rng) - 0.5) * 0.15;
    const double phase = 6.28 * u(rng), wave = 0.01 + 0.01 * u(rng);
    for (int x = 0; x < w; ++x) {
      const double fx = (x + 0.5) / w;
      const double top = y0 + slope * (fx - 0.5) + wave * std::sin(phase + fx * 9.0);
      const double bot = top + thick + wave * std::sin(phase * 0.7 + fx * 13.0);
      for (int y = std::max(0, static_cast<int>(top * h)); y < std::min(h, static_cast<int>(bot * h)); ++y)
        out.affected(x, y) = 1;
    }
  }
  for (std::size_t i = 0; i < out.image.size(); ++i) {
    if (!out.affected[i]) continue;
    Rgb px = img[i];
    for (int c = 0; c < 3; ++c) px.channel(c) = to_byte(img[i][c] * p.attenuation[c]);
    out.image[i] = px;
  }
  return out;
}

struct SpecularSynthParams {
  int blobs = 4;
  double min_strength = 80.0;  // peak specular magnitude added to every channel
  double max_strength = 110.0;
  double min_radius = 0.07;  // fraction of width
  double max_radius = 0.12;
};

// Glare patches following the dichromatic model with a white illuminant:
// each pixel gains w_s(x) * (1,1,1) with a flat-topped radial w_s.
inline Degraded synthesize_specular(const RgbRaster& img, const BinaryMask& road,
                                    const SpecularSynthParams& p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int w = img.width(), h = img.height();
  GrayRaster gain(w, h, 0.0);
  for (int blob = 0; blob < p.blobs; ++blob) {
    // Centers on road pixels below the top quarter (wet-asphalt reflections).
    int cx = 0, cy = 0;
    for (int attempt = 0; attempt < 1000; ++attempt) {
      cx = static_cast<int>(u(rng) * w);
      cy = static_cast<int>((0.3 + 0.65 * u(rng)) * h);
      if (road(cx, cy)) break;
    }
    const double radius = (p.min_radius + (p.max_radius - p.min_radius) * u(rng)) * w;
    const double strength = p.min_strength + (p.max_strength - p.min_strength) * u(rng);
    const double aspect = 0.5 + 0.3 * u(rng);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x) {
        const double dx = (x - cx) / radius, dy = (y - cy) / (radius * aspect);
        const double r2 = dx * dx + dy * dy;
        if (r2 >= 1.0) continue;
        const double profile = std::min(1.0, 2.0 * (1.0 - r2));
        gain(x, y) = std::max(gain(x, y), strength * profile);
      }
  }
  Degraded out{img, BinaryMask(w, h, 0)};
  for (std::size_t i = 0; i < img.size(); ++i) {
    if (gain[i] <= 0.0) continue;
    out.affected[i] = 1;
    Rgb px = img[i];
    for (int c = 0; c < 3; ++c) px.channel(c) = to_byte(img[i][c] + gain[i]);
    out.image[i] = px;
  }
  return out;
}

enum class Degradation { Shadow, Rain, Specular };

inline std::string to_string(Degradation d) {
  switch (d) {
    case Degradation::Shadow: return "shadow";
    case Degradation::Rain: return "rain";
    case Degradation::Specular: return "specular";
  }
  return "?";
}

struct SyntheticFrame {
  std::string name;
  RgbRaster clean;     // noise-free, undegraded
  RgbRaster degraded;  // degradation, then sensor noise
  BinaryMask ground_truth;
  BinaryMask affected;
  double rain_alpha = 0.0;
};

struct CorpusParams {
  SceneParams scene;
  ShadowSynthParams shadow;
  RainSynthParams rain{0.7, 235.0, 260, 24, 8.0, 4.0, 2, 1};
  std::vector<double> rain_alphas{0.4, 0.7, 1.0};
  SpecularSynthParams specular;
};

// Frame i of a corpus depends only on (kind, seed, i).
inline std::vector<SyntheticFrame> make_corpus(Degradation kind, int count, std::uint64_t seed,
                                               const CorpusParams& p = {}) {
  std::vector<SyntheticFrame> frames;
  for (int i = 0; i < count; ++i) {
    const std::uint64_t frame_seed = seed * 1000003ULL + static_cast<std::uint64_t>(i) * 7919ULL +
                                     static_cast<std::uint64_t>(kind) * 104729ULL;
    Scene scene = generate_scene(p.scene, frame_seed);
    SyntheticFrame f;
    char name[64];
    std::snprintf(name, sizeof name, "%s_%03d", to_string(kind).c_str(), i);
    f.name = name;
    f.clean = scene.image;
    f.ground_truth = scene.road;
    switch (kind) {
      case Degradation::Shadow: {
        auto d = synthesize_shadow(scene.image, p.shadow, frame_seed + 1);
        f.degraded = std::move(d.image);
        f.affected = std::move(d.affected);
        break;
      }
      case Degradation::Rain: {
        RainSynthParams rp = p.rain;
        rp.alpha = p.rain_alphas[static_cast<std::size_t>(i) % p.rain_alphas.size()];
        rp.rng_seed = frame_seed + 1;
        f.rain_alpha = rp.alpha;
        auto d = synthesize_rain(scene.image, rp);
        f.degraded = std::move(d.image);
        f.affected = std::move(d.streaks);
        break;
      }
      case Degradation::Specular: {
        auto d = synthesize_specular(scene.image, scene.road, p.specular, frame_seed + 1);
        f.degraded = std::move(d.image);
        f.affected = std::move(d.affected);
        break;
      }
    }
    f.degraded = add_sensor_noise(f.degraded, p.scene.noise_sigma, frame_seed + 2);
    frames.push_back(std::move(f));
  }
  return frames;
}

}  // namespace roaddet
