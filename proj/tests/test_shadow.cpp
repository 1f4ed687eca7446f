#include <gtest/gtest.h>

#include <cmath>

#include "expect_error.hpp"
#include "oracles.hpp"
#include "roaddet/roaddet.hpp"

using namespace roaddet;
using roaddet::testing::kind_of;

TEST(Ndi, Examples) {
  HsvRaster hsv(3, 1);
  hsv[0] = Hsv{10.0, 0.4, 0.4};
  hsv[1] = Hsv{Hsv::kUndefinedHue, 0.0, 1.0};
  hsv[2] = rgb_to_hsv(Rgb{10, 10, 60});
  const GrayRaster ndi = compute_ndi(hsv);
  EXPECT_EQ(ndi[0], 0.0);
  EXPECT_EQ(ndi[1], -1.0);

  const double v = 80.0 / 765.0, s = 1.0 - 30.0 / 80.0;
  EXPECT_NEAR(hsv[2].v, 0.10457, 1e-5);
  EXPECT_DOUBLE_EQ(hsv[2].s, 0.625);
  EXPECT_NEAR(ndi[2], (s - v) / (s + v), 1e-12);
  EXPECT_NEAR(ndi[2], 0.713, 5e-4);
}

TEST(Ndi, BlackIsZero) {
  HsvRaster hsv(1, 1);
  hsv[0] = rgb_to_hsv(Rgb{0, 0, 0});
  EXPECT_EQ(compute_ndi(hsv)[0], 0.0);
}

TEST(Otsu, TwoLevelsSplitAtTheLowestBin) {
  GrayRaster g(4, 4);
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = i % 2 ? 1.0 : 0.0;
  const OtsuResult r = otsu(g);
  EXPECT_EQ(r.bin, 0);
  EXPECT_DOUBLE_EQ(r.threshold, 0.5 / 256.0);
  EXPECT_DOUBLE_EQ(r.separability, 1.0);
  const auto sweep = oracle::otsu_sweep(g);
  ASSERT_TRUE(sweep);
  EXPECT_EQ(sweep->threshold, r.threshold);
}

TEST(Otsu, UniformRaises) {
  EXPECT_EQ(kind_of([] { otsu(GrayRaster(3, 3, 0.2)); }), ErrorKind::UniformImage);
  EXPECT_EQ(count_set(threshold_above_otsu(GrayRaster(3, 3, 0.2))), 0u);
}

TEST(Otsu, Guards) {
  GrayRaster g(10, 1);
  for (int i = 0; i < 10; ++i) g[static_cast<std::size_t>(i)] = i < 6 ? 0.0 : 1.0;
  EXPECT_EQ(count_set(threshold_above_otsu(g)), 4u);
  EXPECT_EQ(count_set(threshold_above_otsu(g, 0.0, 0.4)), 4u);
  EXPECT_EQ(count_set(threshold_above_otsu(g, 0.0, 0.39)), 0u);

  // A single smooth ramp has low separability.
  GrayRaster ramp(256, 1);
  for (int i = 0; i < 256; ++i) ramp[static_cast<std::size_t>(i)] = i;
  EXPECT_NEAR(otsu(ramp).separability, 0.75, 0.01);
  EXPECT_GT(count_set(threshold_above_otsu(ramp, 0.7)), 0u);
  EXPECT_EQ(count_set(threshold_above_otsu(ramp, 0.8)), 0u);
}

TEST(ShadowMask, FlatNdiGivesEmptyMask) {
  RgbRaster img(6, 6, Rgb{90, 120, 60});
  EXPECT_EQ(count_set(detect_shadow_mask(img)), 0u);
}

TEST(ShadowMask, DarkBluishHalfIsShadow) {
  RgbRaster img(16, 8);
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 16; ++x) {
      const int base = 170 + (x * 7 + y * 3) % 20;
      const Rgb lit{static_cast<std::uint8_t>(base), static_cast<std::uint8_t>(base - 5),
                    static_cast<std::uint8_t>(base - 10)};
      img(x, y) = x < 8 ? lit
                        : Rgb{to_byte(lit.r * 0.3), to_byte(lit.g * 0.3), to_byte(lit.b * 0.3 + 30)};
    }
  // Oracle: every right-half NDI exceeds every left-half NDI.
  const GrayRaster ndi = compute_ndi(rgb_to_hsv(img));
  double left_max = -1.0, right_min = 1.0;
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 16; ++x)
      if (x < 8) left_max = std::max(left_max, ndi(x, y));
      else right_min = std::min(right_min, ndi(x, y));
  ASSERT_GT(right_min, left_max);

  // The lit half sits in the split bin, so its pixels above the bin center
  // land in the upper class too.
  const auto sweep = oracle::otsu_sweep(ndi);
  ASSERT_TRUE(sweep);
  const BinaryMask m = detect_shadow_mask(img);
  for (int y = 0; y < 8; ++y)
    for (int x = 0; x < 16; ++x) {
      EXPECT_EQ(m(x, y), ndi(x, y) > sweep->threshold ? 1 : 0) << x << "," << y;
      if (x >= 8) {
        EXPECT_EQ(m(x, y), 1) << x << "," << y;
      }
    }

  // Half the frame is more than the default pipeline guard allows.
  EXPECT_EQ(count_set(detect_shadow_mask(img, {5, 0.0, 0.3})), 0u);
}

namespace {

// One row: lit, lit, shadow, shadow, lit, lit; gray pixels.
RgbRaster row(std::array<int, 6> v) {
  RgbRaster img(6, 1);
  for (int x = 0; x < 6; ++x) {
    const auto b = static_cast<std::uint8_t>(v[static_cast<std::size_t>(x)]);
    img(x, 0) = Rgb{b, b, b};
  }
  return img;
}

BinaryMask middle_pair() {
  BinaryMask m(6, 1, 0);
  m(2, 0) = m(3, 0) = 1;
  return m;
}

}  // namespace

TEST(Compensation, MeanVarianceTransfer) {
  // Shadow: mean 30, deviation 10. Buffer: mean 120, deviation 20.
  const RgbRaster img = row({100, 140, 20, 40, 100, 140});
  const auto regions = shadow_regions(img, middle_pair(), 2);
  ASSERT_EQ(regions.size(), 1u);
  EXPECT_DOUBLE_EQ(regions[0].shadow.mean[0], 30.0);
  EXPECT_DOUBLE_EQ(regions[0].shadow.stddev[0], 10.0);
  EXPECT_DOUBLE_EQ(regions[0].surround.mean[0], 120.0);
  EXPECT_DOUBLE_EQ(regions[0].surround.stddev[0], 20.0);

  const RgbRaster out = compensate_shadow(img, middle_pair(), 2);
  EXPECT_EQ(out(3, 0), (Rgb{140, 140, 140}));
  EXPECT_EQ(out(2, 0), (Rgb{100, 100, 100}));
  for (int x : {0, 1, 4, 5}) EXPECT_EQ(out(x, 0), img(x, 0));
}

TEST(Compensation, IdentityWhenStatisticsMatch) {
  const RgbRaster img = row({100, 140, 100, 140, 100, 140});
  EXPECT_EQ(compensate_shadow(img, middle_pair(), 2), img);
}

TEST(Compensation, FlatComponentTakesBufferMean) {
  const RgbRaster img = row({100, 140, 30, 30, 100, 140});
  const RgbRaster out = compensate_shadow(img, middle_pair(), 2);
  EXPECT_EQ(out(2, 0), (Rgb{120, 120, 120}));
  EXPECT_EQ(out(3, 0), (Rgb{120, 120, 120}));
}

TEST(Compensation, BufferWidthLimitsTheRing) {
  const RgbRaster img = row({10, 140, 20, 40, 140, 10});
  const auto regions = shadow_regions(img, middle_pair(), 1);
  ASSERT_EQ(regions[0].buffer.size(), 2u);
  EXPECT_DOUBLE_EQ(regions[0].surround.mean[0], 140.0);
}

TEST(Compensation, NoOpCases) {
  const RgbRaster img = row({100, 140, 20, 40, 100, 140});
  EXPECT_EQ(compensate_shadow(img, BinaryMask(6, 1, 0)), img);
  EXPECT_EQ(compensate_shadow(img, BinaryMask(6, 1, 1)), img);
}

TEST(Compensation, Errors) {
  const RgbRaster img = row({100, 140, 20, 40, 100, 140});
  EXPECT_EQ(kind_of([&] { compensate_shadow(img, middle_pair(), 0); }), ErrorKind::InvalidConfig);
  EXPECT_EQ(kind_of([&] { compensate_shadow(img, BinaryMask(5, 1, 0)); }), ErrorKind::DimensionMismatch);
}

TEST(Compensation, EightConnectedComponents) {
  BinaryMask m(4, 4, 0);
  m(0, 0) = m(1, 1) = 1;  // diagonal neighbours: one component
  m(3, 3) = 1;
  RgbRaster img(4, 4, Rgb{50, 50, 50});
  EXPECT_EQ(shadow_regions(img, m, 1).size(), 2u);
}
