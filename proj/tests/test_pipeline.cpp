#include <gtest/gtest.h>

#include "expect_error.hpp"
#include "gen.hpp"
#include "roaddet/roaddet.hpp"

using namespace roaddet;
using roaddet::testing::kind_of;

namespace {

RgbRaster small_frame(std::uint64_t seed) {
  SceneParams sp;
  sp.width = 128;
  sp.height = 96;
  return add_sensor_noise(generate_scene(sp, seed).image, sp.noise_sigma, seed + 1);
}

PipelineConfig small_config() {
  PipelineConfig c;
  c.seeds.samples_per_class = 150;
  return c;
}

}  // namespace

TEST(Config, DefaultsRoundTrip) {
  const PipelineConfig d;
  const std::string text = render_config(d);
  EXPECT_NE(text.find("pipeline.order = rainsnow,shadow,specular"), std::string::npos);
  EXPECT_NE(text.find("shadow.buffer_width = 5"), std::string::npos);
  EXPECT_NE(text.find("rainsnow.radius = 8"), std::string::npos);
  EXPECT_NE(text.find("svm.max_sweeps = 10000"), std::string::npos);
  EXPECT_EQ(render_config(parse_config(text)), text);
  EXPECT_EQ(render_config(parse_config("")), text);
}

TEST(Config, KeysAndValues) {
  const PipelineConfig c = parse_config("# comment\n  svm.c = 2.5\npipeline.shadow = off\n\nrainsnow.epsilon=0.01\n");
  EXPECT_EQ(c.svm.C, 2.5);
  EXPECT_FALSE(c.shadow);
  EXPECT_TRUE(c.rainsnow);
  EXPECT_EQ(c.guided.epsilon, 0.01);
}

TEST(Config, UnknownAndDuplicateKeys) {
  try {
    parse_config("svm.gamma = 1\n");
    ADD_FAILURE() << "unknown key accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InvalidConfig);
    EXPECT_NE(e.message().find("'svm.gamma'"), std::string::npos);
  }
  EXPECT_EQ(kind_of([] { parse_config("svm.c = 1\nsvm.c = 2\n"); }), ErrorKind::InvalidConfig);
  EXPECT_EQ(kind_of([] { parse_config("svm.c\n"); }), ErrorKind::InvalidConfig);
  EXPECT_EQ(kind_of([] { parse_config("svm.c = abc\n"); }), ErrorKind::InvalidConfig);
}

TEST(Config, Validation) {
  EXPECT_EQ(kind_of([] { parse_config("svm.c = 0\n"); }), ErrorKind::InvalidConfig);
  EXPECT_EQ(kind_of([] { parse_config("shadow.buffer_width = 0\n"); }), ErrorKind::InvalidConfig);
  EXPECT_EQ(kind_of([] { parse_config("pipeline.order = shadow,shadow,specular\n"); }), ErrorKind::InvalidConfig);
  EXPECT_EQ(kind_of([] { parse_config("specular.achromatic_band = 0.4\n"); }), ErrorKind::InvalidConfig);
  EXPECT_EQ(kind_of([] { parse_config("rainsnow.epsilon = -1\n"); }), ErrorKind::InvalidConfig);
}

TEST(Config, Digest) {
  const PipelineConfig d;
  EXPECT_EQ(config_digest(d).size(), 16u);
  EXPECT_EQ(config_digest(d), config_digest(parse_config(render_config(d))));
  EXPECT_NE(config_digest(d), config_digest(d.without_filters()));
}

TEST(Pipeline, StageNamesFollowTheOrder) {
  const RgbRaster img = small_frame(3);
  PipelineConfig c = small_config();
  std::vector<std::string> names;
  for (const auto& [name, stage] : apply_filters(img, c).stages) names.push_back(name);
  EXPECT_EQ(names, (std::vector<std::string>{"post-rain", "post-shadow", "post-specular"}));

  c.order = {FilterKind::Specular, FilterKind::Shadow, FilterKind::RainSnow};
  c.shadow = false;
  names.clear();
  for (const auto& [name, stage] : apply_filters(img, c).stages) names.push_back(name);
  EXPECT_EQ(names, (std::vector<std::string>{"post-specular", "post-rain"}));
}

TEST(Pipeline, NoFiltersPassesTheImageThrough) {
  const RgbRaster img = small_frame(4);
  const FilterOutput out = apply_filters(img, PipelineConfig{}.without_filters());
  EXPECT_EQ(out.image, img);
  EXPECT_TRUE(out.stages.empty());
}

TEST(Pipeline, DeterministicAndShaped) {
  const RgbRaster img = small_frame(5);
  const auto a = run_pipeline(img, small_config()), b = run_pipeline(img, small_config());
  EXPECT_EQ(a.road_mask, b.road_mask);
  EXPECT_EQ(a.road_mask.width(), img.width());
  EXPECT_EQ(a.road_mask, postprocess(a.raw_mask));
  EXPECT_LE(connected_components(a.road_mask).component_count, 1);
}

TEST(Pipeline, ConstantImageFinishes) {
  const RgbRaster flat(64, 48, Rgb{90, 90, 90});
  const auto r = run_pipeline(flat, small_config(), nullptr);
  const std::size_t n = count_set(r.road_mask);
  EXPECT_TRUE(n == 0 || n == flat.size()) << n;
}

TEST(Pipeline, PretrainedModelIsUsed) {
  const RgbRaster img = small_frame(6);
  const auto trained = run_pipeline(img, small_config());
  const auto reused = run_pipeline(small_frame(7), small_config(), &trained.model);
  EXPECT_EQ(reused.model.bias, trained.model.bias);
  EXPECT_EQ(reused.raw_mask, classify(trained.model, reused.filtered.image));
}

TEST(Pipeline, ErrorsNameTheStage) {
  try {
    run_pipeline(RgbRaster(8, 8, Rgb{1, 2, 3}), small_config());
    ADD_FAILURE() << "tiny image accepted";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::RegionTooSmall);
    EXPECT_NE(std::string(e.what()).find("seeds"), std::string::npos);
  }
  PipelineConfig bad;
  bad.svm.C = -1;
  EXPECT_EQ(kind_of([&] { run_pipeline(small_frame(8), bad); }), ErrorKind::InvalidConfig);
}
