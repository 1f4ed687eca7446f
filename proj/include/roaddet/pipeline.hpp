#pragma once

// The four stages: filtering (configurable set and order), seed sampling
// and SVM training, per-pixel classification, and morphological cleanup
// (largest 8-connected road region, then hole filling).

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "roaddet/config.hpp"
#include "roaddet/morphology.hpp"
#include "roaddet/rainsnow.hpp"
#include "roaddet/segmentation.hpp"
#include "roaddet/shadow.hpp"
#include "roaddet/specular.hpp"

namespace roaddet {

struct FilterOutput {
  RgbRaster image;
  std::optional<BinaryMask> shadow_mask;
  std::optional<BinaryMask> highlight_mask;
  std::vector<std::pair<std::string, RgbRaster>> stages;  // post-shadow, post-rain, post-specular
};

struct PipelineResult {
  BinaryMask road_mask;
  BinaryMask raw_mask;  // SVM output before morphology
  FilterOutput filtered;
  ColorSvm model;
};

namespace detail {

template <typename F>
auto with_stage(const char* stage, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw with_context(e, stage);
  }
}

}  // namespace detail

inline FilterOutput apply_filters(const RgbRaster& img, const PipelineConfig& cfg) {
  FilterOutput out{img, std::nullopt, std::nullopt, {}};
  for (FilterKind f : cfg.order) {
    if (!cfg.enabled(f)) continue;
    switch (f) {
      case FilterKind::Shadow:
        detail::with_stage("shadow", [&] {
          out.shadow_mask = detect_shadow_mask(out.image, cfg.shadow_params);
          out.image = compensate_shadow(out.image, *out.shadow_mask, cfg.shadow_params.buffer_width);
          return 0;
        });
        out.stages.emplace_back("post-shadow", out.image);
        break;
      case FilterKind::RainSnow:
        out.image = detail::with_stage("rainsnow", [&] { return remove_rain_snow(out.image, cfg.guided); });
        out.stages.emplace_back("post-rain", out.image);
        break;
      case FilterKind::Specular:
        detail::with_stage("specular", [&] {
          out.highlight_mask = detect_highlight_mask(out.image, cfg.specular_params);
          out.image = remove_specular(out.image, *out.highlight_mask, cfg.specular_params);
          return 0;
        });
        out.stages.emplace_back("post-specular", out.image);
        break;
    }
  }
  return out;
}

inline BinaryMask postprocess(const BinaryMask& raw) {
  return fill_holes(largest_component(connected_components(raw, Connectivity::Eight)));
}

inline ColorSvm train_on_image(const RgbRaster& filtered, const PipelineConfig& cfg) {
  SeedLayout layout = cfg.seeds;
  layout.rng_seed = cfg.rng_seed;
  const auto seeds = detail::with_stage("seeds", [&] { return sample_seeds(filtered, layout); });
  return detail::with_stage("svm", [&] { return train_svm_full(seeds, cfg.svm).model; });
}

// With `model` set, that model classifies every frame; otherwise a model is
// trained on seeds drawn from the (filtered) frame itself.
inline PipelineResult run_pipeline(const RgbRaster& img, const PipelineConfig& cfg,
                                   const ColorSvm* model = nullptr) {
  detail::with_stage("config", [&] { validate(cfg); return 0; });
  PipelineResult result;
  result.filtered = apply_filters(img, cfg);
  result.model = model ? *model : train_on_image(result.filtered.image, cfg);
  result.raw_mask = classify(result.model, result.filtered.image);
  result.road_mask = postprocess(result.raw_mask);
  return result;
}

}  // namespace roaddet
