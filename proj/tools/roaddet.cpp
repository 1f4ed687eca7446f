#include <algorithm>
#include <filesystem>
#include <iostream>
#include <iterator>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "roaddet/roaddet.hpp"

namespace fs = std::filesystem;
using namespace roaddet;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kDataError = 2;

PipelineConfig load_config(const std::string& path) {
  if (path.empty()) return PipelineConfig{};
  const auto bytes = netpbm::read_file(path);
  return parse_config(std::string(bytes.begin(), bytes.end()));
}

void write_text(const fs::path& path, const std::string& text) {
  netpbm::write_file(path, netpbm::Bytes(text.begin(), text.end()));
}

std::string read_text(const fs::path& path) {
  const auto bytes = netpbm::read_file(path);
  return std::string(bytes.begin(), bytes.end());
}

void dump_intermediates(const fs::path& dir, const std::string& stem, const PipelineResult& r) {
  fs::create_directories(dir);
  for (const auto& [stage, img] : r.filtered.stages)
    netpbm::write_file(dir / (stem + "." + stage + ".ppm"), netpbm::save_ppm(img));
  if (r.filtered.shadow_mask)
    netpbm::write_file(dir / (stem + ".shadow.pgm"), netpbm::save_mask(*r.filtered.shadow_mask));
  if (r.filtered.highlight_mask)
    netpbm::write_file(dir / (stem + ".highlight.pgm"), netpbm::save_mask(*r.filtered.highlight_mask));
  netpbm::write_file(dir / (stem + ".raw-svm.pgm"), netpbm::save_mask(r.raw_mask));
  netpbm::write_file(dir / (stem + ".final.pgm"), netpbm::save_mask(r.road_mask));
}

// Regular files with the given extension, sorted by name.
std::vector<fs::path> list_dir(const fs::path& dir, const std::string& ext) {
  if (!fs::is_directory(dir)) throw Error(ErrorKind::Io, dir.string() + ": not a directory");
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ext) out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

struct DetectArgs {
  std::vector<std::string> images;
  std::string config, dump_dir, model, output;
  bool no_filters = false;
};

int run_detect(const DetectArgs& a) {
  PipelineConfig cfg = load_config(a.config);
  if (a.no_filters) cfg = cfg.without_filters();
  std::optional<ColorSvm> model;
  if (!a.model.empty()) {
    std::istringstream in(read_text(a.model));
    model = read_model<3>(in);
  }

  const bool many = a.images.size() > 1;
  if (many) fs::create_directories(a.output);
  for (const auto& path : a.images) {
    const RgbRaster img = [&] {
      try {
        return netpbm::load_ppm(netpbm::read_file(path));
      } catch (const Error& e) {
        throw with_context(e, path);
      }
    }();
    PipelineResult r;
    try {
      r = run_pipeline(img, cfg, model ? &*model : nullptr);
    } catch (const Error& e) {
      throw with_context(e, path);
    }
    const std::string stem = fs::path(path).stem().string();
    const fs::path out = many ? fs::path(a.output) / (stem + ".pgm") : fs::path(a.output);
    netpbm::write_file(out, netpbm::save_mask(r.road_mask));
    if (!a.dump_dir.empty())
      dump_intermediates(a.dump_dir, stem, r);
    else if (cfg.dump_intermediates)
      dump_intermediates(out.parent_path().empty() ? fs::path(".") : out.parent_path(), stem, r);
  }
  return kOk;
}

int run_train(const std::string& image, const std::string& config, const std::string& output) {
  const PipelineConfig cfg = load_config(config);
  const RgbRaster img = netpbm::load_ppm(netpbm::read_file(image));
  const FilterOutput filtered = apply_filters(img, cfg);
  std::ostringstream out;
  write_model(out, train_on_image(filtered.image, cfg));
  write_text(output, out.str());
  return kOk;
}

struct EvalArgs {
  std::string pred_dir, gt_dir, output, label, config;
  std::size_t group_size = 3;
};

int run_eval(const EvalArgs& a) {
  const auto preds = list_dir(a.pred_dir, ".pgm");
  const auto gts = list_dir(a.gt_dir, ".pgm");
  std::set<std::string> gt_names;
  for (const auto& g : gts) gt_names.insert(g.filename().string());
  std::set<std::string> pred_names;
  for (const auto& p : preds) pred_names.insert(p.filename().string());
  std::vector<std::string> unmatched;
  std::set_symmetric_difference(pred_names.begin(), pred_names.end(), gt_names.begin(), gt_names.end(),
                                std::back_inserter(unmatched));
  if (!unmatched.empty()) {
    const std::string& name = unmatched.front();
    const bool is_pred = pred_names.count(name) > 0;
    throw Error(ErrorKind::MismatchedImageLists,
                "unmatched file: " + (fs::path(is_pred ? a.pred_dir : a.gt_dir) / name).string() +
                    (is_pred ? " has no ground truth" : " has no prediction"));
  }
  if (preds.empty()) throw Error(ErrorKind::MismatchedImageLists, "no .pgm files in " + a.pred_dir);

  std::vector<EvalPair> pairs;
  for (const auto& p : preds) pairs.push_back({p, fs::path(a.gt_dir) / p.filename()});
  EvalReport report = batch_eval(pairs, a.group_size);
  report.label = a.label;
  if (!a.config.empty()) report.config_digest = config_digest(load_config(a.config));

  const std::string base = a.output.empty() ? (fs::path(a.pred_dir) / "eval").string() : a.output;
  write_text(base + ".report.txt", render_text(report));
  write_text(base + ".report.csv", render_csv(report));
  std::cout << render_text(report);
  return kOk;
}

int run_compare(const std::string& a, const std::string& b) {
  const EvalReport ra = parse_csv(read_text(a)), rb = parse_csv(read_text(b));
  std::cout << render_comparison(compare_runs(ra, rb));
  return kOk;
}

struct SynthArgs {
  std::string kind, output;
  std::uint64_t seed = 0;
  int count = 10;
  CorpusParams params;
};

int run_synth(const SynthArgs& a) {
  const std::map<std::string, Degradation> kinds{
      {"rain", Degradation::Rain}, {"shadow", Degradation::Shadow}, {"specular", Degradation::Specular}};
  const auto frames = make_corpus(kinds.at(a.kind), a.count, a.seed, a.params);
  const fs::path root(a.output);
  for (const char* sub : {"images", "clean", "streaks", "gt"}) fs::create_directories(root / sub);
  for (const auto& f : frames) {
    netpbm::write_file(root / "images" / (f.name + ".ppm"), netpbm::save_ppm(f.degraded));
    netpbm::write_file(root / "clean" / (f.name + ".ppm"), netpbm::save_ppm(f.clean));
    netpbm::write_file(root / "streaks" / (f.name + ".pgm"), netpbm::save_mask(f.affected));
    netpbm::write_file(root / "gt" / (f.name + ".pgm"), netpbm::save_mask(f.ground_truth));
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Road/non-road pixel classification with weather and lighting filters"};
  app.require_subcommand(1);

  DetectArgs detect;
  auto* cmd_detect = app.add_subcommand("detect", "Classify road pixels of one or more P6 images");
  cmd_detect->add_option("images", detect.images, "Input .ppm files")->required();
  cmd_detect->add_option("--config", detect.config, "Config file");
  cmd_detect->add_flag("--no-filters", detect.no_filters, "Disable all three filters");
  cmd_detect->add_option("--dump-masks", detect.dump_dir, "Directory for intermediate images and masks");
  cmd_detect->add_option("--model", detect.model, "Pre-trained model instead of per-image training");
  cmd_detect->add_option("-o,--output", detect.output, "Output mask (a directory for several inputs)")->required();

  std::string train_image, train_config, train_output;
  auto* cmd_train = app.add_subcommand("train", "Train a road colour model on one image");
  cmd_train->add_option("image", train_image, "Input .ppm")->required();
  cmd_train->add_option("--config", train_config, "Config file");
  cmd_train->add_option("-o,--output", train_output, "Model file")->required();

  EvalArgs eval;
  auto* cmd_eval = app.add_subcommand("eval", "Score predicted masks against ground truth");
  cmd_eval->add_option("--pred-dir", eval.pred_dir, "Predicted .pgm masks")->required();
  cmd_eval->add_option("--gt-dir", eval.gt_dir, "Ground-truth .pgm masks")->required();
  cmd_eval->add_option("--group-size", eval.group_size, "Frames per averaged group")->check(CLI::PositiveNumber);
  cmd_eval->add_option("--label", eval.label, "Run label stored in the report");
  cmd_eval->add_option("--config", eval.config, "Config whose digest is stored in the report");
  cmd_eval->add_option("-o,--output", eval.output, "Report base path (writes .report.txt and .report.csv)");

  std::string cmp_a, cmp_b;
  auto* cmd_compare = app.add_subcommand("compare", "Compare two .report.csv files (deltas are A - B)");
  cmd_compare->add_option("a", cmp_a, "Report A")->required();
  cmd_compare->add_option("b", cmp_b, "Report B")->required();

  SynthArgs synth;
  auto* cmd_synth = app.add_subcommand("synth", "Generate a synthetic degraded road corpus");
  cmd_synth->add_option("--kind", synth.kind, "Degradation")->required()->check(
      CLI::IsMember({"rain", "shadow", "specular"}));
  cmd_synth->add_option("--seed", synth.seed, "Corpus seed")->required();
  cmd_synth->add_option("-o,--output", synth.output, "Output directory")->required();
  cmd_synth->add_option("--count", synth.count, "Number of frames")->check(CLI::PositiveNumber);
  cmd_synth->add_option("--width", synth.params.scene.width, "Frame width")->check(CLI::PositiveNumber);
  cmd_synth->add_option("--height", synth.params.scene.height, "Frame height")->check(CLI::PositiveNumber);
  cmd_synth->add_option("--noise-sigma", synth.params.scene.noise_sigma, "Sensor noise sigma")
      ->check(CLI::NonNegativeNumber);
  cmd_synth->add_option("--alphas", synth.params.rain_alphas, "Rain blend weights, cycled over frames")
      ->check(CLI::Range(0.0, 1.0));
  cmd_synth->add_option("--streaks", synth.params.rain.count, "Streaks per frame")->check(CLI::NonNegativeNumber);
  cmd_synth->add_option("--streak-length", synth.params.rain.length, "Streak length")->check(CLI::PositiveNumber);
  cmd_synth->add_option("--streak-width", synth.params.rain.width, "Streak width")->check(CLI::PositiveNumber);
  cmd_synth->add_option("--streak-intensity", synth.params.rain.streak_intensity, "Streak brightness")
      ->check(CLI::Range(0.0, 255.0));
  cmd_synth->add_option("--angle", synth.params.rain.angle_deg, "Streak angle from vertical, degrees");
  cmd_synth->add_option("--shadow-bands", synth.params.shadow.bands, "Shadow bands per frame")
      ->check(CLI::NonNegativeNumber);
  cmd_synth->add_option("--glare-blobs", synth.params.specular.blobs, "Glare patches per frame")
      ->check(CLI::NonNegativeNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*cmd_detect) return run_detect(detect);
    if (*cmd_train) return run_train(train_image, train_config, train_output);
    if (*cmd_eval) return run_eval(eval);
    if (*cmd_compare) return run_compare(cmp_a, cmp_b);
    if (*cmd_synth) return run_synth(synth);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDataError;
  }
  return kUsage;
}
