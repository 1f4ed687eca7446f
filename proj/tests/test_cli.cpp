#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "roaddet/roaddet.hpp"

namespace fs = std::filesystem;
using namespace roaddet;

namespace {

struct Outcome {
  int code;
  std::string err;
};

Outcome cli(const std::string& args, const fs::path& dir) {
  const fs::path err = dir / "stderr.txt";
  const std::string cmd = std::string(ROADDET_CLI) + " " + args + " >" + (dir / "stdout.txt").string() +
                          " 2>" + err.string();
  const int status = std::system(cmd.c_str());
  std::ifstream in(err);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir = fs::temp_directory_path() /
          ("roaddet_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir);
    fs::create_directories(dir);
  }
  void TearDown() override { fs::remove_all(dir); }

  std::string synth(const std::string& kind, int count, const std::string& sub) {
    const fs::path out = dir / sub;
    const Outcome r = cli("synth --kind " + kind + " --seed 3 --count " + std::to_string(count) +
                          " --width 128 --height 96 -o " + out.string(),
                      dir);
    EXPECT_EQ(r.code, 0) << r.err;
    return out.string();
  }

  fs::path dir;
};

}  // namespace

TEST_F(Cli, SynthIsReproducible) {
  const fs::path a = synth("rain", 2, "a"), b = synth("rain", 2, "b");
  for (const char* f : {"images/rain_000.ppm", "images/rain_001.ppm", "gt/rain_001.pgm", "clean/rain_000.ppm"})
    EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
}

TEST_F(Cli, DetectWritesABinaryMask) {
  const fs::path corpus = synth("shadow", 1, "c");
  const fs::path mask = dir / "mask.pgm";
  const Outcome r = cli("detect " + (corpus / "images/shadow_000.ppm").string() + " -o " + mask.string(), dir);
  ASSERT_EQ(r.code, 0) << r.err;
  const auto bytes = netpbm::read_file(mask);
  ASSERT_GE(bytes.size(), 2u);
  EXPECT_EQ(bytes[0], 'P');
  EXPECT_EQ(bytes[1], '5');
  const BinaryMask m = netpbm::load_mask(bytes);
  EXPECT_EQ(m.width(), 128);
  EXPECT_EQ(m.height(), 96);
}

TEST_F(Cli, NoFiltersMatchesAConfigWithFiltersOff) {
  const fs::path corpus = synth("specular", 1, "c");
  const std::string img = (corpus / "images/specular_000.ppm").string();
  std::ofstream(dir / "off.cfg") << "pipeline.shadow = off\npipeline.rainsnow = off\npipeline.specular = off\n";
  ASSERT_EQ(cli("detect " + img + " --no-filters -o " + (dir / "a.pgm").string(), dir).code, 0);
  ASSERT_EQ(cli("detect " + img + " --config " + (dir / "off.cfg").string() + " -o " + (dir / "b.pgm").string(), dir).code, 0);
  EXPECT_EQ(slurp(dir / "a.pgm"), slurp(dir / "b.pgm"));
}

TEST_F(Cli, DumpMasksWritesValidNetpbm) {
  const fs::path corpus = synth("shadow", 1, "c");
  const fs::path dump = dir / "dump";
  const Outcome r = cli("detect " + (corpus / "images/shadow_000.ppm").string() + " --dump-masks " + dump.string() +
                        " -o " + (dir / "m.pgm").string(),
                    dir);
  ASSERT_EQ(r.code, 0) << r.err;
  int count = 0;
  for (const auto& e : fs::directory_iterator(dump)) {
    ++count;
    const auto bytes = netpbm::read_file(e.path());
    if (e.path().extension() == ".ppm") EXPECT_NO_THROW(netpbm::load_ppm(bytes)) << e.path();
    else EXPECT_NO_THROW(netpbm::load_mask(bytes)) << e.path();
  }
  // three stages, shadow and highlight masks, raw and final masks
  EXPECT_EQ(count, 7);
  EXPECT_TRUE(fs::exists(dump / "shadow_000.post-rain.ppm"));
}

TEST_F(Cli, EvalAndCompare) {
  const fs::path corpus = synth("rain", 4, "c");
  const fs::path gt = corpus / "gt";
  const Outcome self = cli("eval --pred-dir " + gt.string() + " --gt-dir " + gt.string() + " --label self -o " +
                           (dir / "self").string(),
                       dir);
  ASSERT_EQ(self.code, 0) << self.err;
  const EvalReport report = parse_csv(slurp(dir / "self.report.csv"));
  EXPECT_EQ(report.images.size(), 4u);
  EXPECT_EQ(report.groups.size(), 2u);
  EXPECT_EQ(*report.overall.fnr, 0.0);
  EXPECT_TRUE(fs::exists(dir / "self.report.txt"));

  const Outcome cmp = cli("compare " + (dir / "self.report.csv").string() + " " + (dir / "self.report.csv").string(), dir);
  ASSERT_EQ(cmp.code, 0) << cmp.err;
  EXPECT_NE(slurp(dir / "stdout.txt").find("verdict: FNR: tie"), std::string::npos);
}

TEST_F(Cli, EvalNamesTheUnmatchedFile) {
  const fs::path corpus = synth("rain", 2, "c");
  fs::create_directories(dir / "pred");
  fs::copy_file(corpus / "gt/rain_000.pgm", dir / "pred/rain_000.pgm");
  fs::copy_file(corpus / "gt/rain_000.pgm", dir / "pred/extra.pgm");
  const Outcome r = cli("eval --pred-dir " + (dir / "pred").string() + " --gt-dir " + (corpus / "gt").string(), dir);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("extra.pgm"), std::string::npos) << r.err;
}

TEST_F(Cli, ErrorsAndUsage) {
  EXPECT_EQ(cli("", dir).code, 1);
  EXPECT_EQ(cli("detect", dir).code, 1);
  EXPECT_EQ(cli("synth --kind fog --seed 1 -o x", dir).code, 1);
  std::ofstream(dir / "bad.ppm") << "P6\n2 2\n255\nxx";
  const Outcome r = cli("detect " + (dir / "bad.ppm").string() + " -o " + (dir / "o.pgm").string(), dir);
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("bad.ppm"), std::string::npos) << r.err;
  std::ofstream(dir / "u.cfg") << "svm.kernel = rbf\n";
  const Outcome c = cli("detect " + (dir / "bad.ppm").string() + " --config " + (dir / "u.cfg").string() + " -o x.pgm", dir);
  EXPECT_EQ(c.code, 2);
  EXPECT_NE(c.err.find("'svm.kernel'"), std::string::npos) << c.err;
}
