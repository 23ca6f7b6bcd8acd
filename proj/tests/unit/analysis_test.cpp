#include <gtest/gtest.h>

#include <filesystem>

#include "core/analysis.hpp"
#include "core/error.hpp"
#include "core/synth.hpp"
#include "support/shapes.hpp"

namespace segcx::testing {
namespace {

namespace fs = std::filesystem;

class AnalysisTest : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() / ("segcx-analysis-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(root_);
  }
  void TearDown() override { fs::remove_all(root_); }

  fs::path root_;
};

TEST_F(AnalysisTest, SingleObjectSceneHasMissingSceneFactors) {
  const SceneRecord two = flat_scene(64, 64, {rect_mask(64, 64, 2, 2, 9, 9), disk(64, 64, 40, 40, 8)},
                                     {{250, 0, 0}, {0, 0, 250}});
  SceneRecord one = flat_scene(64, 64, {rect_mask(64, 64, 5, 5, 20, 20)}, {{0, 250, 0}});
  one.id = "single";
  const DatasetManifest m = write_dataset({two, one}, root_, Split::kTrain, {});
  AnalyzeConfig config;
  const FactorAnalysis a = analyze_dataset(m, config);
  const auto& summary = a.report["factors"]["inter_object_color_similarity"]["summary"];
  EXPECT_EQ(summary["count"], 1);
  EXPECT_EQ(summary["missing"], 1);
  const auto& scenes = a.report["scenes"];
  bool noted = false;
  for (const auto& s : scenes) {
    if (s["id"] != "single") continue;
    for (const auto& miss : s["missing"]) {
      noted = noted || (miss["factor"] == "inter_object_color_similarity" &&
                        miss["reason"].get<std::string>().rfind("TooFewObjects", 0) == 0);
    }
  }
  EXPECT_TRUE(noted);
  EXPECT_EQ(a.report["factors"]["object_color_gradient"]["summary"]["count"], 3);
}

TEST_F(AnalysisTest, SpriteCorpusGradientMassedAtZero) {
  const DatasetManifest m = generate_dataset(SynthKind::kDsprites, 12, 64, 64, 1, root_, 1);
  AnalyzeConfig config;
  config.factors = parse_factor_selection("object");
  const FactorAnalysis a = analyze_dataset(m, config);
  const auto& hist = a.report["factors"]["object_color_gradient"]["histogram"];
  const std::size_t total = a.report["factors"]["object_color_gradient"]["summary"]["count"];
  EXPECT_GT(total, 0u);
  EXPECT_EQ(hist["counts"][0], total);
  EXPECT_FALSE(a.report["factors"].contains("bg_color_gradient"));
}

TEST_F(AnalysisTest, ReportIndependentOfWorkerCount) {
  const DatasetManifest m = generate_dataset(SynthKind::kRealistic, 8, 64, 64, 2, root_, 2);
  AnalyzeConfig config;
  config.factors = parse_factor_selection("all");
  config.seed = 5;
  const FactorAnalysis one = analyze_dataset(m, config);
  config.jobs = 4;
  const FactorAnalysis four = analyze_dataset(m, config);
  EXPECT_EQ(one.report.dump(), four.report.dump());
  EXPECT_EQ(samples_to_csv(one.samples), samples_to_csv(four.samples));
  EXPECT_EQ(one.report["factors"].size(), factor_table().size());
}

TEST(Summaries, LinearPercentiles) {
  const Summary s = summarize({4.0, 1.0, 3.0, 2.0}, 2);
  EXPECT_EQ(s.count, 4u);
  EXPECT_EQ(s.missing, 2u);
  EXPECT_DOUBLE_EQ(*s.mean, 2.5);
  EXPECT_DOUBLE_EQ(*s.median, 2.5);
  EXPECT_DOUBLE_EQ(*s.p5, 1.15);
  EXPECT_DOUBLE_EQ(*s.p95, 3.85);
  EXPECT_FALSE(summarize({}, 1).mean);
}

TEST(Histograms, BoundedAndOverflow) {
  const Histogram b = make_histogram({0.0, 0.5, 1.0, 0.99}, 1.0, 4, false);
  EXPECT_EQ(b.counts, (std::vector<std::size_t>{1, 0, 1, 2}));
  EXPECT_EQ(b.edges.back(), 1.0);
  const Histogram u = make_histogram({0.0, 99.9, 100.0, 250.0}, 100.0, 2, true);
  EXPECT_EQ(u.counts, (std::vector<std::size_t>{1, 1}));
  EXPECT_EQ(u.overflow, 2u);
}

TEST(Selections, FactorsAndConfig) {
  const FactorSelection s = parse_factor_selection("scene,candidates");
  EXPECT_FALSE(s.object);
  EXPECT_TRUE(s.scene);
  EXPECT_TRUE(s.candidates);
  EXPECT_THROW(parse_factor_selection("shape"), Error);
  AnalyzeConfig c;
  c.bins = 0;
  EXPECT_THROW(c.validate(), Error);
}

TEST(Csv, MissingValuesAreNA) {
  std::vector<Sample> samples = {{"a", std::uint16_t{3}, 0, 1.5}, {"a", std::nullopt, 2, std::nullopt}};
  EXPECT_EQ(samples_to_csv(samples),
            "scene_id,object_id,factor,value\na,3,object_color_gradient,1.5\na,,inter_object_color_similarity,NA\n");
  EXPECT_EQ(format_double(0.1), "0.1");
}

}  // namespace
}  // namespace segcx::testing
