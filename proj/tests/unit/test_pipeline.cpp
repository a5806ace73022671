#include <gtest/gtest.h>

#include <spdlog/spdlog.h>

#include <filesystem>

#include "scripted.hpp"
#include "stresseval/errors.hpp"
#include "stresseval/jsonl.hpp"
#include "stresseval/pipeline.hpp"

using namespace stresseval;
namespace fs = std::filesystem;

namespace {

class Pipeline : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    spdlog::set_level(spdlog::level::warn);
    root_ = fs::temp_directory_path() / "stresseval_pipeline_test";
    fs::remove_all(root_);
    stresseval::testing::record_fixtures(root_ / "mock", root_ / "recording");
  }

  static pipeline::RunSummary run(const std::string& name, const config::Ablations& ab = {},
                                  int workers = 1) {
    llm::Gateway gw(std::make_shared<llm::MockProvider>(root_ / "mock"));
    return pipeline::run(stresseval::testing::five_seed_config(root_ / name, ab, workers), gw);
  }

  static std::vector<SynthesizedInstance> dataset(const std::string& name) {
    return jsonl::read<SynthesizedInstance>(root_ / name / pipeline::files::kDataset);
  }

  static inline fs::path root_;
};

}  // namespace

TEST_F(Pipeline, ByteIdenticalAcrossRepeatsAndWidths) {
  run("w1a");
  const auto ref = jsonl::read_file(root_ / "w1a" / pipeline::files::kDataset);
  ASSERT_FALSE(ref.empty());
  for (const auto& [name, w] : std::vector<std::pair<std::string, int>>{{"w1b", 1}, {"w4a", 4}, {"w4b", 4}}) {
    run(name, {}, w);
    EXPECT_EQ(jsonl::read_file(root_ / name / pipeline::files::kDataset), ref) << name;
    EXPECT_EQ(jsonl::read_file(root_ / name / pipeline::files::kStats),
              jsonl::read_file(root_ / "w1a" / pipeline::files::kStats));
  }
}

TEST_F(Pipeline, FullRunSummaryAndFiles) {
  auto s = run("full");
  EXPECT_EQ(s.seeds, 5u);
  EXPECT_EQ(s.failures, 5u);
  EXPECT_EQ(s.analyzed, 5u);
  EXPECT_EQ(s.k_candidates + s.r_candidates, s.kept + s.dropped);
  EXPECT_EQ(s.dropped, 2u);
  EXPECT_EQ(s.exit_code(), 0);
  for (const char* f : {pipeline::files::kSeeds, pipeline::files::kFailures, pipeline::files::kReports,
                        pipeline::files::kCandidatesK, pipeline::files::kCandidatesR,
                        pipeline::files::kCandidatesRejected, pipeline::files::kDataset,
                        pipeline::files::kRejected, pipeline::files::kStats,
                        pipeline::files::kRootCauseDist, pipeline::files::kSummary})
    EXPECT_TRUE(fs::exists(root_ / "full" / f)) << f;
  auto kept = dataset("full");
  EXPECT_EQ(kept.size(), s.kept);
  for (const auto& x : kept) {
    ASSERT_TRUE(x.extras.contains("gate")) << x.id;
    EXPECT_TRUE(x.extras["gate"]["verdict"]["keep"].get<bool>());
  }
  auto stats = Json::parse(jsonl::read_file(root_ / "full" / pipeline::files::kStats));
  EXPECT_EQ(stats["overall"]["n_instances"], s.kept);
}

TEST_F(Pipeline, NoGatingKeepsEveryValidatedCandidate) {
  auto s = run("no_gating", config::Ablations{.no_gating = true});
  EXPECT_EQ(s.kept, s.k_candidates + s.r_candidates);
  EXPECT_EQ(s.dropped, 0u);
}

TEST_F(Pipeline, AblationsChangeTheRightStage) {
  run("nea", config::Ablations{.no_error_analysis = true});
  auto reports = jsonl::read<AnalyzedCase>(root_ / "nea" / pipeline::files::kReports);
  ASSERT_FALSE(reports.empty());
  for (const auto& r : reports) EXPECT_TRUE(r.report.ablated);

  run("nbb", config::Ablations{.no_black_box = true});
  for (const auto& x : dataset("nbb"))
    if (x.stress == Stress::K && x.knowledge_type() == KnowledgeType::Text)
      EXPECT_TRUE(x.extras["black_box"].is_null()) << x.id;

  run("nsk", config::Ablations{.no_skeleton = true});
  for (const auto& x : dataset("nsk")) EXPECT_FALSE(x.extras.contains("skeleton")) << x.id;

  run("nvs", config::Ablations{.no_virtual_source = true});
  auto seeds = jsonl::read<SeedInstance>(root_ / "nvs" / pipeline::files::kSeeds);
  for (const auto& x : dataset("nvs")) {
    if (x.stress != Stress::R) continue;
    auto it = std::find_if(seeds.begin(), seeds.end(), [&](const auto& s) { return s.id == x.seed_id; });
    ASSERT_NE(it, seeds.end());
    EXPECT_EQ(x.source, it->source) << x.id;
  }
}

TEST_F(Pipeline, UnscriptedRequestIsAnError) {
  llm::Gateway gw(std::make_shared<llm::MockProvider>(root_ / "mock"));
  auto cfg = stresseval::testing::five_seed_config(root_ / "n5");
  cfg.fanout = 5;  // different request payloads than were recorded
  auto s = pipeline::run(cfg, gw);
  EXPECT_GT(s.rejected_candidates + s.synth_skipped, 0u);
}

TEST_F(Pipeline, RejectsBadConfig) {
  llm::Gateway gw(std::make_shared<llm::MockProvider>(root_ / "mock"));
  auto cfg = stresseval::testing::five_seed_config(root_ / "bad");
  cfg.fanout = 11;
  EXPECT_THROW(pipeline::run(cfg, gw), ValidationError);
  cfg.fanout = 7;
  cfg.seeds.clear();
  EXPECT_THROW(pipeline::run(cfg, gw), Error);
}

TEST(RunSummary, RejectionRateAndExitCode) {
  pipeline::RunSummary s;
  EXPECT_EQ(s.rejection_rate(), 0.0);
  s.k_candidates = 2;
  s.r_candidates = 2;
  s.rejected_candidates = 4;
  EXPECT_DOUBLE_EQ(s.rejection_rate(), 0.5);
  EXPECT_EQ(s.exit_code(), 0);
  s.rejected_candidates = 5;
  EXPECT_EQ(s.exit_code(), 2);
}
