#include <gtest/gtest.h>

#include "stresseval/config.hpp"
#include "stresseval/errors.hpp"

using namespace stresseval;
using namespace stresseval::config;

namespace {

std::string kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return "";
}

}  // namespace

TEST(Config, IniOverwritesFields) {
  PipelineConfig c;
  apply_ini(R"(
[provider]
base_url = https://example.invalid/v1
model = backbone-x
timeout_seconds = 30

[models]
reviewer = judge-y

[retry]
max_attempts = 6
base_backoff_ms = 10

[pipeline]
fanout = 9
workers = 2
min_confidence = 0.7
seeds = hotpot:a.jsonl, wtq:b.jsonl
out_dir = runs/one

[ablation]
no_gating = true
no_skeleton = 1
)",
            c);
  EXPECT_EQ(c.base_url, "https://example.invalid/v1");
  EXPECT_EQ(c.models.for_role("reviewer"), "judge-y");
  EXPECT_EQ(c.models.for_role("generator"), "backbone-x");
  EXPECT_EQ(c.timeout_seconds, 30);
  EXPECT_EQ(c.max_attempts, 6);
  EXPECT_EQ(c.base_backoff_ms, 10);
  EXPECT_EQ(c.fanout, 9);
  EXPECT_EQ(c.workers, 2);
  EXPECT_DOUBLE_EQ(*c.min_confidence, 0.7);
  ASSERT_EQ(c.seeds.size(), 2u);
  EXPECT_EQ(c.seeds[0].format, ingest::SeedFormat::Hotpot);
  EXPECT_EQ(c.seeds[1].path, "b.jsonl");
  EXPECT_EQ(c.out_dir, "runs/one");
  EXPECT_TRUE(c.ablations.no_gating);
  EXPECT_TRUE(c.ablations.no_skeleton);
  EXPECT_FALSE(c.ablations.no_black_box);
  c.validate();
}

TEST(Config, BadIniRejected) {
  PipelineConfig c;
  for (const char* bad : {"[nope]\nx = 1\n", "[pipeline]\nfanout = many\n", "[provider]\ncolour = red\n",
                          "[ablation]\nno_gating = perhaps\n", "[pipeline\n"})
    EXPECT_EQ(kind_of([&] { apply_ini(bad, c); }), "InvalidConfig") << bad;
}

TEST(Config, FanoutBounds) {
  PipelineConfig c;
  for (int n : {5, 7, 10}) {
    c.fanout = n;
    EXPECT_NO_THROW(c.validate());
  }
  for (int n : {4, 11}) {
    c.fanout = n;
    EXPECT_EQ(kind_of([&] { c.validate(); }), "InvalidConfig");
  }
  c.allow_any_fanout = true;
  c.fanout = 20;
  EXPECT_NO_THROW(c.validate());
  c.workers = 0;
  EXPECT_EQ(kind_of([&] { c.validate(); }), "InvalidConfig");
}

TEST(Config, SeedSpecs) {
  auto s = parse_seed_spec("kgqa:data/x.jsonl", ingest::SeedFormat::Native);
  EXPECT_EQ(s.format, ingest::SeedFormat::Kgqa);
  EXPECT_EQ(s.path, "data/x.jsonl");
  auto bare = parse_seed_spec("C:/x.jsonl", ingest::SeedFormat::Wtq);
  EXPECT_EQ(bare.format, ingest::SeedFormat::Wtq);
  EXPECT_EQ(bare.path, "C:/x.jsonl");
}

TEST(Config, GatewayNeedsAProvider) {
  PipelineConfig c;
  EXPECT_EQ(kind_of([&] { make_gateway(c, std::nullopt); }), "NoProvider");
  c.base_url = "https://example.invalid/v1";
  EXPECT_EQ(kind_of([&] { make_gateway(c, std::string()); }), "NoProvider");
  EXPECT_NE(make_gateway(c, std::string("k")), nullptr);
  c.mock_fixtures = "/definitely/not/here";
  EXPECT_EQ(kind_of([&] { make_gateway(c, std::nullopt); }), "MissingInput");
}
