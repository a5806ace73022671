#include <gtest/gtest.h>

#include "oracles.hpp"
#include "stresseval/csv.hpp"
#include "stresseval/errors.hpp"
#include "stresseval/stats.hpp"

using namespace stresseval;
using namespace stresseval::testing;

namespace {

void expect_split(const stats::SplitStats& got, const ExpectedSplit& want) {
  SCOPED_TRACE(want.split);
  EXPECT_EQ(got.split, want.split);
  EXPECT_EQ(got.n_instances, want.n_instances);
  EXPECT_EQ(got.n_seeds, want.n_seeds);
  EXPECT_EQ(got.n_failures, want.n_failures);
  EXPECT_EQ(got.n_root_causes, want.n_root_causes);
  EXPECT_TRUE(close_rel(got.avg_source_tokens, want.avg_source_tokens)) << got.avg_source_tokens;
  EXPECT_TRUE(close_rel(got.avg_question_tokens, want.avg_question_tokens))
      << got.avg_question_tokens;
  EXPECT_TRUE(close_rel(got.sim_q_qstar, want.sim)) << got.sim_q_qstar;
}

}  // namespace

TEST(Stats, Tokenize) {
  EXPECT_EQ(stats::tokenize("Where's the new mill?"),
            (std::vector<std::string>{"wheres", "the", "new", "mill"}));
  EXPECT_EQ(stats::tokenize("A_1 r.s B_2 | C_3"),
            (std::vector<std::string>{"a1", "rs", "b2", "c3"}));
  EXPECT_TRUE(stats::tokenize(" ,.; ").empty());
}

TEST(Stats, SimilarityEndpoints) {
  EXPECT_EQ(stats::question_similarity("who wrote the red book", "who wrote the red book"), 100.0);
  EXPECT_EQ(stats::question_similarity("alpha beta", "gamma delta"), 0.0);
  EXPECT_EQ(stats::question_similarity("", "gamma"), 0.0);
  EXPECT_TRUE(close_rel(stats::question_similarity("who leads zed", "who leads Zed now"),
                        600.0 / 7.0));
  // Multiset overlap: a repeated word counts only as often as both sides have it.
  EXPECT_TRUE(close_rel(stats::question_similarity("a a b", "a b b"), 100.0 * 2 * 2 / 6));
  // which/plan/per/month shared out of 6 + 6 tokens
  EXPECT_TRUE(close_rel(stats::question_similarity("which plan is cheaper per month",
                                                   "which plan costs less per month"),
                        200.0 / 3.0));
}

TEST(Stats, TwelveInstanceFixtureMatchesHandValues) {
  const auto f = stats_fixture();
  ASSERT_EQ(f.dataset.size(), 12u);
  const auto s = stats::compute_stats(f.dataset, f.seeds, f.failures);
  const auto& want = stats_expected();
  ASSERT_EQ(s.splits.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) expect_split(s.splits[i], want[i]);
  expect_split(s.overall, want[5]);
}

TEST(Stats, OrphanInstanceRejected) {
  auto f = stats_fixture();
  f.dataset[0].seed_id = "nobody";
  try {
    stats::compute_stats(f.dataset, f.seeds, f.failures);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.kind(), "OrphanInstance");
  }
}

TEST(Stats, AccuraciesMatchHandValues) {
  const auto f = stats_fixture();
  const auto t = stats::tabulate("m", f.dataset, f.predictions);
  const auto& want = stats_expected();
  const std::pair<KnowledgeType, Stress> cells[] = {{KnowledgeType::Text, Stress::K},
                                                    {KnowledgeType::Text, Stress::R},
                                                    {KnowledgeType::KG, Stress::K},
                                                    {KnowledgeType::KG, Stress::R},
                                                    {KnowledgeType::Table, Stress::R}};
  for (int i = 0; i < 5; ++i) {
    auto got = t.cell(cells[i].first, cells[i].second);
    ASSERT_TRUE(got.has_value()) << want[i].split;
    EXPECT_TRUE(close_rel(*got, want[i].accuracy)) << want[i].split << " " << *got;
  }
  EXPECT_FALSE(t.cell(KnowledgeType::Table, Stress::K).has_value());
  const auto avg = accuracy_expected();
  EXPECT_TRUE(close_rel(*t.type_average(KnowledgeType::Text), avg.text));
  EXPECT_TRUE(close_rel(*t.type_average(KnowledgeType::KG), avg.kg));
  EXPECT_TRUE(close_rel(*t.type_average(KnowledgeType::Table), avg.table));
  EXPECT_TRUE(close_rel(*t.overall(), avg.overall));
}

TEST(Stats, EvalCsvLeavesEmptyCellsBlank) {
  auto f = stats_fixture();
  std::vector<SynthesizedInstance> only_text(f.dataset.begin(), f.dataset.begin() + 5);
  const auto t = stats::tabulate("m", only_text, f.predictions);
  const auto rows = csv::parse(stats::eval_csv({t}));
  ASSERT_EQ(rows.size(), 2u);
  ASSERT_EQ(rows[1].size(), 10u);
  EXPECT_EQ(rows[1][0], "m");
  EXPECT_EQ(rows[1][1], "66.7");
  EXPECT_EQ(rows[1][2], "50.0");
  EXPECT_EQ(rows[1][3], "58.3");
  EXPECT_EQ(rows[1][4], "");
  EXPECT_EQ(rows[1][7], "");
  EXPECT_EQ(rows[1][9], "60.0");
}

TEST(Stats, HumanEvalSampleIsDeterministic) {
  const auto f = stats_fixture();
  auto a = stats::sample_for_human_eval(f.dataset, 5, 42);
  auto b = stats::sample_for_human_eval(f.dataset, 5, 42);
  ASSERT_EQ(a.size(), 5u);
  EXPECT_EQ(a, b);
  try {
    stats::sample_for_human_eval(f.dataset, 13, 1);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_EQ(e.kind(), "SampleTooLarge");
  }
  auto sheet = csv::parse(stats::human_eval_csv(a));
  ASSERT_EQ(sheet.size(), 6u);
  EXPECT_EQ(sheet[0].size(), 10u);
}

TEST(Stats, HumanEvalImport) {
  const auto f = stats_fixture();
  auto sheet = csv::parse(stats::human_eval_csv({f.dataset[0], f.dataset[1], f.dataset[10]}));
  sheet[1][7] = "yes"; sheet[1][8] = "1";  sheet[1][9] = "";
  sheet[2][7] = "No";  sheet[2][8] = "TRUE"; sheet[2][9] = "n";
  sheet[3][7] = "y";   sheet[3][8] = "0";  sheet[3][9] = "false";
  auto splits = stats::import_human_eval({csv::format(sheet)});
  const stats::HumanEvalSplit* tk = nullptr;
  for (const auto& s : splits)
    if (s.split == "Text-K") tk = &s;
  ASSERT_NE(tk, nullptr);
  EXPECT_EQ(tk->rows, 2u);
  EXPECT_EQ(tk->answerability.correct, 1u);
  EXPECT_EQ(tk->unambiguity.correct, 2u);
  EXPECT_EQ(tk->faithfulness.total, 1u);
  sheet[1][7] = "maybe";
  EXPECT_THROW(stats::import_human_eval({csv::format(sheet)}), ValidationError);
}

TEST(Csv, RoundTrip) {
  std::vector<csv::Row> rows = {{"a", "b,c", "say \"hi\""}, {"line\nbreak", "", "x"}};
  auto text = csv::format(rows);
  EXPECT_NE(text.find("\"b,c\""), std::string::npos);
  EXPECT_NE(text.find("\r\n"), std::string::npos);
  EXPECT_EQ(csv::parse(text), rows);
  EXPECT_EQ(csv::parse("a,b\nc,d\n"), (std::vector<csv::Row>{{"a", "b"}, {"c", "d"}}));
  EXPECT_THROW(csv::parse("\"open,x\n"), ValidationError);
  EXPECT_THROW(csv::parse("\"a\"b,c\n"), ValidationError);
}

TEST(Stats, GroupMapAndDistribution) {
  auto g = stats::load_group_map("rc_a,reading\nrc_b,reading\n");
  EXPECT_EQ(g.at("rc_a"), "reading");
  const auto f = stats_fixture();
  auto rows = csv::parse(stats::root_cause_dist_csv({}, f.dataset, g));
  ASSERT_GE(rows.size(), 2u);
  EXPECT_EQ(rows[0], (csv::Row{"set", "group", "root_cause", "count", "share"}));
}
