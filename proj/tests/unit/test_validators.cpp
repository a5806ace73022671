#include <gtest/gtest.h>

#include <map>

#include "mutations.hpp"
#include "stresseval/validators.hpp"

using namespace stresseval;
using namespace stresseval::testing;

TEST(ValidatorCorpus, OriginalsPass) {
  for (const auto& c : validator_originals()) {
    std::string got;
    EXPECT_TRUE(case_ok(c, &got)) << c.name << " -> " << got;
  }
}

TEST(ValidatorCorpus, EveryMutationCaughtByItsRule) {
  const auto cases = validator_mutations();
  EXPECT_GE(cases.size(), 40u);
  for (const auto& c : cases) {
    std::string got;
    EXPECT_TRUE(case_ok(c, &got)) << c.name << " expected " << c.expected_rule << " got " << got;
  }
}

TEST(ValidatorCorpus, RequiredKindsPresent) {
  std::map<std::string, int> by_rule;
  for (const auto& c : validator_mutations()) ++by_rule[c.expected_rule];
  for (const char* r : {"k.anti_leak", "k.hop.clue_length", "k.hop.clue_substring",
                        "k.same.clue_empty", "k.hop.answer_differs", "src.text.passages",
                        "src.kg.triples", "src.table.rows", "src.table.cols", "src.table.ragged",
                        "r.text.sf_range", "r.table.cell_range", "r.text.pa_lines",
                        "r.table.pa_length", "policy.blocklisted", "policy.kg_placeholder",
                        "trace.rule2", "trace.rule5"})
    EXPECT_GT(by_rule[r], 0) << r;
}

TEST(Validators, Utf8Length) {
  EXPECT_EQ(validate::utf8_length("abc"), 3u);
  EXPECT_EQ(validate::utf8_length("Lipiäinen"), 9u);
  EXPECT_EQ(validate::utf8_length("1–1"), 3u);
}

TEST(Validators, PlaceholderShapes) {
  EXPECT_TRUE(validate::EntityPolicy::is_kg_placeholder("Country_A"));
  EXPECT_TRUE(validate::EntityPolicy::is_kg_placeholder("City_C3"));
  EXPECT_TRUE(validate::EntityPolicy::is_kg_placeholder("m.0abc123"));
  EXPECT_FALSE(validate::EntityPolicy::is_kg_placeholder("France"));
  EXPECT_FALSE(validate::EntityPolicy::is_kg_placeholder("Justin Bieber"));
}

TEST(Validators, BlocklistWordBoundaries) {
  validate::EntityPolicy p({"Oxford", "Paris"});
  EXPECT_EQ(p.find_blocklisted("She studied at Oxford."), "Oxford");
  EXPECT_FALSE(p.find_blocklisted("Oxfordshire-free Parisian text").has_value());
  EXPECT_FALSE(p.accepts("Paris", KnowledgeType::Text));
  EXPECT_TRUE(p.accepts("Harrowmere", KnowledgeType::Table));
  EXPECT_FALSE(p.accepts("", KnowledgeType::Text));
}

TEST(Validators, DiversityAndFreeze) {
  EXPECT_TRUE(validate::check_diversity("who wrote the red book", {"who wrote the blue book"}));
  EXPECT_FALSE(validate::check_diversity("name the painter of the mill", {"who wrote the blue book"}));
  auto s = KnowledgeSource::kg({{"A_1", "r.s", "B_2"}});
  EXPECT_FALSE(validate::check_freeze(s, s));
  EXPECT_TRUE(validate::check_freeze(s, KnowledgeSource::kg({{"A_1", "r.s", "B_3"}})));
}
