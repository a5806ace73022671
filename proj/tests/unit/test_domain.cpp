#include <gtest/gtest.h>

#include "stresseval/domain.hpp"
#include "stresseval/errors.hpp"

using namespace stresseval;

namespace {

std::string kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return "";
}

SynthesizedInstance sample_instance() {
  SynthesizedInstance x;
  x.id = make_instance_id("t2", Stress::R, 3);
  x.seed_id = "t2";
  x.stress = Stress::R;
  x.question = "Where was Orla Venmere born?";
  x.source = KnowledgeSource::text({Passage{"Orla Venmere", {"She was born in Harrowmere."}, true},
                                    Passage{"Harrowmere", {"A town.", "It has a mill."}, false}});
  x.gold_answer = "Harrowmere";
  x.root_cause = "distractor_anchoring";
  x.card = DifficultyCard{"attribute_lookup", "career place first"};
  x.extras = Json{{"supporting_facts", Json::array({Json::array({"Orla Venmere", 0})})}};
  x.validator_log = {ValidatorEntry{"r.text", true, ""}};
  return x;
}

}  // namespace

TEST(Domain, InstanceIdsAndOrdering) {
  EXPECT_EQ(make_instance_id("w1", Stress::R, 12), "w1/R/12");
  auto a = sample_instance();
  auto b = a;
  b.id = "t2/R/10";
  EXPECT_LT(order_key(a), order_key(b));  // 3 before 10, numerically
  auto k = a;
  k.stress = Stress::K;
  k.id = "t2/K/20";
  EXPECT_LT(order_key(k), order_key(a));
}

TEST(Domain, SourceVariantMatchesKind) {
  EXPECT_EQ(KnowledgeSource::kg({{"A", "r.x", "B"}}).kind(), KnowledgeType::KG);
  auto t = KnowledgeSource::table(Table{{"a", "b"}, {{"1", "2"}}});
  EXPECT_EQ(t.kind(), KnowledgeType::Table);
  EXPECT_THROW((void)t.passages(), std::bad_variant_access);
}

TEST(Domain, FlatText) {
  auto s = KnowledgeSource::text({Passage{"T", {"One.", "Two."}, true}, Passage{"U", {"Three."}, false}});
  EXPECT_EQ(s.flat_text(), "T\nOne. Two.\nU\nThree.");
  EXPECT_EQ(KnowledgeSource::kg({{"A", "r", "B"}, {"C", "s", "D"}}).flat_text(), "A r B | C s D");
  EXPECT_EQ(KnowledgeSource::table(Table{{"h1", "h2"}, {{"1", "2"}}}).flat_text(), "h1 | h2\n1 | 2");
}

TEST(Domain, SourceInvariants) {
  EXPECT_TRUE(check_source_invariants(
      KnowledgeSource::text({Passage{"T", {}, false}})));
  EXPECT_TRUE(check_source_invariants(
      KnowledgeSource::text({Passage{"T", {"a"}, false}, Passage{"T", {"b"}, false}})));
  EXPECT_TRUE(check_source_invariants(KnowledgeSource::kg({{"A", "", "B"}})));
  EXPECT_TRUE(check_source_invariants(KnowledgeSource::table(Table{{"a", "b"}, {{"1"}}})));
  EXPECT_FALSE(check_source_invariants(KnowledgeSource::table(Table{{"a", "b"}, {{"1", "2"}}})));
}

TEST(Domain, InstanceRoundTrip) {
  auto x = sample_instance();
  auto j = serialize(x);
  EXPECT_EQ(j["knowledge_type"], "Text");
  EXPECT_EQ(j["stress"], "R");
  EXPECT_EQ(deserialize<SynthesizedInstance>(Json::parse(j.dump())), x);
}

TEST(Domain, DeserializationValidates) {
  auto j = serialize(sample_instance());
  auto no_q = j;
  no_q.erase("question");
  EXPECT_EQ(kind_of([&] { deserialize<SynthesizedInstance>(no_q); }), "MissingField");
  auto bad_stress = j;
  bad_stress["stress"] = "Q";
  EXPECT_EQ(kind_of([&] { deserialize<SynthesizedInstance>(bad_stress); }), "InvalidRecord");
  auto table_k = j;
  table_k["stress"] = "K";
  table_k["source"] = Json{{"kind", "Table"}, {"table", {{"header", {"a"}}, {"rows", {{"1"}}}}}};
  EXPECT_EQ(kind_of([&] { deserialize<SynthesizedInstance>(table_k); }), "InvalidRecord");
  auto ragged = j;
  ragged["source"] = Json{{"kind", "Table"}, {"table", {{"header", {"a", "b"}}, {"rows", {{"1"}}}}}};
  EXPECT_EQ(kind_of([&] { deserialize<SynthesizedInstance>(ragged); }), "InvalidRecord");
  auto bad_triple = Json{{"kind", "KG"}, {"triples", Json::array({Json::array({"a", "b"})})}};
  EXPECT_EQ(kind_of([&] { deserialize<KnowledgeSource>(bad_triple); }), "InvalidRecord");
}

TEST(Domain, SeedAndFailureRoundTrip) {
  SeedInstance s{"k9", "Q?", KnowledgeSource::kg({{"A", "r.x", "B"}}), "B"};
  FailureCase f{s, "C", "Answer: C", "mock-backbone"};
  EXPECT_EQ(deserialize<FailureCase>(serialize(f)), f);
  auto j = serialize(s);
  j["knowledge_type"] = "Text";
  EXPECT_EQ(kind_of([&] { deserialize<SeedInstance>(j); }), "InvalidRecord");
}

TEST(Domain, GateVerdictKeepRule) {
  for (bool g : {false, true})
    for (bool u : {false, true}) {
      GateVerdict v(g, u, 0.5, 0.5);
      EXPECT_EQ(v.keep(), g && u);
      EXPECT_EQ(deserialize<GateVerdict>(serialize(v)), v);
    }
  EXPECT_THROW(GateVerdict(true, true, 1.5, 0.5), ValidationError);
  EXPECT_THROW(GateVerdict(true, true, 0.5, -0.1), ValidationError);
}

TEST(Domain, ReportInvariants) {
  SeedInstance s{"w1", "Q?", KnowledgeSource::table(Table{{"a"}, {{"1"}}}), "1"};
  auto stub = make_stub_report(s, Stress::R);
  EXPECT_FALSE(check_report_invariants(stub));
  auto bad = make_stub_report(s, Stress::K);
  EXPECT_TRUE(check_report_invariants(bad));
  EXPECT_EQ(deserialize<ErrorReport>(serialize(stub)), stub);
}

TEST(Domain, TraceOpVocabulary) {
  for (auto op : {TraceOp::BridgeEntity, TraceOp::CoreferenceResolution, TraceOp::ConstraintTracking,
                  TraceOp::Comparison, TraceOp::AttributeLookup, TraceOp::SetAggregation,
                  TraceOp::DistractorFiltering})
    EXPECT_EQ(parse_trace_op(to_string(op)), op);
  EXPECT_FALSE(parse_trace_op("guessing"));
}
