#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

namespace stresseval {

using Json = nlohmann::json;

// Every JSONL record carries this version under the "schema" key.
inline constexpr int kSchemaVersion = 1;

enum class KnowledgeType { Text, KG, Table };
enum class Stress { K, R };

std::string_view to_string(KnowledgeType t);
std::string_view to_string(Stress s);
KnowledgeType parse_knowledge_type(std::string_view s);
Stress parse_stress(std::string_view s);
// "Text-K", "KG-R", "Table-R", ...
std::string split_name(KnowledgeType t, Stress s);

struct Passage {
  std::string title;
  std::vector<std::string> sentences;
  bool is_supporting = false;

  // Sentences joined by single spaces.
  std::string paragraph() const;
  bool operator==(const Passage&) const = default;
};

struct Triple {
  std::string entity;
  std::string relation;
  std::string value;

  std::string render() const { return entity + " " + relation + " " + value; }
  bool operator==(const Triple&) const = default;
};

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  bool operator==(const Table&) const = default;
};

// The S of every (Q, S, A) tuple. The active alternative determines the
// knowledge type, so "exactly one variant populated" holds by construction.
class KnowledgeSource {
 public:
  using Passages = std::vector<Passage>;
  using Triples = std::vector<Triple>;

  KnowledgeSource() = default;
  static KnowledgeSource text(Passages passages);
  static KnowledgeSource kg(Triples triples);
  static KnowledgeSource table(Table table);

  KnowledgeType kind() const;
  const Passages& passages() const { return std::get<Passages>(data_); }
  const Triples& triples() const { return std::get<Triples>(data_); }
  const Table& table() const { return std::get<Table>(data_); }

  const Passage* find_passage(std::string_view title) const;

  // Flat text used for token statistics and substring grounding checks.
  std::string flat_text() const;

  bool operator==(const KnowledgeSource&) const = default;

 private:
  std::variant<Passages, Triples, Table> data_;
};

// Renders triples as "e r v | e r v".
std::string render_triples(const std::vector<Triple>& triples);

// Returns the first violated structural invariant, or nullopt.
std::optional<std::string> check_source_invariants(const KnowledgeSource& s);

struct SeedInstance {
  std::string id;
  std::string question;
  KnowledgeSource source;
  std::string gold_answer;

  KnowledgeType knowledge_type() const { return source.kind(); }
  bool operator==(const SeedInstance&) const = default;
};

struct FailureCase {
  SeedInstance seed;
  std::string model_output;
  std::string model_raw;
  std::string model_name;

  bool operator==(const FailureCase&) const = default;
};

struct DifficultyCard {
  std::string bottleneck_step;
  std::string trigger;

  bool operator==(const DifficultyCard&) const = default;
};

enum class TraceOp {
  BridgeEntity,
  CoreferenceResolution,
  ConstraintTracking,
  Comparison,
  AttributeLookup,
  SetAggregation,
  DistractorFiltering,
};
std::string_view to_string(TraceOp op);
std::optional<TraceOp> parse_trace_op(std::string_view s);

struct TraceStep {
  int step = 0;
  TraceOp op = TraceOp::AttributeLookup;
  std::string title;
  int sent_id = 0;
  std::string result;

  bool operator==(const TraceStep&) const = default;
};

struct KgKnowledgeBlock {
  std::vector<Triple> missing_knowledge;
  std::string error_type;
  std::string error_details;
  bool operator==(const KgKnowledgeBlock&) const = default;
};

struct KgReasoningBlock {
  std::string transfer_conditions;
  std::string error_type;
  std::string error_details;
  bool operator==(const KgReasoningBlock&) const = default;
};

struct TableReasoningBlock {
  std::string case_id;
  std::string reasoning_family;
  std::vector<std::string> required_ops;
  std::string bottleneck_step;
  std::string error_signature;
  std::string evidence_spec;
  std::string ambiguity;
  std::string transfer_guidance;
  bool operator==(const TableReasoningBlock&) const = default;
};

struct TextReasoningBlock {
  std::string abstract_error_name;
  std::string abstract_error_description;
  std::string abstract_error_template;
  std::string transfer_guidance;
  std::string error_type_canon;
  bool operator==(const TextReasoningBlock&) const = default;
};

struct ErrorReport {
  std::string seed_id;
  KnowledgeType knowledge_type = KnowledgeType::Text;
  Stress stress = Stress::R;
  std::string root_cause;
  DifficultyCard card;
  std::optional<KgKnowledgeBlock> kg_k;
  std::optional<KgReasoningBlock> kg_r;
  std::optional<TableReasoningBlock> table_r;
  std::optional<TextReasoningBlock> text_r;
  std::optional<std::vector<TraceStep>> trace;
  // sha256 of the prompt template that produced the report.
  std::string prompt_hash;
  // Stub written when error analysis is switched off: card and root cause
  // are "unspecified" and no typed block is attached.
  bool ablated = false;

  bool operator==(const ErrorReport&) const = default;
};

// Returns the first violated ErrorReport invariant, or nullopt.
std::optional<std::string> check_report_invariants(const ErrorReport& r);

// Report used in place of analysis when that stage is ablated.
ErrorReport make_stub_report(const SeedInstance& seed, Stress stress);

// A failure case together with its analysis; one line of reports.jsonl.
struct AnalyzedCase {
  FailureCase failure;
  ErrorReport report;
  bool operator==(const AnalyzedCase&) const = default;
};

struct ValidatorEntry {
  std::string rule_id;
  bool passed = true;
  std::string detail;
  bool operator==(const ValidatorEntry&) const = default;
};

struct SynthesizedInstance {
  std::string id;
  std::string seed_id;
  Stress stress = Stress::R;
  std::string question;
  KnowledgeSource source;
  std::string gold_answer;
  std::string root_cause;
  DifficultyCard card;
  // recipe, clue, supporting_facts, supporting_cells, pattern_application,
  // black_box, ... depending on the branch.
  Json extras = Json::object();
  std::vector<ValidatorEntry> validator_log;

  KnowledgeType knowledge_type() const { return source.kind(); }
  bool operator==(const SynthesizedInstance&) const = default;
};

// "<seed_id>/<K|R>/<counter>"
std::string make_instance_id(std::string_view seed_id, Stress stress, int counter);

// (seed_id, stress, counter) ordering key parsed back out of an instance id.
struct InstanceOrderKey {
  std::string seed_id;
  int stress = 0;
  int counter = 0;
  auto operator<=>(const InstanceOrderKey&) const = default;
};
InstanceOrderKey order_key(const SynthesizedInstance& x);

class GateVerdict {
 public:
  GateVerdict() = default;
  GateVerdict(bool answerable, bool consistent, double g_confidence, double u_confidence);

  bool answerable() const { return answerable_; }
  bool consistent() const { return consistent_; }
  double g_confidence() const { return g_confidence_; }
  double u_confidence() const { return u_confidence_; }
  bool keep() const { return answerable_ && consistent_; }

  bool operator==(const GateVerdict&) const = default;

 private:
  bool answerable_ = false;
  bool consistent_ = false;
  double g_confidence_ = 0.0;
  double u_confidence_ = 0.0;
};

// --- serialization ---------------------------------------------------------
// Deserialization validates invariants and throws ValidationError.

void to_json(Json& j, const Passage& p);
void from_json(const Json& j, Passage& p);
void to_json(Json& j, const Triple& t);
void from_json(const Json& j, Triple& t);
void to_json(Json& j, const Table& t);
void from_json(const Json& j, Table& t);
void to_json(Json& j, const KnowledgeSource& s);
void from_json(const Json& j, KnowledgeSource& s);
void to_json(Json& j, const SeedInstance& s);
void from_json(const Json& j, SeedInstance& s);
void to_json(Json& j, const FailureCase& f);
void from_json(const Json& j, FailureCase& f);
void to_json(Json& j, const DifficultyCard& c);
void from_json(const Json& j, DifficultyCard& c);
void to_json(Json& j, const TraceStep& s);
void from_json(const Json& j, TraceStep& s);
void to_json(Json& j, const ErrorReport& r);
void from_json(const Json& j, ErrorReport& r);
void to_json(Json& j, const AnalyzedCase& a);
void from_json(const Json& j, AnalyzedCase& a);
void to_json(Json& j, const ValidatorEntry& v);
void from_json(const Json& j, ValidatorEntry& v);
void to_json(Json& j, const SynthesizedInstance& x);
void from_json(const Json& j, SynthesizedInstance& x);
void to_json(Json& j, const GateVerdict& v);
void from_json(const Json& j, GateVerdict& v);

template <class T>
Json serialize(const T& value) {
  Json j = value;
  return j;
}

template <class T>
T deserialize(const Json& j) {
  return j.get<T>();
}

}  // namespace stresseval
