#pragma once

#include <optional>
#include <string>
#include <vector>

#include "stresseval/domain.hpp"
#include "stresseval/errors.hpp"

// Deterministic checks for analyzer output, independent of any LLM call.
// Every failed check is reported with a stable rule id so repair prompts
// and tests can refer to it.
namespace stresseval::analysis {

struct Violation {
  std::string rule_id;
  std::string detail;
  bool operator==(const Violation&) const = default;
};
using Violations = std::vector<Violation>;

std::string describe(const Violations& v);

class SchemaViolation : public ValidationError {
 public:
  explicit SchemaViolation(Violations v)
      : ValidationError("SchemaViolation", describe(v)), violations_(std::move(v)) {}
  const Violations& violations() const { return violations_; }

 private:
  Violations violations_;
};

struct AnalysisRoute {
  KnowledgeType knowledge_type = KnowledgeType::Text;
  Stress stress = Stress::R;
  std::string prompt_id;

  // Throws ValidationError(InvalidRoute) for (Table, K).
  static AnalysisRoute make(KnowledgeType t, Stress s);
};

// Raw analyzer fields may arrive as a string or as an array of strings.
std::optional<std::string> field_text(const Json& j, const std::string& key);

// Per-route key sets, in the order the prompts list them.
const std::vector<std::string>& required_keys(KnowledgeType t, Stress s);

// `input` is the failure's own source; KG-K checks missing triples against it.
Violations validate_report_json(const AnalysisRoute& route, const Json& j,
                                const KnowledgeSource& input);

// Trace rules (numbers follow the tracing prompt): trace.rule2 step count,
// trace.rule3 evidence shape, trace.rule4 evidence resolves, trace.rule5 two
// titles, trace.rule6 final result equals the model answer, trace.op vocabulary.
Violations validate_trace_json(const Json& j, const KnowledgeSource& source,
                               const std::string& model_output);
std::vector<TraceStep> parse_trace(const Json& j);  // call after validation

// Maps a validated analyzer object onto the typed ErrorReport. `trace` is
// required on the Text-R route.
ErrorReport build_report(const AnalysisRoute& route, const Json& j, const FailureCase& failure,
                         const std::optional<std::vector<TraceStep>>& trace,
                         const std::string& prompt_hash);

// Parses missing_knowledge (array of "E R V" strings or one "|"-joined string).
std::vector<Triple> parse_missing_knowledge(const Json& v);

}  // namespace stresseval::analysis
