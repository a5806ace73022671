#pragma once

#include <string>
#include <utility>
#include <vector>

#include "stresseval/domain.hpp"
#include "stresseval/gateway.hpp"
#include "stresseval/report_schema.hpp"

namespace stresseval::analysis {

// Accepts {"stress": "K"|"R"} or a bare K / R. Throws
// ValidationError(UnparseableOutput) otherwise.
Stress parse_triage(std::string_view raw);

// Tables always route to R; text and KG cases ask the triage prompt.
AnalysisRoute route_failure(const FailureCase& c, llm::Gateway& gw, const std::string& model);

// Text-R only. One repair call with the violations listed, then
// SchemaViolation.
std::vector<TraceStep> reconstruct_trace(const FailureCase& c, llm::Gateway& gw,
                                         const std::string& model);

ErrorReport analyze(const FailureCase& c, const AnalysisRoute& route, llm::Gateway& gw,
                    const std::string& model);

struct AnalyzeOutcome {
  std::vector<AnalyzedCase> cases;                          // input order
  std::vector<std::pair<std::string, std::string>> skipped;  // (seed_id, reason)
};

// `ablate` replaces analysis with stub reports (triage still decides K/R).
AnalyzeOutcome analyze_all(const std::vector<FailureCase>& failures, llm::Gateway& gw,
                           const llm::RoleModels& models, int width, bool ablate = false);

}  // namespace stresseval::analysis
