#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stresseval/domain.hpp"
#include "stresseval/gateway.hpp"

namespace stresseval::gating {

struct ReviewerVerdict {
  bool decision = false;
  double confidence = 0.0;
  std::string rationale;
  bool operator==(const ReviewerVerdict&) const = default;
};
void to_json(Json& j, const ReviewerVerdict& v);
void from_json(const Json& j, ReviewerVerdict& v);

// {"decision": bool, "confidence": 0..1, "rationale": "..."}. "true"/"false"
// strings are accepted for decision; a missing rationale is empty.
// Throws ValidationError(UnparseableVerdict).
ReviewerVerdict parse_verdict(std::string_view raw);

// Each reviewer gets one retry on an unparseable reply.
ReviewerVerdict review_answerability(const SynthesizedInstance& x, llm::Gateway& gw,
                                     const std::string& model);
ReviewerVerdict review_consistency(const SynthesizedInstance& x, llm::Gateway& gw,
                                   const std::string& model);

GateVerdict gate(const ReviewerVerdict& g, const ReviewerVerdict& u);

struct GatedRecord {
  SynthesizedInstance instance;
  std::optional<ReviewerVerdict> answerability;
  std::optional<ReviewerVerdict> consistency;
  std::optional<GateVerdict> verdict;
  std::string reason;  // why it was dropped; empty when kept
};
void to_json(Json& j, const GatedRecord& r);

struct GateOptions {
  bool no_gating = false;
  // Optional stricter filter on top of keep; never relaxes it.
  std::optional<double> min_confidence;
};

struct GateOutcome {
  std::vector<SynthesizedInstance> kept;  // (seed_id, stress, counter) order
  std::vector<GatedRecord> dropped;
};

GateOutcome gate_all(const std::vector<SynthesizedInstance>& candidates, llm::Gateway& gw,
                     const llm::RoleModels& models, int width, const GateOptions& opt);

}  // namespace stresseval::gating
