#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stresseval/domain.hpp"
#include "stresseval/gateway.hpp"
#include "stresseval/validators.hpp"

namespace stresseval::synth {

// Hard ceiling on accepted candidates per failure case, whatever n says.
inline constexpr int kMaxPerCase = 10;

struct SynthOptions {
  int n = 7;
  bool no_black_box = false;
  bool no_freeze_source = false;
  bool no_virtual_source = false;
  bool no_skeleton = false;
  int text_k_max_calls = 3;
  int kg_k_max_rounds = 2;
  const validate::EntityPolicy* policy = nullptr;  // required for the R branch
};

// A candidate dropped by a deterministic check. `stage` names the step that
// rejected it (canonicalize, generate, universe, render, skeleton, qa).
struct RejectedCandidate {
  std::string id;
  std::string seed_id;
  Stress stress = Stress::R;
  std::string stage;
  Json candidate = Json::object();
  std::vector<ValidatorEntry> validator_log;
  bool operator==(const RejectedCandidate&) const = default;
};
void to_json(Json& j, const RejectedCandidate& r);
void from_json(const Json& j, RejectedCandidate& r);

struct CaseResult {
  std::vector<SynthesizedInstance> accepted;
  std::vector<RejectedCandidate> rejected;
};

// ---- knowledge stress --------------------------------------------------------

struct BlackBox {
  std::string statement;
};

struct DeltaFact {
  std::string statement;
  std::string support_span;  // verbatim from the source; the HOP clue
};

// Throws ValidationError(MissingAnswerInStatement) when the statement does
// not contain `gold` verbatim, ValidationError(InterrogativeStatement) when it
// is still phrased as a question.
BlackBox check_black_box(std::string statement, const std::string& gold);
BlackBox canonicalize(const SeedInstance& seed, llm::Gateway& gw, const std::string& model);

// SAME share of a text-K request: round(0.4 n).
int same_quota(int n);

CaseResult synthesize_text_k(const AnalyzedCase& c, const std::optional<BlackBox>& box,
                             llm::Gateway& gw, const std::string& model, const SynthOptions& opt);
CaseResult synthesize_kg_k(const AnalyzedCase& c, llm::Gateway& gw, const std::string& model,
                           const SynthOptions& opt);

// ---- reasoning stress ----------------------------------------------------------

// One universe -> source -> skeleton -> QA chain per candidate index.
CaseResult synthesize_r(const AnalyzedCase& c, llm::Gateway& gw, const std::string& model,
                        const SynthOptions& opt);

// ---- batch -----------------------------------------------------------------------

struct SynthOutcome {
  std::vector<SynthesizedInstance> k_candidates;
  std::vector<SynthesizedInstance> r_candidates;
  std::vector<RejectedCandidate> rejected;
  std::vector<std::pair<std::string, std::string>> skipped;  // (seed_id, reason)
};

// Case-parallel over `cases`; outputs are in (seed_id, stress, counter) order.
SynthOutcome synthesize_all(const std::vector<AnalyzedCase>& cases, llm::Gateway& gw,
                            const llm::RoleModels& models, int width, const SynthOptions& opt);

}  // namespace stresseval::synth
