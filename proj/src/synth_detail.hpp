#pragma once

// Helpers shared by the two synthesis branches; not part of the public API.

#include <optional>
#include <string>

#include "stresseval/gateway.hpp"
#include "stresseval/prompts.hpp"
#include "stresseval/synth.hpp"

namespace stresseval::synth::detail {

// Generator reply as JSON, or nullopt when no object can be extracted.
inline std::optional<Json> call_json(llm::Gateway& gw, const std::string& model,
                                     std::string_view task, const Json& payload,
                                     std::string* raw_out = nullptr) {
  auto raw = gw.complete(prompts::build_request(task, payload, model));
  if (raw_out) *raw_out = raw;
  try {
    return llm::extract_json(raw);
  } catch (const ValidationError&) {
    return std::nullopt;
  }
}

inline std::string str_or_empty(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) return "";
  const auto& v = j[key];
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  return v.dump();
}

inline Json card_payload(const DifficultyCard& c) {
  return Json{{"bottleneck_step", c.bottleneck_step}, {"trigger", c.trigger}};
}

// Counter shared by accepted and rejected candidates of one (case, stress).
class IdCounter {
 public:
  IdCounter(std::string seed_id, Stress stress) : seed_id_(std::move(seed_id)), stress_(stress) {}
  std::string next() { return make_instance_id(seed_id_, stress_, next_++); }

 private:
  std::string seed_id_;
  Stress stress_;
  int next_ = 0;
};

inline RejectedCandidate make_rejected(std::string id, const AnalyzedCase& c, Stress stress,
                                       std::string stage, Json candidate,
                                       const validate::Violations& v) {
  RejectedCandidate r;
  r.id = std::move(id);
  r.seed_id = c.failure.seed.id;
  r.stress = stress;
  r.stage = std::move(stage);
  r.candidate = std::move(candidate);
  validate::log_into(r.validator_log, "", v);
  return r;
}

inline SynthesizedInstance base_instance(std::string id, const AnalyzedCase& c, Stress stress) {
  SynthesizedInstance x;
  x.id = std::move(id);
  x.seed_id = c.failure.seed.id;
  x.stress = stress;
  x.root_cause = c.report.root_cause;
  x.card = c.report.card;
  return x;
}

inline int effective_n(const SynthOptions& opt) { return std::clamp(opt.n, 0, kMaxPerCase); }

}  // namespace stresseval::synth::detail
