#include "stresseval/synth.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>

#include "stresseval/errors.hpp"
#include "stresseval/pool.hpp"

namespace stresseval::synth {
namespace {

InstanceOrderKey rejected_key(const RejectedCandidate& r) {
  SynthesizedInstance probe;
  probe.id = r.id;
  probe.seed_id = r.seed_id;
  probe.stress = r.stress;
  return order_key(probe);
}

}  // namespace

void to_json(Json& j, const RejectedCandidate& r) {
  j = Json{{"id", r.id},
           {"seed_id", r.seed_id},
           {"stress", to_string(r.stress)},
           {"stage", r.stage},
           {"candidate", r.candidate},
           {"validator_log", r.validator_log}};
}

void from_json(const Json& j, RejectedCandidate& r) {
  r.id = j.at("id").get<std::string>();
  r.seed_id = j.at("seed_id").get<std::string>();
  r.stress = parse_stress(j.at("stress").get<std::string>());
  r.stage = j.at("stage").get<std::string>();
  r.candidate = j.value("candidate", Json::object());
  r.validator_log = j.value("validator_log", std::vector<ValidatorEntry>{});
}

SynthOutcome synthesize_all(const std::vector<AnalyzedCase>& cases, llm::Gateway& gw,
                            const llm::RoleModels& models, int width, const SynthOptions& opt) {
  struct Slot {
    CaseResult result;
    std::string error;
  };
  const auto& model = models.for_role("generator");
  const auto& can_model = models.for_role("canonicalizer");
  auto slots = parallel_map<Slot>(cases.size(), width, [&](std::size_t i) {
    Slot s;
    const auto& c = cases[i];
    try {
      if (c.report.stress == Stress::R) {
        s.result = synthesize_r(c, gw, model, opt);
      } else if (c.failure.seed.knowledge_type() == KnowledgeType::KG) {
        s.result = synthesize_kg_k(c, gw, model, opt);
      } else if (c.failure.seed.knowledge_type() == KnowledgeType::Text) {
        std::optional<BlackBox> box;
        if (!opt.no_black_box) {
          try {
            box = canonicalize(c.failure.seed, gw, can_model);
          } catch (const ValidationError& e) {
            RejectedCandidate r;
            r.id = make_instance_id(c.failure.seed.id, Stress::K, 0);
            r.seed_id = c.failure.seed.id;
            r.stress = Stress::K;
            r.stage = "canonicalize";
            r.validator_log.push_back({e.kind(), false, e.what()});
            s.result.rejected.push_back(std::move(r));
            return s;
          }
        }
        s.result = synthesize_text_k(c, box, gw, model, opt);
      } else {
        throw ValidationError("InvalidRoute", "no knowledge-stress synthesis for tables");
      }
    } catch (const Error& e) {
      s.error = e.what();
    }
    return s;
  });

  SynthOutcome out;
  for (std::size_t i = 0; i < cases.size(); ++i) {
    auto& s = slots[i];
    if (!s.error.empty()) {
      spdlog::warn("synth: skipping {}: {}", cases[i].failure.seed.id, s.error);
      out.skipped.emplace_back(cases[i].failure.seed.id, s.error);
      continue;
    }
    auto& bucket = cases[i].report.stress == Stress::K ? out.k_candidates : out.r_candidates;
    for (auto& x : s.result.accepted) bucket.push_back(std::move(x));
    for (auto& r : s.result.rejected) out.rejected.push_back(std::move(r));
  }
  auto by_key = [](const SynthesizedInstance& a, const SynthesizedInstance& b) {
    return order_key(a) < order_key(b);
  };
  std::stable_sort(out.k_candidates.begin(), out.k_candidates.end(), by_key);
  std::stable_sort(out.r_candidates.begin(), out.r_candidates.end(), by_key);
  std::stable_sort(out.rejected.begin(), out.rejected.end(),
                   [](const RejectedCandidate& a, const RejectedCandidate& b) {
                     return rejected_key(a) < rejected_key(b);
                   });
  return out;
}

}  // namespace stresseval::synth
