#include "stresseval/gating.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>

#include "stresseval/errors.hpp"
#include "stresseval/pool.hpp"
#include "stresseval/prompts.hpp"
#include "stresseval/text.hpp"

namespace stresseval::gating {
namespace {

[[noreturn]] void unparseable(const std::string& why) {
  throw ValidationError("UnparseableVerdict", why);
}

bool parse_decision(const Json& d) {
  if (d.is_boolean()) return d.get<bool>();
  if (d.is_string()) {
    const auto s = text::to_lower(text::trim(d.get<std::string>()));
    if (s == "true" || s == "yes") return true;
    if (s == "false" || s == "no") return false;
  }
  unparseable("decision must be a boolean");
}

Json review_payload(const SynthesizedInstance& x, bool with_k_context) {
  Json p{{"question", x.question},
         {"gold_answer", x.gold_answer},
         {"source", prompts::source_payload(x.source)},
         {"card", {{"bottleneck_step", x.card.bottleneck_step}, {"trigger", x.card.trigger}}}};
  if (with_k_context) {
    p["stress"] = std::string(to_string(x.stress));
    if (x.stress == Stress::K) {
      p["black_box"] = x.extras.value("black_box", Json());
      p["clue"] = x.extras.value("clue", Json(""));
    }
  }
  return p;
}

ReviewerVerdict review(std::string_view task, Json payload, llm::Gateway& gw,
                       const std::string& model) {
  auto raw = gw.complete(prompts::build_request(task, payload, model));
  try {
    return parse_verdict(raw);
  } catch (const ValidationError& e) {
    payload["previous_output"] = raw;
    payload["violations"] = Json::array({std::string("verdict.unparseable: ") + e.what()});
  }
  return parse_verdict(gw.complete(prompts::build_request(task, payload, model)));
}

}  // namespace

void to_json(Json& j, const ReviewerVerdict& v) {
  j = Json{{"decision", v.decision}, {"confidence", v.confidence}, {"rationale", v.rationale}};
}

void from_json(const Json& j, ReviewerVerdict& v) {
  v.decision = j.at("decision").get<bool>();
  v.confidence = j.at("confidence").get<double>();
  v.rationale = j.value("rationale", "");
}

ReviewerVerdict parse_verdict(std::string_view raw) {
  Json j;
  try {
    j = llm::extract_json(raw);
  } catch (const ValidationError& e) {
    unparseable(e.what());
  }
  if (!j.contains("decision")) unparseable("missing decision");
  ReviewerVerdict v;
  v.decision = parse_decision(j["decision"]);
  if (!j.contains("confidence") || !j["confidence"].is_number()) unparseable("missing confidence");
  v.confidence = j["confidence"].get<double>();
  if (!(v.confidence >= 0.0 && v.confidence <= 1.0)) unparseable("confidence outside [0, 1]");
  if (j.contains("rationale") && j["rationale"].is_string()) v.rationale = j["rationale"].get<std::string>();
  return v;
}

ReviewerVerdict review_answerability(const SynthesizedInstance& x, llm::Gateway& gw,
                                     const std::string& model) {
  return review("review_answerability", review_payload(x, true), gw, model);
}

ReviewerVerdict review_consistency(const SynthesizedInstance& x, llm::Gateway& gw,
                                   const std::string& model) {
  return review("review_consistency", review_payload(x, false), gw, model);
}

GateVerdict gate(const ReviewerVerdict& g, const ReviewerVerdict& u) {
  return GateVerdict(g.decision, u.decision, g.confidence, u.confidence);
}

void to_json(Json& j, const GatedRecord& r) {
  j = Json{{"instance", r.instance}, {"reason", r.reason}};
  j["answerability"] = r.answerability ? Json(*r.answerability) : Json();
  j["consistency"] = r.consistency ? Json(*r.consistency) : Json();
  j["verdict"] = r.verdict ? Json(*r.verdict) : Json();
}

GateOutcome gate_all(const std::vector<SynthesizedInstance>& candidates, llm::Gateway& gw,
                     const llm::RoleModels& models, int width, const GateOptions& opt) {
  GateOutcome out;
  if (opt.no_gating) {
    out.kept = candidates;
  } else {
    const auto& model = models.for_role("reviewer");
    auto records = parallel_map<GatedRecord>(candidates.size(), width, [&](std::size_t i) {
      GatedRecord r;
      r.instance = candidates[i];
      try {
        r.answerability = review_answerability(r.instance, gw, model);
        r.consistency = review_consistency(r.instance, gw, model);
        r.verdict = gate(*r.answerability, *r.consistency);
        if (!r.verdict->keep()) {
          r.reason = "gate: answerable=" + std::string(r.verdict->answerable() ? "1" : "0") +
                     " consistent=" + (r.verdict->consistent() ? "1" : "0");
        } else if (opt.min_confidence &&
                   std::min(r.verdict->g_confidence(), r.verdict->u_confidence()) <
                       *opt.min_confidence) {
          r.reason = "confidence below " + std::to_string(*opt.min_confidence);
        }
      } catch (const Error& e) {
        r.reason = e.what();
      }
      return r;
    });
    for (auto& r : records) {
      if (r.reason.empty()) {
        r.instance.extras["gate"] = {{"verdict", *r.verdict},
                                     {"answerability", *r.answerability},
                                     {"consistency", *r.consistency}};
        out.kept.push_back(std::move(r.instance));
      } else {
        spdlog::info("gate: dropped {}: {}", r.instance.id, r.reason);
        out.dropped.push_back(std::move(r));
      }
    }
  }
  std::stable_sort(out.kept.begin(), out.kept.end(),
                   [](const SynthesizedInstance& a, const SynthesizedInstance& b) {
                     return order_key(a) < order_key(b);
                   });
  return out;
}

}  // namespace stresseval::gating
