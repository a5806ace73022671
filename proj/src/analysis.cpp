#include "stresseval/analysis.hpp"

#include <spdlog/spdlog.h>

#include <optional>

#include "stresseval/pool.hpp"
#include "stresseval/prompts.hpp"
#include "stresseval/text.hpp"

namespace stresseval::analysis {
namespace {

Json parse_or_violation(const std::string& raw) {
  try {
    return llm::extract_json(raw);
  } catch (const ValidationError& e) {
    return Json();  // null; callers turn this into a violation
  }
}

Json violations_json(const Violations& v) {
  Json arr = Json::array();
  for (const auto& x : v) arr.push_back(x.rule_id + (x.detail.empty() ? "" : ": " + x.detail));
  return arr;
}

// Runs `task` and validates; on violations asks once more with the problems
// listed, then gives up.
template <class Validate>
Json call_with_repair(llm::Gateway& gw, const std::string& model, const std::string& task,
                      const Json& payload, Validate&& validate) {
  auto raw = gw.complete(prompts::build_request(task, payload, model));
  auto j = parse_or_violation(raw);
  Violations v = j.is_null() ? Violations{{"json.unparseable", ""}} : validate(j);
  if (v.empty()) return j;
  Json retry = payload;
  retry["previous_output"] = raw;
  retry["violations"] = violations_json(v);
  raw = gw.complete(prompts::build_request(task, retry, model));
  j = parse_or_violation(raw);
  v = j.is_null() ? Violations{{"json.unparseable", ""}} : validate(j);
  if (v.empty()) return j;
  throw SchemaViolation(std::move(v));
}

Json failure_payload(const FailureCase& c) {
  return Json{{"id", c.seed.id},
              {"question", c.seed.question},
              {"gold_answer", c.seed.gold_answer},
              {"model_answer", c.model_output},
              {"model_raw", c.model_raw}};
}

Json supporting_titles(const KnowledgeSource& s) {
  Json arr = Json::array();
  if (s.kind() != KnowledgeType::Text) return arr;
  for (const auto& p : s.passages())
    if (p.is_supporting) arr.push_back(p.title);
  return arr;
}

}  // namespace

Stress parse_triage(std::string_view raw) {
  auto bare = text::to_lower(text::trim(raw));
  while (!bare.empty() && (bare.back() == '.' || bare.back() == '"')) bare.pop_back();
  while (!bare.empty() && bare.front() == '"') bare.erase(bare.begin());
  if (bare == "k" || bare == "k-stress" || bare == "kstress") return Stress::K;
  if (bare == "r" || bare == "r-stress" || bare == "rstress") return Stress::R;
  try {
    auto j = llm::extract_json(raw);
    if (j.contains("stress") && j["stress"].is_string()) {
      auto s = text::to_lower(text::trim(j["stress"].get<std::string>()));
      if (s == "k") return Stress::K;
      if (s == "r") return Stress::R;
    }
  } catch (const ValidationError&) {
  }
  throw ValidationError("UnparseableOutput", "triage reply: " + std::string(raw.substr(0, 80)));
}

AnalysisRoute route_failure(const FailureCase& c, llm::Gateway& gw, const std::string& model) {
  const auto kind = c.seed.knowledge_type();
  if (kind == KnowledgeType::Table) return AnalysisRoute::make(kind, Stress::R);
  Json payload{{"question", c.seed.question},
               {"source", prompts::source_payload(c.seed.source)},
               {"gold_answer", c.seed.gold_answer},
               {"model_output", c.model_output}};
  auto raw = gw.complete(prompts::build_request("triage", payload, model));
  return AnalysisRoute::make(kind, parse_triage(raw));
}

std::vector<TraceStep> reconstruct_trace(const FailureCase& c, llm::Gateway& gw,
                                         const std::string& model) {
  if (c.seed.knowledge_type() != KnowledgeType::Text)
    throw ValidationError("InvalidRoute", "traces are only reconstructed for text sources");
  Json payload = failure_payload(c);
  payload["contexts"] = prompts::source_payload(c.seed.source);
  auto j = call_with_repair(gw, model, "text_r_trace", payload, [&](const Json& x) {
    return validate_trace_json(x, c.seed.source, c.model_output);
  });
  return parse_trace(j);
}

ErrorReport analyze(const FailureCase& c, const AnalysisRoute& route, llm::Gateway& gw,
                    const std::string& model) {
  if (route.knowledge_type != c.seed.knowledge_type())
    throw ValidationError("InvalidRoute", "route does not match the failure's knowledge type");
  std::optional<std::vector<TraceStep>> trace;
  Json payload = failure_payload(c);
  switch (route.knowledge_type) {
    case KnowledgeType::Text:
      payload["contexts"] = prompts::source_payload(c.seed.source);
      if (route.stress == Stress::R) {
        trace = reconstruct_trace(c, gw, model);
        payload["model_trace"] = *trace;
        payload["gold_supporting_facts"] = supporting_titles(c.seed.source);
      }
      break;
    case KnowledgeType::KG:
      payload["triples"] = prompts::source_payload(c.seed.source);
      payload["model_output"] = c.model_output;
      break;
    case KnowledgeType::Table:
      payload["table"] = prompts::source_payload(c.seed.source);
      break;
  }
  auto j = call_with_repair(gw, model, route.prompt_id, payload, [&](const Json& x) {
    return validate_report_json(route, x, c.seed.source);
  });
  return build_report(route, j, c, trace, prompts::hash(route.prompt_id));
}

AnalyzeOutcome analyze_all(const std::vector<FailureCase>& failures, llm::Gateway& gw,
                           const llm::RoleModels& models, int width, bool ablate) {
  struct Slot {
    std::optional<ErrorReport> report;
    std::string reason;
  };
  const auto& model = models.for_role("analyzer");
  auto slots = parallel_map<Slot>(failures.size(), width, [&](std::size_t i) {
    Slot s;
    const auto& c = failures[i];
    try {
      auto route = route_failure(c, gw, model);
      s.report = ablate ? make_stub_report(c.seed, route.stress) : analyze(c, route, gw, model);
    } catch (const Error& e) {
      s.reason = e.what();
    }
    return s;
  });
  AnalyzeOutcome out;
  for (std::size_t i = 0; i < failures.size(); ++i) {
    if (slots[i].report) {
      out.cases.push_back(AnalyzedCase{failures[i], std::move(*slots[i].report)});
    } else {
      spdlog::warn("analyze: skipping {}: {}", failures[i].seed.id, slots[i].reason);
      out.skipped.emplace_back(failures[i].seed.id, slots[i].reason);
    }
  }
  return out;
}

}  // namespace stresseval::analysis
