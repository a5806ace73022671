#include "stresseval/prompts.hpp"
#include "stresseval/synth.hpp"
#include "synth_detail.hpp"

namespace stresseval::synth {
namespace {

using validate::Violations;

const char* qa_task(KnowledgeType t) {
  switch (t) {
    case KnowledgeType::Text: return "text_r_synth";
    case KnowledgeType::KG: return "kg_r_synth";
    case KnowledgeType::Table: return "table_r_synth";
  }
  return "";
}

Json source_field(const KnowledgeSource& s) {
  switch (s.kind()) {
    case KnowledgeType::Text: return Json{{"contexts", prompts::source_payload(s)}};
    case KnowledgeType::KG: return Json{{"triples", prompts::source_payload(s)}};
    case KnowledgeType::Table: return Json{{"table", prompts::source_payload(s)}};
  }
  return Json::object();
}

// The table prompt takes the analyzer's typed block as its "pattern seed".
Json pattern_seed(const ErrorReport& r) {
  if (!r.table_r) return Json{{"bottleneck_step", r.card.bottleneck_step}, {"trigger", r.card.trigger}};
  const auto& t = *r.table_r;
  return Json{{"case_id", t.case_id},
              {"reasoning_family", t.reasoning_family},
              {"required_ops", t.required_ops},
              {"bottleneck_step", t.bottleneck_step},
              {"trigger", r.card.trigger},
              {"transfer_guidance", t.transfer_guidance}};
}

// One candidate's chain. Returns the instance or fills `rejected`.
std::optional<SynthesizedInstance> run_chain(const AnalyzedCase& c, int index, std::string id,
                                             llm::Gateway& gw, const std::string& model,
                                             const SynthOptions& opt,
                                             std::optional<RejectedCandidate>& rejected) {
  const auto& seed = c.failure.seed;
  const auto kind = seed.knowledge_type();
  const std::string kind_name(to_string(kind));
  Json trail{{"candidate_index", index}};
  std::vector<ValidatorEntry> log;
  auto reject = [&](const char* stage, Violations v) {
    rejected = detail::make_rejected(id, c, Stress::R, stage, trail, v);
    return std::nullopt;
  };

  KnowledgeSource src = seed.source;
  const validate::EntityPolicy* policy = nullptr;
  if (!opt.no_virtual_source) {
    if (!opt.policy) throw Error("InvalidArgument", "R synthesis needs an entity policy");
    policy = opt.policy;
    Json up{{"knowledge_type", kind_name},
            {"report", serialize(c.report)},
            {"question", seed.question},
            {"source", prompts::source_payload(seed.source)},
            {"candidate_index", index}};
    auto uj = detail::call_json(gw, model, "universe", up);
    if (!uj) return reject("universe", {{"json.unparseable", ""}});
    validate::Universe u;
    try {
      u = validate::parse_universe(*uj);
    } catch (const ValidationError& e) {
      trail["universe"] = *uj;
      return reject("universe", {{"universe.schema", e.what()}});
    }
    trail["universe"] = u;
    auto uv = validate::check_universe(u, kind, *policy);
    if (!uv.empty()) return reject("universe", uv);
    validate::log_into(log, "r.universe", {});

    Json rp{{"knowledge_type", kind_name},
            {"universe", u},
            {"card", detail::card_payload(c.report.card)},
            {"source", prompts::source_payload(seed.source)}};
    auto rj = detail::call_json(gw, model, "render_source", rp);
    if (!rj) return reject("render", {{"json.unparseable", ""}});
    auto rendered = validate::parse_rendered_source(kind, *rj);
    trail["source"] = *rj;
    Violations sv = rendered.violations;
    if (rendered.source) {
      auto b = validate::source_bounds(*rendered.source);
      sv.insert(sv.end(), b.begin(), b.end());
      auto p = validate::source_policy(*rendered.source, *policy);
      sv.insert(sv.end(), p.begin(), p.end());
    }
    if (!sv.empty() || !rendered.source) return reject("render", sv);
    src = *rendered.source;
    validate::log_into(log, "r.source", {});
  }

  std::optional<validate::Skeleton> skel;
  if (!opt.no_skeleton) {
    Json sp{{"knowledge_type", kind_name},
            {"source", prompts::source_payload(src)},
            {"card", detail::card_payload(c.report.card)}};
    auto sj = detail::call_json(gw, model, "skeleton", sp);
    if (!sj) return reject("skeleton", {{"json.unparseable", ""}});
    trail["skeleton"] = *sj;
    try {
      skel = validate::parse_skeleton(*sj);
    } catch (const ValidationError& e) {
      return reject("skeleton", {{"skel.schema", e.what()}});
    }
    auto kv = validate::check_skeleton(*skel, src, c.report.card);
    if (!kv.empty()) return reject("skeleton", kv);
    validate::log_into(log, "r.skeleton", {});
  }

  Json qp = source_field(src);
  qp["report"] = serialize(c.report);
  qp["card"] = detail::card_payload(c.report.card);
  if (kind == KnowledgeType::Table) qp["pattern_seed"] = pattern_seed(c.report);
  if (skel) qp["skeleton"] = *skel;
  auto qj = detail::call_json(gw, model, qa_task(kind), qp);
  if (!qj) return reject("qa", {{"json.unparseable", ""}});
  trail["qa"] = *qj;
  const auto question = detail::str_or_empty(*qj, "question");
  const auto answer = detail::str_or_empty(*qj, "gold_answer");
  const auto pa = detail::str_or_empty(*qj, "pattern_application");
  Violations qv;
  SynthesizedInstance x = detail::base_instance(id, c, Stress::R);
  switch (kind) {
    case KnowledgeType::Text: {
      const Json sf = qj->value("supporting_facts", Json());
      qv = validate::check_text_r_instance(question, answer, sf, pa, src, policy);
      x.extras["supporting_facts"] = sf;
      x.extras["pattern_application"] = pa;
      break;
    }
    case KnowledgeType::Table: {
      const Json cells = qj->value("supporting_cells", Json());
      qv = validate::check_table_r_instance(question, answer, cells, pa, src, policy);
      x.extras["supporting_cells"] = cells;
      x.extras["pattern_application"] = pa;
      break;
    }
    case KnowledgeType::KG:
      qv = validate::check_kg_r_instance(question, answer, src);
      break;
  }
  if (!qv.empty()) return reject("qa", qv);
  validate::log_into(log, "r.instance", {});

  x.question = question;
  x.gold_answer = answer;
  x.source = std::move(src);
  x.extras["candidate_index"] = index;
  if (trail.contains("universe")) x.extras["universe"] = trail["universe"];
  if (skel) {
    x.extras["skeleton"] = *skel;
    x.extras["trap"] = skel->trap;
  }
  x.validator_log = std::move(log);
  return x;
}

}  // namespace

CaseResult synthesize_r(const AnalyzedCase& c, llm::Gateway& gw, const std::string& model,
                        const SynthOptions& opt) {
  CaseResult out;
  detail::IdCounter ids(c.failure.seed.id, Stress::R);
  const int n = detail::effective_n(opt);
  for (int i = 0; i < n; ++i) {
    std::optional<RejectedCandidate> rejected;
    auto x = run_chain(c, i, ids.next(), gw, model, opt, rejected);
    if (x) {
      out.accepted.push_back(std::move(*x));
    } else if (rejected) {
      out.rejected.push_back(std::move(*rejected));
    }
  }
  return out;
}

}  // namespace stresseval::synth
