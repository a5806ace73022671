#include <cmath>

#include "stresseval/prompts.hpp"
#include "stresseval/scoring.hpp"
#include "stresseval/seed_ingest.hpp"
#include "stresseval/synth.hpp"
#include "stresseval/text.hpp"
#include "synth_detail.hpp"

namespace stresseval::synth {
namespace {

using validate::Violation;
using validate::Violations;

// Anti-leak against the seed answer, shared by both K recipes.
std::optional<Violation> leak(const std::string& question, const std::string& gold) {
  const auto norm_gold = scoring::normalize_answer(gold);
  if (text::contains_ci(question, gold) ||
      (!norm_gold.empty() &&
       scoring::normalize_answer(question).find(norm_gold) != std::string::npos))
    return Violation{"k.anti_leak", "original answer appears in the question"};
  return std::nullopt;
}

void freeze_log(std::vector<ValidatorEntry>& log, const SynthOptions& opt) {
  if (opt.no_freeze_source) {
    log.push_back({"k.freeze", true, "skipped: source rewrite allowed"});
  } else {
    log.push_back({"k.freeze", true, ""});
  }
}

}  // namespace

BlackBox check_black_box(std::string statement, const std::string& gold) {
  const auto t = text::trim(statement);
  if (t.empty() || !text::contains_ci(t, gold))
    throw ValidationError("MissingAnswerInStatement", "statement does not contain '" + gold + "'");
  if (t.back() == '?') throw ValidationError("InterrogativeStatement", t);
  return BlackBox{t};
}

BlackBox canonicalize(const SeedInstance& seed, llm::Gateway& gw, const std::string& model) {
  Json payload{{"question", seed.question}, {"answer", seed.gold_answer}};
  auto j = detail::call_json(gw, model, "canonicalize", payload);
  if (!j) throw ValidationError("MissingAnswerInStatement", "no statement returned");
  return check_black_box(detail::str_or_empty(*j, "statement"), seed.gold_answer);
}

int same_quota(int n) { return static_cast<int>(std::lround(0.4 * n)); }

CaseResult synthesize_text_k(const AnalyzedCase& c, const std::optional<BlackBox>& box,
                             llm::Gateway& gw, const std::string& model, const SynthOptions& opt) {
  const auto& seed = c.failure.seed;
  if (seed.knowledge_type() != KnowledgeType::Text)
    throw ValidationError("InvalidRoute", "text-K synthesis needs a text seed");
  CaseResult out;
  detail::IdCounter ids(seed.id, Stress::K);
  const int n = detail::effective_n(opt);
  int same_left = same_quota(n);
  int hop_left = n - same_left;
  std::vector<std::string> accepted_q;

  for (int call = 0; call < opt.text_k_max_calls && static_cast<int>(accepted_q.size()) < n;
       ++call) {
    Json payload{{"question", seed.question},
                 {"gold_answer", seed.gold_answer},
                 {"black_box", box ? Json(box->statement) : Json()},
                 {"contexts", prompts::source_payload(seed.source)},
                 {"card", detail::card_payload(c.report.card)},
                 {"n", n - static_cast<int>(accepted_q.size())},
                 {"remaining_quota", {{"SAME", same_left}, {"HOP", hop_left}}},
                 {"allow_source_rewrite", opt.no_freeze_source},
                 {"attempt", call + 1}};
    std::string raw;
    auto j = detail::call_json(gw, model, "text_k_synth", payload, &raw);
    if (!j || !j->contains("items") || !(*j)["items"].is_array()) {
      out.rejected.push_back(detail::make_rejected(ids.next(), c, Stress::K, "generate",
                                                   Json{{"raw", raw}},
                                                   {{"k.schema", "expected {\"items\": [...]}"}}));
      continue;
    }

    KnowledgeSource s_star = seed.source;
    if (opt.no_freeze_source && j->contains("contexts")) {
      auto rendered = validate::parse_rendered_source(KnowledgeType::Text, *j);
      if (rendered.source) s_star = *rendered.source;
    }

    for (const auto& it : (*j)["items"]) {
      const auto id = ids.next();
      validate::TextKItem item{detail::str_or_empty(it, "new_question"),
                               detail::str_or_empty(it, "recipe"),
                               detail::str_or_empty(it, "new_gold_answer"),
                               detail::str_or_empty(it, "clue")};
      Violations v = check_text_k_item(item, seed.gold_answer, s_star);
      const bool same = item.recipe == "SAME";
      if (static_cast<int>(accepted_q.size()) >= n) {
        v.push_back({"k.fanout", "request already filled"});
      } else if (v.empty() && (same ? same_left : hop_left) == 0) {
        v.push_back({"k.quota", same ? "SAME quota used up" : "HOP quota used up"});
      }
      if (auto d = validate::check_diversity(item.new_question, accepted_q)) v.push_back(*d);
      if (!opt.no_freeze_source)
        if (auto f = validate::check_freeze(seed.source, s_star)) v.push_back(*f);
      if (!v.empty()) {
        out.rejected.push_back(
            detail::make_rejected(id, c, Stress::K, "generate", it, v));
        continue;
      }
      (same ? same_left : hop_left) -= 1;
      accepted_q.push_back(item.new_question);

      auto x = detail::base_instance(id, c, Stress::K);
      x.question = item.new_question;
      x.gold_answer = item.new_gold_answer;
      x.source = s_star;
      x.extras["recipe"] = item.recipe;
      x.extras["clue"] = item.clue;
      x.extras["black_box"] = box ? Json(box->statement) : Json();
      if (!same) x.extras["delta_fact"] = {{"support_span", item.clue}};
      validate::log_into(x.validator_log, "k.text_item", {});
      validate::log_into(x.validator_log, "k.diversity", {});
      freeze_log(x.validator_log, opt);
      out.accepted.push_back(std::move(x));
    }
  }
  return out;
}

CaseResult synthesize_kg_k(const AnalyzedCase& c, llm::Gateway& gw, const std::string& model,
                           const SynthOptions& opt) {
  const auto& seed = c.failure.seed;
  if (seed.knowledge_type() != KnowledgeType::KG)
    throw ValidationError("InvalidRoute", "KG-K synthesis needs a KG seed");
  CaseResult out;
  detail::IdCounter ids(seed.id, Stress::K);
  const int n = detail::effective_n(opt);
  const std::vector<Triple> missing =
      c.report.kg_k ? c.report.kg_k->missing_knowledge : std::vector<Triple>{};
  Json missing_json = Json::array();
  for (const auto& t : missing) missing_json.push_back(t.render());
  std::vector<std::string> accepted_q;

  for (int round = 0; round < opt.kg_k_max_rounds && static_cast<int>(accepted_q.size()) < n;
       ++round) {
    Json payload{{"i", n - static_cast<int>(accepted_q.size())},
                 {"Input_KG", render_triples(seed.source.triples())},
                 {"missing_knowledge", missing_json},
                 {"card", detail::card_payload(c.report.card)},
                 {"avoid_questions", accepted_q},
                 {"allow_source_rewrite", opt.no_freeze_source},
                 {"attempt", round + 1}};
    std::string raw;
    auto j = detail::call_json(gw, model, "kg_k_synth", payload, &raw);
    const bool shaped = j && j->contains("New_example_question") &&
                        j->contains("New_example_gold_answer") &&
                        (*j)["New_example_question"].is_array() &&
                        (*j)["New_example_gold_answer"].is_array() &&
                        (*j)["New_example_question"].size() ==
                            (*j)["New_example_gold_answer"].size();
    if (!shaped) {
      out.rejected.push_back(detail::make_rejected(
          ids.next(), c, Stress::K, "generate", Json{{"raw", raw}},
          {{"kgk.schema", "expected aligned New_example_question/New_example_gold_answer arrays"}}));
      continue;
    }

    KnowledgeSource s_star = seed.source;
    if (opt.no_freeze_source && j->contains("Rewritten_KG") && (*j)["Rewritten_KG"].is_string()) {
      try {
        s_star = ingest::parse_kg_block((*j)["Rewritten_KG"].get<std::string>());
      } catch (const ValidationError&) {
        // unusable rewrite: keep the original graph
      }
    }

    const auto& qs = (*j)["New_example_question"];
    const auto& as = (*j)["New_example_gold_answer"];
    for (std::size_t i = 0; i < qs.size(); ++i) {
      const auto id = ids.next();
      const std::string q = qs[i].is_string() ? qs[i].get<std::string>() : qs[i].dump();
      const std::string a = as[i].is_string() ? as[i].get<std::string>() : as[i].dump();
      Violations v;
      if (auto l = leak(q, seed.gold_answer)) v.push_back(*l);
      auto item_v = validate::check_kg_k_item(q, a, missing);
      v.insert(v.end(), item_v.begin(), item_v.end());
      if (static_cast<int>(accepted_q.size()) >= n) v.push_back({"k.fanout", "request already filled"});
      if (auto d = validate::check_diversity(q, accepted_q)) v.push_back(*d);
      if (!opt.no_freeze_source)
        if (auto f = validate::check_freeze(seed.source, s_star)) v.push_back(*f);
      if (!v.empty()) {
        out.rejected.push_back(detail::make_rejected(
            id, c, Stress::K, "generate", Json{{"question", q}, {"gold_answer", a}}, v));
        continue;
      }
      accepted_q.push_back(q);
      auto x = detail::base_instance(id, c, Stress::K);
      x.question = q;
      x.gold_answer = a;
      x.source = s_star;
      x.extras["missing_knowledge"] = missing_json;
      validate::log_into(x.validator_log, "k.kg_item", {});
      validate::log_into(x.validator_log, "k.diversity", {});
      freeze_log(x.validator_log, opt);
      out.accepted.push_back(std::move(x));
    }
  }
  return out;
}

}  // namespace stresseval::synth
