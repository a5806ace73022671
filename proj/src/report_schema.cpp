#include "stresseval/report_schema.hpp"

#include <set>

#include "stresseval/seed_ingest.hpp"
#include "stresseval/text.hpp"
#include "stresseval/vocab.hpp"

namespace stresseval::analysis {
namespace {

const std::vector<std::string> kTextRKeys = {"error_type", "abstract_error_name",
                                             "abstract_error_description",
                                             "abstract_error_template", "transfer_guidance"};
const std::vector<std::string> kTextKKeys = {"error_type", "bottleneck_step", "trigger"};
const std::vector<std::string> kKgKKeys = {"error_type", "root_cause", "error_details",
                                           "missing_knowledge"};
const std::vector<std::string> kKgRKeys = {"error_type", "root_cause", "error_details",
                                           "transfer_conditions"};
const std::vector<std::string> kTableRKeys = {
    "case_id",        "reasoning_family", "required_ops", "bottleneck_step", "trigger",
    "error_signature", "evidence_spec",   "ambiguity",    "transfer_guidance"};

template <std::size_t N>
std::optional<std::string_view> match_ci(const std::array<std::string_view, N>& vocab,
                                         std::string_view v) {
  const auto lv = text::to_lower(text::trim(v));
  for (auto s : vocab)
    if (text::to_lower(s) == lv) return s;
  return std::nullopt;
}

std::vector<std::string> split_ops(std::string_view s) {
  std::vector<std::string> out;
  for (auto& part : text::split(s, ',')) {
    auto t = text::trim(part);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

std::string first_sentence(std::string_view s) {
  auto t = text::trim(s);
  while (t.rfind("- ", 0) == 0) t = text::trim(std::string_view(t).substr(2));
  auto cut = std::min(t.find(". "), t.find('\n'));
  if (cut != std::string::npos) t = t.substr(0, cut + (t[cut] == '.' ? 1 : 0));
  return text::trim(t);
}

bool is_str_array(const Json& v) {
  if (!v.is_array()) return false;
  for (const auto& e : v)
    if (!e.is_string()) return false;
  return true;
}

}  // namespace

std::string describe(const Violations& v) {
  std::string out;
  for (const auto& x : v) {
    if (!out.empty()) out += "; ";
    out += x.rule_id;
    if (!x.detail.empty()) out += " (" + x.detail + ")";
  }
  return out;
}

AnalysisRoute AnalysisRoute::make(KnowledgeType t, Stress s) {
  if (t == KnowledgeType::Table && s == Stress::K)
    throw ValidationError("InvalidRoute", "tables have no knowledge-stress route");
  static const char* kIds[3][2] = {{"text_k_report", "text_r_report"},
                                   {"kg_k_report", "kg_r_report"},
                                   {"", "table_r_report"}};
  return AnalysisRoute{t, s, kIds[static_cast<int>(t)][s == Stress::K ? 0 : 1]};
}

std::optional<std::string> field_text(const Json& j, const std::string& key) {
  auto it = j.find(key);
  if (it == j.end()) return std::nullopt;
  if (it->is_string()) return it->get<std::string>();
  if (is_str_array(*it)) {
    std::vector<std::string> parts;
    for (const auto& e : *it) parts.push_back(e.get<std::string>());
    return text::join(parts, "\n");
  }
  return std::nullopt;
}

const std::vector<std::string>& required_keys(KnowledgeType t, Stress s) {
  switch (t) {
    case KnowledgeType::Text: return s == Stress::K ? kTextKKeys : kTextRKeys;
    case KnowledgeType::KG: return s == Stress::K ? kKgKKeys : kKgRKeys;
    case KnowledgeType::Table: break;
  }
  return kTableRKeys;
}

std::vector<Triple> parse_missing_knowledge(const Json& v) {
  std::vector<Triple> out;
  if (v.is_string()) {
    for (auto& t : ingest::parse_kg_block(v.get<std::string>()).triples()) out.push_back(t);
    return out;
  }
  if (!is_str_array(v)) throw ValidationError("MalformedTriple", "missing_knowledge must be strings");
  for (const auto& e : v) {
    auto s = text::trim(e.get<std::string>());
    // Some analyzers wrap each triple in quotes.
    if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
    out.push_back(ingest::parse_triple(s));
  }
  return out;
}

Violations validate_report_json(const AnalysisRoute& route, const Json& j,
                                const KnowledgeSource& input) {
  Violations v;
  if (!j.is_object()) return {{"schema.type:root", "report must be a JSON object"}};
  const auto& keys = required_keys(route.knowledge_type, route.stress);
  const bool kg = route.knowledge_type == KnowledgeType::KG;
  for (const auto& k : keys) {
    auto it = j.find(k);
    if (it == j.end()) {
      v.push_back({"schema.missing_key:" + k, ""});
      continue;
    }
    const bool ok_type = it->is_string() || (kg && is_str_array(*it));
    if (!ok_type) {
      v.push_back({"schema.type:" + k, "expected a plain string"});
      continue;
    }
    auto t = field_text(j, k);
    const bool empty = it->is_array() ? it->empty() : text::trim(*t).empty();
    if (empty) v.push_back({"schema.empty:" + k, ""});
  }
  for (const auto& [k, _] : j.items())
    if (std::find(keys.begin(), keys.end(), k) == keys.end())
      v.push_back({"schema.extra_key:" + k, ""});
  if (!v.empty()) return v;

  auto get = [&](const std::string& k) { return *field_text(j, k); };
  switch (route.knowledge_type) {
    case KnowledgeType::Text:
      try {
        text::canonicalize_root_cause(get("error_type"));
      } catch (const ValidationError&) {
        v.push_back({"schema.empty:error_type", "no usable label characters"});
      }
      break;
    case KnowledgeType::KG: {
      const auto type = get("error_type");
      const bool known = route.stress == Stress::K
                             ? match_ci(vocab::kKgKnowledgePatterns, type).has_value()
                             : match_ci(vocab::kKgReasoningPatterns, type).has_value();
      if (!known) v.push_back({"schema.enum:error_type", type});
      try {
        text::canonicalize_root_cause(get("root_cause"));
      } catch (const ValidationError&) {
        v.push_back({"schema.empty:root_cause", "no usable label characters"});
      }
      if (route.stress == Stress::K) {
        try {
          auto missing = parse_missing_knowledge(j.at("missing_knowledge"));
          for (const auto& t : missing) {
            for (const auto& have : input.triples())
              if (have == t) v.push_back({"kgk.missing_duplicates_input", t.render()});
          }
        } catch (const ValidationError& e) {
          v.push_back({"kgk.missing_unparseable", e.what()});
        }
      }
      break;
    }
    case KnowledgeType::Table: {
      if (!vocab::contains(vocab::kTableReasoningFamilies, get("reasoning_family")))
        v.push_back({"schema.enum:reasoning_family", get("reasoning_family")});
      if (!vocab::contains(vocab::kTableBottlenecks, get("bottleneck_step")))
        v.push_back({"schema.enum:bottleneck_step", get("bottleneck_step")});
      auto ops = split_ops(get("required_ops"));
      if (ops.empty()) v.push_back({"schema.required_ops", "no ops listed"});
      for (const auto& op : ops)
        if (!vocab::contains(vocab::kTableOps, op)) v.push_back({"schema.required_ops", op});
      const auto amb = get("ambiguity");
      if (amb != "false" && amb.rfind("true: ", 0) != 0) v.push_back({"schema.ambiguity", amb});
      const auto trig = get("trigger");
      std::size_t pos = 0;
      for (auto label : vocab::kTableTriggerSections) {
        pos = trig.find(label, pos);
        if (pos == std::string::npos) {
          v.push_back({"schema.trigger_sections", std::string(label)});
          break;
        }
        pos += label.size();
      }
      break;
    }
  }
  return v;
}

Violations validate_trace_json(const Json& j, const KnowledgeSource& source,
                               const std::string& model_output) {
  if (!j.is_object() || !j.contains("trace") || !j["trace"].is_array())
    return {{"trace.schema", "expected {\"trace\": [...]}"}};
  const Json& steps = j["trace"];
  Violations v;
  if (steps.size() < 2 || steps.size() > 4)
    v.push_back({"trace.rule2", std::to_string(steps.size()) + " steps"});
  std::set<std::string> titles;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const Json& s = steps[i];
    const std::string where = "step " + std::to_string(i + 1);
    if (!s.is_object() || !s.contains("result") || !s["result"].is_string()) {
      v.push_back({"trace.schema", where + " needs a string result"});
      continue;
    }
    if (!s.contains("op") || !s["op"].is_string() ||
        !parse_trace_op(s["op"].get<std::string>()))
      v.push_back({"trace.op", where});
    const Json ev = s.value("evidence", Json());
    if (!ev.is_array() || ev.size() != 2 || !ev[0].is_string() || !ev[1].is_number_integer()) {
      v.push_back({"trace.rule3", where + " evidence must be [title, sent_id]"});
      continue;
    }
    const auto title = ev[0].get<std::string>();
    const auto sent = ev[1].get<long long>();
    const Passage* p = source.kind() == KnowledgeType::Text ? source.find_passage(title) : nullptr;
    if (!p) {
      v.push_back({"trace.rule4", where + " unknown title '" + title + "'"});
      continue;
    }
    if (sent < 0 || sent >= static_cast<long long>(p->sentences.size())) {
      v.push_back({"trace.rule4", where + " sent_id " + std::to_string(sent) + " out of range"});
      continue;
    }
    titles.insert(title);
  }
  if (titles.size() < 2) v.push_back({"trace.rule5", "cites fewer than two titles"});
  if (!steps.empty() && steps.back().is_object() && steps.back().contains("result") &&
      steps.back()["result"].is_string() &&
      text::trim(steps.back()["result"].get<std::string>()) != text::trim(model_output))
    v.push_back({"trace.rule6", "final result differs from the model answer"});
  return v;
}

std::vector<TraceStep> parse_trace(const Json& j) {
  std::vector<TraceStep> out;
  int n = 0;
  for (const auto& s : j.at("trace")) {
    ++n;
    TraceStep t;
    t.step = s.contains("step") && s["step"].is_number_integer() ? s["step"].get<int>() : n;
    t.op = *parse_trace_op(s.at("op").get<std::string>());
    t.title = s.at("evidence")[0].get<std::string>();
    t.sent_id = s.at("evidence")[1].get<int>();
    t.result = s.at("result").get<std::string>();
    out.push_back(std::move(t));
  }
  return out;
}

ErrorReport build_report(const AnalysisRoute& route, const Json& j, const FailureCase& failure,
                         const std::optional<std::vector<TraceStep>>& trace,
                         const std::string& prompt_hash) {
  auto get = [&](const std::string& k) { return text::trim(*field_text(j, k)); };
  ErrorReport r;
  r.seed_id = failure.seed.id;
  r.knowledge_type = route.knowledge_type;
  r.stress = route.stress;
  r.prompt_hash = prompt_hash;
  switch (route.knowledge_type) {
    case KnowledgeType::Text:
      r.root_cause = text::canonicalize_root_cause(get("error_type"));
      if (route.stress == Stress::K) {
        r.card = DifficultyCard{get("bottleneck_step"), get("trigger")};
      } else {
        if (!trace) throw ValidationError("MissingField", "text-R report needs a trace");
        // The bottleneck is where the model anchored on a distractor, or
        // failing that the step that produced its answer.
        std::string op(to_string(trace->back().op));
        for (const auto& s : *trace)
          if (s.op == TraceOp::DistractorFiltering) {
            op = to_string(s.op);
            break;
          }
        r.card = DifficultyCard{op, get("abstract_error_template")};
        r.text_r = TextReasoningBlock{get("abstract_error_name"),
                                      get("abstract_error_description"),
                                      get("abstract_error_template"), get("transfer_guidance"),
                                      r.root_cause};
        r.trace = trace;
      }
      break;
    case KnowledgeType::KG:
      r.root_cause = text::canonicalize_root_cause(get("root_cause"));
      if (route.stress == Stress::K) {
        auto type = std::string(*match_ci(vocab::kKgKnowledgePatterns, get("error_type")));
        auto details = get("error_details");
        auto bottleneck = first_sentence(details);
        r.card = DifficultyCard{bottleneck.empty() ? type : bottleneck, type};
        r.kg_k = KgKnowledgeBlock{parse_missing_knowledge(j.at("missing_knowledge")), type,
                                  details};
      } else {
        auto type = std::string(*match_ci(vocab::kKgReasoningPatterns, get("error_type")));
        r.card = DifficultyCard{type, get("transfer_conditions")};
        r.kg_r = KgReasoningBlock{get("transfer_conditions"), type, get("error_details")};
      }
      break;
    case KnowledgeType::Table: {
      TableReasoningBlock t{get("case_id"),         get("reasoning_family"),
                            split_ops(get("required_ops")), get("bottleneck_step"),
                            get("error_signature"), get("evidence_spec"),
                            get("ambiguity"),       get("transfer_guidance")};
      r.root_cause = t.bottleneck_step;
      r.card = DifficultyCard{t.bottleneck_step, get("trigger")};
      r.table_r = std::move(t);
      break;
    }
  }
  if (auto err = check_report_invariants(r)) throw ValidationError("InvalidRecord", *err);
  return r;
}

}  // namespace stresseval::analysis
