#include "stresseval/domain.hpp"

#include <set>

#include "stresseval/errors.hpp"
#include "stresseval/text.hpp"
#include "stresseval/vocab.hpp"

namespace stresseval {
namespace {

[[noreturn]] void invalid(const std::string& what) { throw ValidationError("InvalidRecord", what); }

const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) invalid(std::string("expected object while reading '") + key + "'");
  auto it = j.find(key);
  if (it == j.end()) throw ValidationError("MissingField", key);
  return *it;
}

std::string str_field(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_string()) invalid(std::string("field '") + key + "' must be a string");
  return v.get<std::string>();
}

template <class T>
std::optional<T> opt_field(const Json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  return it->get<T>();
}

constexpr std::array<std::string_view, 7> kTraceOpNames = {
    "bridge_entity", "coreference_resolution", "constraint_tracking", "comparison",
    "attribute_lookup", "set_aggregation", "distractor_filtering",
};

}  // namespace

std::string_view to_string(KnowledgeType t) {
  switch (t) {
    case KnowledgeType::Text: return "Text";
    case KnowledgeType::KG: return "KG";
    case KnowledgeType::Table: return "Table";
  }
  return "?";
}

std::string_view to_string(Stress s) { return s == Stress::K ? "K" : "R"; }

KnowledgeType parse_knowledge_type(std::string_view s) {
  auto l = text::to_lower(s);
  if (l == "text") return KnowledgeType::Text;
  if (l == "kg") return KnowledgeType::KG;
  if (l == "table") return KnowledgeType::Table;
  invalid("unknown knowledge type '" + std::string(s) + "'");
}

Stress parse_stress(std::string_view s) {
  auto l = text::to_lower(s);
  if (l == "k" || l == "kstress" || l == "k_stress") return Stress::K;
  if (l == "r" || l == "rstress" || l == "r_stress") return Stress::R;
  invalid("unknown stress '" + std::string(s) + "'");
}

std::string split_name(KnowledgeType t, Stress s) {
  return std::string(to_string(t)) + "-" + std::string(to_string(s));
}

std::string_view to_string(TraceOp op) { return kTraceOpNames[static_cast<std::size_t>(op)]; }

std::optional<TraceOp> parse_trace_op(std::string_view s) {
  for (std::size_t i = 0; i < kTraceOpNames.size(); ++i)
    if (kTraceOpNames[i] == s) return static_cast<TraceOp>(i);
  return std::nullopt;
}

std::string Passage::paragraph() const { return text::join(sentences, " "); }

KnowledgeSource KnowledgeSource::text(Passages passages) {
  KnowledgeSource s;
  s.data_ = std::move(passages);
  return s;
}

KnowledgeSource KnowledgeSource::kg(Triples triples) {
  KnowledgeSource s;
  s.data_ = std::move(triples);
  return s;
}

KnowledgeSource KnowledgeSource::table(Table table) {
  KnowledgeSource s;
  s.data_ = std::move(table);
  return s;
}

KnowledgeType KnowledgeSource::kind() const {
  switch (data_.index()) {
    case 0: return KnowledgeType::Text;
    case 1: return KnowledgeType::KG;
    default: return KnowledgeType::Table;
  }
}

const Passage* KnowledgeSource::find_passage(std::string_view title) const {
  if (kind() != KnowledgeType::Text) return nullptr;
  for (const auto& p : passages())
    if (p.title == title) return &p;
  return nullptr;
}

std::string render_triples(const std::vector<Triple>& triples) {
  std::string out;
  for (std::size_t i = 0; i < triples.size(); ++i) {
    if (i) out += " | ";
    out += triples[i].render();
  }
  return out;
}

std::string KnowledgeSource::flat_text() const {
  switch (kind()) {
    case KnowledgeType::Text: {
      std::vector<std::string> parts;
      for (const auto& p : passages()) {
        parts.push_back(p.title);
        parts.push_back(p.paragraph());
      }
      return text::join(parts, "\n");
    }
    case KnowledgeType::KG: return render_triples(triples());
    case KnowledgeType::Table: {
      std::vector<std::string> parts{text::join(table().header, " | ")};
      for (const auto& row : table().rows) parts.push_back(text::join(row, " | "));
      return text::join(parts, "\n");
    }
  }
  return {};
}

std::optional<std::string> check_source_invariants(const KnowledgeSource& s) {
  switch (s.kind()) {
    case KnowledgeType::Text: {
      std::set<std::string> titles;
      for (const auto& p : s.passages()) {
        if (p.sentences.empty()) return "passage '" + p.title + "' has no sentences";
        if (!titles.insert(p.title).second) return "duplicate passage title '" + p.title + "'";
      }
      return std::nullopt;
    }
    case KnowledgeType::KG:
      for (const auto& t : s.triples())
        if (t.entity.empty() || t.relation.empty() || t.value.empty())
          return "triple with an empty part: '" + t.render() + "'";
      return std::nullopt;
    case KnowledgeType::Table:
      for (std::size_t i = 0; i < s.table().rows.size(); ++i)
        if (s.table().rows[i].size() != s.table().header.size())
          return "row " + std::to_string(i) + " length differs from header";
      return std::nullopt;
  }
  return std::nullopt;
}

std::string make_instance_id(std::string_view seed_id, Stress stress, int counter) {
  return std::string(seed_id) + "/" + std::string(to_string(stress)) + "/" +
         std::to_string(counter);
}

InstanceOrderKey order_key(const SynthesizedInstance& x) {
  InstanceOrderKey k{x.seed_id, x.stress == Stress::K ? 0 : 1, 0};
  auto slash = x.id.rfind('/');
  if (slash != std::string::npos) {
    try {
      k.counter = std::stoi(x.id.substr(slash + 1));
    } catch (const std::exception&) {
      k.counter = 0;
    }
  }
  return k;
}

GateVerdict::GateVerdict(bool answerable, bool consistent, double g_confidence,
                         double u_confidence)
    : answerable_(answerable),
      consistent_(consistent),
      g_confidence_(g_confidence),
      u_confidence_(u_confidence) {
  if (!(g_confidence >= 0.0 && g_confidence <= 1.0) ||
      !(u_confidence >= 0.0 && u_confidence <= 1.0))
    invalid("gate confidences must lie in [0, 1]");
}

std::optional<std::string> check_report_invariants(const ErrorReport& r) {
  if (r.root_cause.empty()) return "root_cause is empty";
  if (r.card.bottleneck_step.empty() || r.card.trigger.empty()) return "difficulty card field empty";
  if (r.knowledge_type == KnowledgeType::Table && r.stress == Stress::K)
    return "(Table, K) is not a valid route";
  if (r.ablated) {
    if (r.kg_k || r.kg_r || r.table_r || r.text_r || r.trace)
      return "stub report must not carry analysis payloads";
    return std::nullopt;
  }
  const bool want_kg_k = r.knowledge_type == KnowledgeType::KG && r.stress == Stress::K;
  const bool want_kg_r = r.knowledge_type == KnowledgeType::KG && r.stress == Stress::R;
  const bool want_table_r = r.knowledge_type == KnowledgeType::Table;
  const bool want_text_r = r.knowledge_type == KnowledgeType::Text && r.stress == Stress::R;
  if (r.kg_k.has_value() != want_kg_k || r.kg_r.has_value() != want_kg_r ||
      r.table_r.has_value() != want_table_r || r.text_r.has_value() != want_text_r)
    return "typed payload does not match " + split_name(r.knowledge_type, r.stress);
  if (r.table_r) {
    const auto& t = *r.table_r;
    if (!vocab::contains(vocab::kTableReasoningFamilies, t.reasoning_family))
      return "reasoning_family outside vocabulary";
    if (!vocab::contains(vocab::kTableBottlenecks, t.bottleneck_step))
      return "bottleneck_step outside vocabulary";
    if (t.required_ops.empty()) return "required_ops empty";
    for (const auto& op : t.required_ops)
      if (!vocab::contains(vocab::kTableOps, op)) return "required op '" + op + "' outside vocabulary";
    if (t.ambiguity != "false" && t.ambiguity.rfind("true: ", 0) != 0)
      return "ambiguity must be 'false' or start with 'true: '";
    std::size_t pos = 0;
    for (auto label : vocab::kTableTriggerSections) {
      pos = r.card.trigger.find(label, pos);
      if (pos == std::string::npos) return "trigger missing section '" + std::string(label) + "'";
      pos += label.size();
    }
  }
  if (r.trace) {
    if (r.trace->size() < 2 || r.trace->size() > 4) return "trace must have 2-4 steps";
    std::set<std::string> titles;
    for (const auto& s : *r.trace) titles.insert(s.title);
    if (titles.size() < 2) return "trace must cite at least two titles";
  }
  return std::nullopt;
}

ErrorReport make_stub_report(const SeedInstance& seed, Stress stress) {
  ErrorReport r;
  r.seed_id = seed.id;
  r.knowledge_type = seed.knowledge_type();
  r.stress = stress;
  r.root_cause = "unspecified";
  r.card = DifficultyCard{"unspecified", "unspecified"};
  r.ablated = true;
  return r;
}

// --- JSON ------------------------------------------------------------------

void to_json(Json& j, const Passage& p) {
  j = Json{{"title", p.title}, {"sentences", p.sentences}, {"is_supporting", p.is_supporting}};
}

void from_json(const Json& j, Passage& p) {
  p.title = str_field(j, "title");
  p.sentences = field(j, "sentences").get<std::vector<std::string>>();
  p.is_supporting = j.value("is_supporting", false);
}

void to_json(Json& j, const Triple& t) { j = Json::array({t.entity, t.relation, t.value}); }

void from_json(const Json& j, Triple& t) {
  if (!j.is_array() || j.size() != 3) invalid("triple must be a 3-element array");
  t = Triple{j[0].get<std::string>(), j[1].get<std::string>(), j[2].get<std::string>()};
}

void to_json(Json& j, const Table& t) { j = Json{{"header", t.header}, {"rows", t.rows}}; }

void from_json(const Json& j, Table& t) {
  t.header = field(j, "header").get<std::vector<std::string>>();
  t.rows = field(j, "rows").get<std::vector<std::vector<std::string>>>();
}

void to_json(Json& j, const KnowledgeSource& s) {
  j = Json{{"kind", to_string(s.kind())}};
  switch (s.kind()) {
    case KnowledgeType::Text: j["passages"] = s.passages(); break;
    case KnowledgeType::KG: j["triples"] = s.triples(); break;
    case KnowledgeType::Table: j["table"] = s.table(); break;
  }
}

void from_json(const Json& j, KnowledgeSource& s) {
  switch (parse_knowledge_type(str_field(j, "kind"))) {
    case KnowledgeType::Text:
      s = KnowledgeSource::text(field(j, "passages").get<std::vector<Passage>>());
      break;
    case KnowledgeType::KG:
      s = KnowledgeSource::kg(field(j, "triples").get<std::vector<Triple>>());
      break;
    case KnowledgeType::Table:
      s = KnowledgeSource::table(field(j, "table").get<Table>());
      break;
  }
  if (auto err = check_source_invariants(s)) invalid(*err);
}

void to_json(Json& j, const SeedInstance& s) {
  j = Json{{"id", s.id},
           {"question", s.question},
           {"source", s.source},
           {"gold_answer", s.gold_answer},
           {"knowledge_type", to_string(s.knowledge_type())}};
}

void from_json(const Json& j, SeedInstance& s) {
  s.id = str_field(j, "id");
  s.question = str_field(j, "question");
  s.source = field(j, "source").get<KnowledgeSource>();
  s.gold_answer = str_field(j, "gold_answer");
  if (s.question.empty() || s.gold_answer.empty()) invalid("seed question/answer empty");
  if (j.contains("knowledge_type") &&
      parse_knowledge_type(j["knowledge_type"].get<std::string>()) != s.source.kind())
    invalid("knowledge_type does not match source kind");
}

void to_json(Json& j, const FailureCase& f) {
  j = Json{{"seed", f.seed},
           {"model_output", f.model_output},
           {"model_raw", f.model_raw},
           {"model_name", f.model_name}};
}

void from_json(const Json& j, FailureCase& f) {
  f.seed = field(j, "seed").get<SeedInstance>();
  f.model_output = str_field(j, "model_output");
  f.model_raw = j.value("model_raw", std::string{});
  f.model_name = j.value("model_name", std::string{});
}

void to_json(Json& j, const DifficultyCard& c) {
  j = Json{{"bottleneck_step", c.bottleneck_step}, {"trigger", c.trigger}};
}

void from_json(const Json& j, DifficultyCard& c) {
  c.bottleneck_step = str_field(j, "bottleneck_step");
  c.trigger = str_field(j, "trigger");
}

void to_json(Json& j, const TraceStep& s) {
  j = Json{{"step", s.step},
           {"op", to_string(s.op)},
           {"evidence", Json::array({s.title, s.sent_id})},
           {"result", s.result}};
}

void from_json(const Json& j, TraceStep& s) {
  s.step = field(j, "step").get<int>();
  auto op = parse_trace_op(str_field(j, "op"));
  if (!op) invalid("unknown trace op");
  s.op = *op;
  const Json& ev = field(j, "evidence");
  if (!ev.is_array() || ev.size() != 2) invalid("evidence must be [title, sent_id]");
  s.title = ev[0].get<std::string>();
  s.sent_id = ev[1].get<int>();
  s.result = str_field(j, "result");
}

void to_json(Json& j, const ErrorReport& r) {
  j = Json{{"seed_id", r.seed_id},
           {"knowledge_type", to_string(r.knowledge_type)},
           {"stress", to_string(r.stress)},
           {"root_cause", r.root_cause},
           {"card", r.card},
           {"prompt_hash", r.prompt_hash}};
  if (r.kg_k)
    j["kg_k"] = Json{{"missing_knowledge", r.kg_k->missing_knowledge},
                     {"error_type", r.kg_k->error_type},
                     {"error_details", r.kg_k->error_details}};
  if (r.kg_r)
    j["kg_r"] = Json{{"transfer_conditions", r.kg_r->transfer_conditions},
                     {"error_type", r.kg_r->error_type},
                     {"error_details", r.kg_r->error_details}};
  if (r.table_r) {
    const auto& t = *r.table_r;
    j["table_r"] = Json{{"case_id", t.case_id},
                        {"reasoning_family", t.reasoning_family},
                        {"required_ops", t.required_ops},
                        {"bottleneck_step", t.bottleneck_step},
                        {"error_signature", t.error_signature},
                        {"evidence_spec", t.evidence_spec},
                        {"ambiguity", t.ambiguity},
                        {"transfer_guidance", t.transfer_guidance}};
  }
  if (r.text_r) {
    const auto& t = *r.text_r;
    j["text_r"] = Json{{"abstract_error_name", t.abstract_error_name},
                       {"abstract_error_description", t.abstract_error_description},
                       {"abstract_error_template", t.abstract_error_template},
                       {"transfer_guidance", t.transfer_guidance},
                       {"error_type_canon", t.error_type_canon}};
  }
  if (r.trace) j["trace"] = *r.trace;
  if (r.ablated) j["ablated"] = true;
}

void from_json(const Json& j, ErrorReport& r) {
  r = ErrorReport{};
  r.seed_id = str_field(j, "seed_id");
  r.knowledge_type = parse_knowledge_type(str_field(j, "knowledge_type"));
  r.stress = parse_stress(str_field(j, "stress"));
  r.root_cause = str_field(j, "root_cause");
  r.card = field(j, "card").get<DifficultyCard>();
  r.prompt_hash = j.value("prompt_hash", std::string{});
  if (auto it = j.find("kg_k"); it != j.end() && !it->is_null())
    r.kg_k = KgKnowledgeBlock{field(*it, "missing_knowledge").get<std::vector<Triple>>(),
                              str_field(*it, "error_type"), str_field(*it, "error_details")};
  if (auto it = j.find("kg_r"); it != j.end() && !it->is_null())
    r.kg_r = KgReasoningBlock{str_field(*it, "transfer_conditions"),
                              str_field(*it, "error_type"), str_field(*it, "error_details")};
  if (auto it = j.find("table_r"); it != j.end() && !it->is_null())
    r.table_r = TableReasoningBlock{str_field(*it, "case_id"),
                                    str_field(*it, "reasoning_family"),
                                    field(*it, "required_ops").get<std::vector<std::string>>(),
                                    str_field(*it, "bottleneck_step"),
                                    str_field(*it, "error_signature"),
                                    str_field(*it, "evidence_spec"),
                                    str_field(*it, "ambiguity"),
                                    str_field(*it, "transfer_guidance")};
  if (auto it = j.find("text_r"); it != j.end() && !it->is_null())
    r.text_r = TextReasoningBlock{str_field(*it, "abstract_error_name"),
                                  str_field(*it, "abstract_error_description"),
                                  str_field(*it, "abstract_error_template"),
                                  str_field(*it, "transfer_guidance"),
                                  str_field(*it, "error_type_canon")};
  r.trace = opt_field<std::vector<TraceStep>>(j, "trace");
  r.ablated = j.value("ablated", false);
  if (auto err = check_report_invariants(r)) invalid(*err);
}

void to_json(Json& j, const AnalyzedCase& a) {
  j = Json{{"failure", a.failure}, {"report", a.report}};
}

void from_json(const Json& j, AnalyzedCase& a) {
  a.failure = field(j, "failure").get<FailureCase>();
  a.report = field(j, "report").get<ErrorReport>();
  if (a.failure.seed.id != a.report.seed_id) invalid("report seed_id does not match failure");
}

void to_json(Json& j, const ValidatorEntry& v) {
  j = Json{{"rule_id", v.rule_id}, {"passed", v.passed}, {"detail", v.detail}};
}

void from_json(const Json& j, ValidatorEntry& v) {
  v.rule_id = str_field(j, "rule_id");
  v.passed = field(j, "passed").get<bool>();
  v.detail = j.value("detail", std::string{});
}

void to_json(Json& j, const SynthesizedInstance& x) {
  j = Json{{"id", x.id},
           {"seed_id", x.seed_id},
           {"knowledge_type", to_string(x.knowledge_type())},
           {"stress", to_string(x.stress)},
           {"question", x.question},
           {"source", x.source},
           {"gold_answer", x.gold_answer},
           {"root_cause", x.root_cause},
           {"card", x.card},
           {"extras", x.extras},
           {"validator_log", x.validator_log}};
}

void from_json(const Json& j, SynthesizedInstance& x) {
  x.id = str_field(j, "id");
  x.seed_id = str_field(j, "seed_id");
  x.stress = parse_stress(str_field(j, "stress"));
  x.question = str_field(j, "question");
  x.source = field(j, "source").get<KnowledgeSource>();
  x.gold_answer = str_field(j, "gold_answer");
  x.root_cause = str_field(j, "root_cause");
  x.card = field(j, "card").get<DifficultyCard>();
  x.extras = j.value("extras", Json::object());
  x.validator_log = j.value("validator_log", std::vector<ValidatorEntry>{});
  if (x.stress == Stress::K && x.source.kind() == KnowledgeType::Table)
    invalid("KStress instance with a table source");
}

void to_json(Json& j, const GateVerdict& v) {
  j = Json{{"answerable", v.answerable()},
           {"consistent", v.consistent()},
           {"g_confidence", v.g_confidence()},
           {"u_confidence", v.u_confidence()},
           {"keep", v.keep()}};
}

void from_json(const Json& j, GateVerdict& v) {
  v = GateVerdict(field(j, "answerable").get<bool>(), field(j, "consistent").get<bool>(),
                  field(j, "g_confidence").get<double>(), field(j, "u_confidence").get<double>());
  if (j.contains("keep") && j["keep"].get<bool>() != v.keep())
    invalid("keep must equal answerable AND consistent");
}

}  // namespace stresseval
