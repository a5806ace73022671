#include "stresseval/validators.hpp"

#include <fstream>
#include <regex>
#include <set>

#include "stresseval/prompts.hpp"
#include "stresseval/scoring.hpp"
#include "stresseval/seed_ingest.hpp"
#include "stresseval/text.hpp"

namespace stresseval::validate {
namespace {

std::string range_detail(std::string_view dim, std::size_t got, int lo, int hi) {
  return std::string(dim) + ": got " + std::to_string(got) + ", want [" + std::to_string(lo) +
         "," + std::to_string(hi) + "]";
}

bool within(std::size_t n, int lo, int hi) {
  return n >= static_cast<std::size_t>(lo) && n <= static_cast<std::size_t>(hi);
}

std::string cell_string(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  return v.dump();
}

// Non-empty lines of a pattern_application block.
std::vector<std::string> pa_lines(std::string_view pa) {
  std::vector<std::string> out;
  for (auto& l : text::lines(pa))
    if (!text::trim(l).empty()) out.push_back(l);
  return out;
}

bool pa_bullets_ok(const std::vector<std::string>& lines) {
  for (const auto& l : lines)
    if (l.rfind("- ", 0) != 0) return false;
  return true;
}

std::string strip_token(std::string_view tok) {
  static constexpr std::string_view kEdge = "\"'()[]{},.;:!?";
  std::size_t b = 0, e = tok.size();
  while (b < e && kEdge.find(tok[b]) != std::string_view::npos) ++b;
  while (e > b && kEdge.find(tok[e - 1]) != std::string_view::npos) --e;
  std::string out(tok.substr(b, e - b));
  if (out.size() > 2 && (out.ends_with("'s") || out.ends_with("’s")))
    out.erase(out.size() - (out.ends_with("'s") ? 2 : 4));
  return out;
}

bool capitalized(std::string_view tok) {
  return !tok.empty() && std::isupper(static_cast<unsigned char>(tok.front()));
}

std::optional<std::pair<long long, long long>> cell_ref(const Json& c) {
  if (!c.is_object() || !c.contains("row") || !c.contains("col")) return std::nullopt;
  if (!c["row"].is_number_integer() || !c["col"].is_number_integer()) return std::nullopt;
  return std::make_pair(c["row"].get<long long>(), c["col"].get<long long>());
}

std::string last_relation_segment(std::string_view rel) {
  auto pos = rel.find_last_of('.');
  return std::string(pos == std::string_view::npos ? rel : rel.substr(pos + 1));
}

std::string underscores_to_spaces(std::string s) {
  for (auto& c : s)
    if (c == '_') c = ' ';
  return s;
}

}  // namespace

std::size_t utf8_length(std::string_view s) {
  std::size_t n = 0;
  for (unsigned char c : s)
    if ((c & 0xC0) != 0x80) ++n;
  return n;
}

// ---- rendered sources -------------------------------------------------------

RenderedSource parse_rendered_source(KnowledgeType kind, const Json& j) {
  RenderedSource out;
  auto fail = [&](std::string rule, std::string detail) {
    out.violations.push_back({std::move(rule), std::move(detail)});
    return out;
  };
  if (!j.is_object()) return fail("src.schema", "expected an object");
  switch (kind) {
    case KnowledgeType::Text: {
      if (!j.contains("contexts") || !j["contexts"].is_array())
        return fail("src.schema", "missing contexts array");
      KnowledgeSource::Passages ps;
      for (const auto& c : j["contexts"]) {
        if (!c.is_object() || !c.contains("title") || !c["title"].is_string() ||
            !c.contains("sentences") || !c["sentences"].is_array())
          return fail("src.schema", "context needs title and sentences");
        Passage p;
        p.title = c["title"].get<std::string>();
        for (const auto& s : c["sentences"]) {
          if (!s.is_string()) return fail("src.schema", "sentences must be strings");
          p.sentences.push_back(s.get<std::string>());
        }
        p.is_supporting = c.value("is_supporting", false);
        const std::string para = c.contains("paragraph") && c["paragraph"].is_string()
                                     ? c["paragraph"].get<std::string>()
                                     : std::string("\x01");
        if (para != p.paragraph())
          out.violations.push_back({"src.text.paragraph", p.title});
        ps.push_back(std::move(p));
      }
      out.source = KnowledgeSource::text(std::move(ps));
      break;
    }
    case KnowledgeType::KG: {
      if (!j.contains("triples")) return fail("src.schema", "missing triples");
      try {
        const Json& t = j["triples"];
        if (t.is_string()) {
          out.source = ingest::parse_kg_block(t.get<std::string>());
        } else if (t.is_array()) {
          std::vector<Triple> ts;
          for (const auto& e : t) {
            if (!e.is_string()) return fail("src.kg.malformed", "triples must be strings");
            ts.push_back(ingest::parse_triple(e.get<std::string>()));
          }
          out.source = KnowledgeSource::kg(std::move(ts));
        } else {
          return fail("src.schema", "triples must be a string or array");
        }
      } catch (const ValidationError& e) {
        return fail("src.kg.malformed", e.what());
      }
      break;
    }
    case KnowledgeType::Table: {
      if (!j.contains("table") || !j["table"].is_object()) return fail("src.schema", "missing table");
      const Json& t = j["table"];
      if (!t.contains("header") || !t["header"].is_array() || !t.contains("rows") ||
          !t["rows"].is_array())
        return fail("src.schema", "table needs header and rows arrays");
      Table tbl;
      for (const auto& h : t["header"]) tbl.header.push_back(cell_string(h));
      for (std::size_t r = 0; r < t["rows"].size(); ++r) {
        const Json& row = t["rows"][r];
        if (!row.is_array()) return fail("src.schema", "row " + std::to_string(r) + " not an array");
        std::vector<std::string> cells;
        for (const auto& c : row) cells.push_back(cell_string(c));
        if (cells.size() != tbl.header.size())
          out.violations.push_back({"src.table.ragged", "row " + std::to_string(r)});
        tbl.rows.push_back(std::move(cells));
      }
      out.source = KnowledgeSource::table(std::move(tbl));
      break;
    }
  }
  return out;
}

Violations source_bounds(const KnowledgeSource& s) {
  Violations v;
  switch (s.kind()) {
    case KnowledgeType::Text: {
      const auto& ps = s.passages();
      if (!within(ps.size(), 6, 9))
        v.push_back({"src.text.passages", range_detail("passages", ps.size(), 6, 9)});
      std::set<std::string> titles;
      std::size_t supporting = 0;
      for (const auto& p : ps) {
        supporting += p.is_supporting;
        if (!titles.insert(p.title).second) v.push_back({"src.text.title_unique", p.title});
      }
      for (const auto& p : ps)
        if (!within(p.sentences.size(), 2, 4)) {
          v.push_back({"src.text.sentences",
                       p.title + " " + range_detail("sentences", p.sentences.size(), 2, 4)});
          break;
        }
      if (supporting < 2)
        v.push_back({"src.text.supporting", std::to_string(supporting) + " supporting passages"});
      break;
    }
    case KnowledgeType::KG:
      if (!within(s.triples().size(), 30, 40))
        v.push_back({"src.kg.triples", range_detail("triples", s.triples().size(), 30, 40)});
      break;
    case KnowledgeType::Table: {
      const auto& t = s.table();
      if (!within(t.rows.size(), 6, 14))
        v.push_back({"src.table.rows", range_detail("rows", t.rows.size(), 6, 14)});
      if (!within(t.header.size(), 4, 9))
        v.push_back({"src.table.cols", range_detail("cols", t.header.size(), 4, 9)});
      for (std::size_t r = 0; r < t.rows.size(); ++r)
        if (t.rows[r].size() != t.header.size()) {
          v.push_back({"src.table.ragged", "row " + std::to_string(r)});
          break;
        }
      break;
    }
  }
  return v;
}

Violations source_policy(const KnowledgeSource& s, const EntityPolicy& policy) {
  if (s.kind() == KnowledgeType::KG) return {};
  if (auto hit = policy.find_blocklisted(s.flat_text())) return {{"policy.blocklisted", *hit}};
  return {};
}

// ---- entity policy ------------------------------------------------------------

EntityPolicy::EntityPolicy(std::vector<std::string> blocklist, std::vector<std::string> kg_literals)
    : blocklist_(std::move(blocklist)), kg_literals_(std::move(kg_literals)) {}

EntityPolicy EntityPolicy::load(const std::optional<std::string>& extra_blocklist_path) {
  std::vector<std::string> names;
  auto add_lines = [&](std::string_view body) {
    for (auto& l : text::lines(body)) {
      auto t = text::trim(l);
      if (!t.empty() && t[0] != '#') names.push_back(t);
    }
  };
  add_lines(prompts::default_blocklist());
  if (extra_blocklist_path) {
    std::ifstream in(*extra_blocklist_path);
    if (!in) throw Error("MissingInput", *extra_blocklist_path);
    std::string body((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    add_lines(body);
  }
  return EntityPolicy(std::move(names));
}

bool EntityPolicy::is_kg_placeholder(std::string_view name) {
  static const std::regex kPlaceholder(R"(^([A-Z][A-Za-z]*_[A-Za-z0-9]+|m\.[0-9a-z]+)$)");
  return std::regex_match(name.begin(), name.end(), kPlaceholder);
}

bool EntityPolicy::accepts(std::string_view name, KnowledgeType type) const {
  const auto t = text::trim(name);
  if (t.empty()) return false;
  if (type == KnowledgeType::KG) {
    static const std::regex kLiteral(R"(^[0-9][0-9.,:/\- ]*$)");
    if (is_kg_placeholder(t) || std::regex_match(t, kLiteral)) return true;
    for (const auto& w : kg_literals_)
      if (text::to_lower(w) == text::to_lower(t)) return true;
    return false;
  }
  return !find_blocklisted(t).has_value();
}

std::optional<std::string> EntityPolicy::find_blocklisted(std::string_view text) const {
  for (const auto& name : blocklist_)
    if (text::contains_word_ci(text, name)) return name;
  return std::nullopt;
}

// ---- universe -----------------------------------------------------------------

void to_json(Json& j, const Universe& u) {
  j = Json{{"entities", u.entities}, {"schema", u.schema}, {"assignments", u.assignments}};
}

Universe parse_universe(const Json& j) {
  if (!j.is_object()) throw ValidationError("InvalidRecord", "universe must be an object");
  Universe u;
  auto strings = [&](const char* key) {
    std::vector<std::string> out;
    if (!j.contains(key)) return out;
    if (!j[key].is_array()) throw ValidationError("InvalidRecord", std::string(key) + " must be an array");
    for (const auto& e : j[key]) out.push_back(cell_string(e));
    return out;
  };
  u.entities = strings("entities");
  u.schema = strings("schema");
  if (j.contains("assignments")) {
    if (!j["assignments"].is_object())
      throw ValidationError("InvalidRecord", "assignments must be an object");
    for (const auto& [ent, fields] : j["assignments"].items()) {
      if (!fields.is_object())
        throw ValidationError("InvalidRecord", "assignments of '" + ent + "' must be an object");
      for (const auto& [f, val] : fields.items()) u.assignments[ent][f] = cell_string(val);
    }
  }
  return u;
}

Violations check_universe(const Universe& u, KnowledgeType type, const EntityPolicy& policy) {
  Violations v;
  if (u.entities.empty()) v.push_back({"policy.empty", "no entities"});
  for (const auto& e : u.entities) {
    if (text::trim(e).empty()) {
      v.push_back({"policy.empty", "blank entity name"});
    } else if (type == KnowledgeType::KG) {
      if (!policy.accepts(e, type)) v.push_back({"policy.kg_placeholder", e});
    } else if (auto hit = policy.find_blocklisted(e)) {
      v.push_back({"policy.blocklisted", e});
    }
  }
  const std::set<std::string> ents(u.entities.begin(), u.entities.end());
  const std::set<std::string> fields(u.schema.begin(), u.schema.end());
  for (const auto& [ent, fs] : u.assignments) {
    if (!ents.count(ent)) v.push_back({"universe.unknown_entity", ent});
    for (const auto& [f, val] : fs) {
      if (!fields.count(f)) v.push_back({"universe.field_not_in_schema", ent + "." + f});
      if (type != KnowledgeType::KG)
        if (auto hit = policy.find_blocklisted(val)) v.push_back({"policy.blocklisted", *hit});
    }
  }
  return v;
}

// ---- skeleton -----------------------------------------------------------------

void to_json(Json& j, const Skeleton& s) {
  j = Json{{"required_evidence", s.required_evidence},
           {"bottleneck_op", s.bottleneck_op},
           {"trap", s.trap},
           {"gold_trace", s.gold_trace}};
}

Skeleton parse_skeleton(const Json& j) {
  if (!j.is_object()) throw ValidationError("InvalidRecord", "skeleton must be an object");
  Skeleton s;
  if (!j.contains("required_evidence") || !j["required_evidence"].is_array())
    throw ValidationError("MissingField", "required_evidence");
  s.required_evidence = j["required_evidence"];
  s.bottleneck_op = j.contains("bottleneck_op") ? cell_string(j["bottleneck_op"]) : "";
  s.trap = j.contains("trap") ? cell_string(j["trap"]) : "";
  if (j.contains("gold_trace")) {
    if (j["gold_trace"].is_array()) {
      for (const auto& e : j["gold_trace"]) s.gold_trace.push_back(cell_string(e));
    } else {
      s.gold_trace.push_back(cell_string(j["gold_trace"]));
    }
  }
  return s;
}

Violations check_skeleton(const Skeleton& s, const KnowledgeSource& source,
                          const DifficultyCard& card) {
  Violations v;
  if (s.required_evidence.empty()) v.push_back({"skel.schema", "no required evidence"});
  for (const auto& ref : s.required_evidence) {
    bool ok = false;
    switch (source.kind()) {
      case KnowledgeType::Text:
        if (ref.is_object() && ref.contains("title") && ref["title"].is_string() &&
            ref.contains("sent_id") && ref["sent_id"].is_number_integer()) {
          const Passage* p = source.find_passage(ref["title"].get<std::string>());
          const auto sid = ref["sent_id"].get<long long>();
          ok = p && sid >= 0 && sid < static_cast<long long>(p->sentences.size());
        }
        break;
      case KnowledgeType::Table:
        if (auto c = cell_ref(ref)) {
          const auto& t = source.table();
          ok = c->first >= 0 && c->first < static_cast<long long>(t.rows.size()) &&
               c->second >= 0 && c->second < static_cast<long long>(t.header.size());
        }
        break;
      case KnowledgeType::KG:
        if (ref.is_object() && ref.contains("triple") && ref["triple"].is_number_integer()) {
          const auto i = ref["triple"].get<long long>();
          ok = i >= 0 && i < static_cast<long long>(source.triples().size());
        }
        break;
    }
    if (!ok) v.push_back({"skel.dangling", ref.dump()});
  }
  if (text::trim(card.bottleneck_step) != "unspecified") {
    bool same = false;
    try {
      same = text::canonicalize_root_cause(s.bottleneck_op) ==
             text::canonicalize_root_cause(card.bottleneck_step);
    } catch (const ValidationError&) {
    }
    if (!same)
      v.push_back({"skel.bottleneck_mismatch", s.bottleneck_op + " vs " + card.bottleneck_step});
  }
  if (text::trim(s.trap).empty()) v.push_back({"skel.trap_empty", ""});
  return v;
}

// ---- instances ------------------------------------------------------------------

std::vector<std::string> out_of_source_spans(std::string_view question,
                                             std::string_view source_text) {
  std::vector<std::string> missing;
  std::vector<std::string> span;
  bool span_initial = false;
  auto flush = [&] {
    if (span.empty()) return;
    const bool skip = span_initial && span.size() == 1;
    auto joined = text::join(span, " ");
    if (!skip && joined != "I" && !text::contains_ci(source_text, joined)) missing.push_back(joined);
    span.clear();
  };
  bool sentence_start = true;
  for (const auto& raw : text::split_ws(question)) {
    const auto tok = strip_token(raw);
    const bool breaks_after = !raw.empty() && std::string_view(",.;:!?)\"").find(raw.back()) !=
                                                  std::string_view::npos;
    if (capitalized(tok)) {
      if (span.empty()) span_initial = sentence_start;
      span.push_back(tok);
    } else {
      flush();
    }
    if (breaks_after) flush();
    sentence_start = !raw.empty() && (raw.back() == '.' || raw.back() == '?' || raw.back() == '!');
  }
  flush();
  return missing;
}

Violations check_text_k_item(const TextKItem& item, const std::string& original_gold,
                             const KnowledgeSource& source) {
  Violations v;
  const auto norm_gold = scoring::normalize_answer(original_gold);
  if (text::contains_ci(item.new_question, original_gold) ||
      (!norm_gold.empty() &&
       scoring::normalize_answer(item.new_question).find(norm_gold) != std::string::npos))
    v.push_back({"k.anti_leak", "original answer appears in the question"});
  const bool same = item.recipe == "SAME";
  const bool hop = item.recipe.rfind("HOP:", 0) == 0 && item.recipe.size() > 4;
  if (!same && !hop) {
    v.push_back({"k.recipe", item.recipe});
    return v;
  }
  if (same) {
    if (text::trim(item.new_gold_answer) != text::trim(original_gold))
      v.push_back({"k.same.answer_equal", item.new_gold_answer});
    if (!item.clue.empty()) v.push_back({"k.same.clue_empty", ""});
    return v;
  }
  if (scoring::exact_match(item.new_gold_answer, original_gold) ||
      text::trim(item.new_gold_answer).empty())
    v.push_back({"k.hop.answer_differs", item.new_gold_answer});
  bool grounded = false;
  if (!item.clue.empty() && source.kind() == KnowledgeType::Text)
    for (const auto& p : source.passages())
      if (p.paragraph().find(item.clue) != std::string::npos) grounded = true;
  if (!grounded) v.push_back({"k.hop.clue_substring", ""});
  if (item.new_gold_answer.empty() || item.clue.find(item.new_gold_answer) == std::string::npos)
    v.push_back({"k.hop.clue_contains_answer", ""});
  if (utf8_length(item.clue) > 180)
    v.push_back({"k.hop.clue_length", std::to_string(utf8_length(item.clue)) + " characters"});
  return v;
}

Violations check_kg_k_item(const std::string& question, const std::string& answer,
                           const std::vector<Triple>& missing) {
  Violations v;
  const auto a = text::trim(answer);
  if (a.empty()) {
    v.push_back({"kgk.answer_empty", ""});
  } else {
    for (auto& item : text::split(a, ',')) {
      auto t = text::trim(item);
      if (!t.empty() && text::contains_word_ci(question, t)) {
        v.push_back({"kgk.answer_in_question", t});
        break;
      }
    }
  }
  if (missing.empty()) return v;
  for (const auto& t : missing)
    if (text::contains_ci(question, t.entity) && text::contains_ci(question, t.value)) {
      v.push_back({"kgk.restates_missing", t.render()});
      break;
    }
  bool depends = false;
  const std::string qa = question + "\n" + answer;
  for (const auto& t : missing) {
    const auto seg = last_relation_segment(t.relation);
    if (text::contains_ci(qa, t.entity) || text::contains_ci(qa, t.value) ||
        text::contains_word_ci(qa, seg) || text::contains_word_ci(qa, underscores_to_spaces(seg)))
      depends = true;
  }
  if (!depends) v.push_back({"kgk.no_dependency", "question touches no missing triple"});
  return v;
}

std::optional<Violation> check_diversity(const std::string& question,
                                         const std::vector<std::string>& accepted) {
  for (const auto& a : accepted)
    if (text::token_edit_distance(question, a) <= 3)
      return Violation{"k.diversity", "too close to: " + a};
  return std::nullopt;
}

std::optional<Violation> check_freeze(const KnowledgeSource& seed, const KnowledgeSource& out) {
  if (serialize(seed).dump() == serialize(out).dump()) return std::nullopt;
  return Violation{"k.freeze", "source differs from the seed source"};
}

namespace {

void common_r(Violations& v, const std::string& question, const std::string& answer,
              const KnowledgeSource& source) {
  const auto a = text::to_lower(text::trim(answer));
  if (a.empty() || a == "unknown") v.push_back({"r.answer_empty", answer});
  auto missing = out_of_source_spans(question, source.flat_text());
  if (!missing.empty()) v.push_back({"r.closed_world", text::join(missing, ", ")});
}

void policy_r(Violations& v, const EntityPolicy* policy,
              std::initializer_list<const std::string*> fields) {
  if (!policy) return;
  for (const auto* f : fields)
    if (auto hit = policy->find_blocklisted(*f)) {
      v.push_back({"policy.blocklisted", *hit});
      return;
    }
}

}  // namespace

Violations check_text_r_instance(const std::string& question, const std::string& answer,
                                 const Json& supporting_facts,
                                 const std::string& pattern_application,
                                 const KnowledgeSource& source, const EntityPolicy* policy) {
  Violations v;
  common_r(v, question, answer, source);
  policy_r(v, policy, {&question, &answer, &pattern_application});
  if (!supporting_facts.is_array()) {
    v.push_back({"r.text.sf_schema", "supporting_facts must be an array"});
  } else {
    if (!within(supporting_facts.size(), 2, 5))
      v.push_back({"r.text.sf_count", range_detail("supporting_facts", supporting_facts.size(), 2, 5)});
    for (const auto& f : supporting_facts) {
      std::string title;
      long long sid = -1;
      if (f.is_object() && f.contains("title") && f["title"].is_string() &&
          f.contains("sent_id") && f["sent_id"].is_number_integer()) {
        title = f["title"].get<std::string>();
        sid = f["sent_id"].get<long long>();
      } else if (f.is_array() && f.size() == 2 && f[0].is_string() && f[1].is_number_integer()) {
        title = f[0].get<std::string>();
        sid = f[1].get<long long>();
      } else {
        v.push_back({"r.text.sf_schema", f.dump()});
        continue;
      }
      const Passage* p = source.kind() == KnowledgeType::Text ? source.find_passage(title) : nullptr;
      if (!p) {
        v.push_back({"r.text.sf_title", title});
      } else if (!p->is_supporting) {
        v.push_back({"r.text.sf_not_supporting", title});
      } else if (sid < 0 || sid >= static_cast<long long>(p->sentences.size())) {
        v.push_back({"r.text.sf_range", title + " " + std::to_string(sid)});
      }
    }
  }
  const auto lines = pa_lines(pattern_application);
  if (!within(lines.size(), 6, 10) || !pa_bullets_ok(lines))
    v.push_back({"r.text.pa_lines", std::to_string(lines.size()) + " lines"});
  return v;
}

Violations check_table_r_instance(const std::string& question, const std::string& answer,
                                  const Json& supporting_cells,
                                  const std::string& pattern_application,
                                  const KnowledgeSource& source, const EntityPolicy* policy) {
  Violations v;
  common_r(v, question, answer, source);
  policy_r(v, policy, {&question, &answer, &pattern_application});
  const auto& t = source.table();
  if (!supporting_cells.is_array()) {
    v.push_back({"r.table.cells_schema", "supporting_cells must be an array"});
  } else {
    if (!within(supporting_cells.size(), 2, 8))
      v.push_back({"r.table.cells_count", range_detail("supporting_cells", supporting_cells.size(), 2, 8)});
    for (const auto& c : supporting_cells) {
      auto ref = cell_ref(c);
      if (!ref) {
        v.push_back({"r.table.cells_schema", c.dump()});
        continue;
      }
      if (ref->first < 0 || ref->first >= static_cast<long long>(t.rows.size()) ||
          ref->second < 0 || ref->second >= static_cast<long long>(t.header.size()))
        v.push_back({"r.table.cell_range",
                     "(" + std::to_string(ref->first) + "," + std::to_string(ref->second) + ")"});
    }
  }
  const auto lines = pa_lines(pattern_application);
  if (!within(lines.size(), 6, 10)) v.push_back({"r.table.pa_lines", std::to_string(lines.size()) + " lines"});
  if (!pa_bullets_ok(lines)) v.push_back({"r.table.pa_bullets", ""});
  if (utf8_length(pattern_application) < 120)
    v.push_back({"r.table.pa_length", std::to_string(utf8_length(pattern_application)) + " characters"});
  bool header = false;
  for (const auto& h : t.header)
    if (!h.empty() && pattern_application.find(h) != std::string::npos) header = true;
  if (!header) v.push_back({"r.table.pa_header", ""});
  bool row = false;
  static const std::regex kNumber(R"(\d+)");
  for (auto it = std::sregex_iterator(pattern_application.begin(), pattern_application.end(), kNumber);
       it != std::sregex_iterator(); ++it) {
    try {
      if (std::stoll(it->str()) < static_cast<long long>(t.rows.size())) row = true;
    } catch (const std::exception&) {
    }
  }
  if (!row) v.push_back({"r.table.pa_row", ""});
  return v;
}

Violations check_kg_r_instance(const std::string& question, const std::string& answer,
                               const KnowledgeSource& source) {
  Violations v;
  common_r(v, question, answer, source);
  std::set<std::string> parts;
  for (const auto& t : source.triples()) {
    parts.insert(t.entity);
    parts.insert(t.value);
  }
  std::vector<std::string> unknown;
  static const std::regex kPlaceholder(R"(\b([A-Z][A-Za-z]*_[A-Za-z0-9]+|m\.[0-9a-z]+)\b)");
  for (const auto* s : {&question, &answer})
    for (auto it = std::sregex_iterator(s->begin(), s->end(), kPlaceholder);
         it != std::sregex_iterator(); ++it)
      if (!parts.count(it->str())) unknown.push_back(it->str());
  const auto flat = source.flat_text();
  if (text::to_lower(text::trim(answer)) != "none")
    for (auto& item : text::split(answer, ',')) {
      auto t = text::trim(item);
      if (!t.empty() && !text::contains_ci(flat, t)) unknown.push_back(t);
    }
  if (!unknown.empty()) v.push_back({"r.kg.closed_world", text::join(unknown, ", ")});
  return v;
}

void log_into(std::vector<ValidatorEntry>& log, const std::string& group, const Violations& v) {
  if (v.empty()) {
    log.push_back(ValidatorEntry{group, true, ""});
    return;
  }
  for (const auto& x : v) log.push_back(ValidatorEntry{x.rule_id, false, x.detail});
}

}  // namespace stresseval::validate
