#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "stresseval/domain.hpp"
#include "stresseval/report_schema.hpp"

// Deterministic checks applied to generator output. Each returns the full
// list of violations (empty == pass) keyed by stable rule ids.
namespace stresseval::validate {

using analysis::Violation;
using analysis::Violations;

// Number of UTF-8 code points.
std::size_t utf8_length(std::string_view s);

// ---- rendered sources -------------------------------------------------------

struct RenderedSource {
  std::optional<KnowledgeSource> source;
  Violations violations;
};

// Parses the generator's {"contexts"|"triples"|"table": ...} object for the
// given kind. Shape problems (ragged rows, paragraph mismatch, malformed
// triples) are reported; bounds are checked separately.
RenderedSource parse_rendered_source(KnowledgeType kind, const Json& j);

// Structural bounds for a virtual source: Text 6-9 passages of 2-4
// sentences with >=2 supporting; KG 30-40 triples; Table 6-14 rows x 4-9 cols.
Violations source_bounds(const KnowledgeSource& s);

class EntityPolicy;
// policy.blocklisted over every string of a Text/Table source. KG sources
// are covered by the universe placeholder check instead.
Violations source_policy(const KnowledgeSource& s, const EntityPolicy& policy);

// ---- synthetic entity policy --------------------------------------------------

class EntityPolicy {
 public:
  EntityPolicy(std::vector<std::string> blocklist, std::vector<std::string> kg_literals = {});
  // Built-in blocklist plus an optional file (one name per line, '#' comments).
  static EntityPolicy load(const std::optional<std::string>& extra_blocklist_path = {});

  // KG: placeholder (Country_X, m.0abc123), numeric/date literal or a
  // whitelisted literal. Text/Table: non-empty and free of blocklisted names.
  bool accepts(std::string_view name, KnowledgeType type) const;

  // First blocklisted name occurring in `text` on word boundaries.
  std::optional<std::string> find_blocklisted(std::string_view text) const;

  static bool is_kg_placeholder(std::string_view name);

 private:
  std::vector<std::string> blocklist_;
  std::vector<std::string> kg_literals_;
};

// ---- universe ---------------------------------------------------------------

struct Universe {
  std::vector<std::string> entities;
  std::vector<std::string> schema;
  std::map<std::string, std::map<std::string, std::string>> assignments;
  bool operator==(const Universe&) const = default;
};

void to_json(Json& j, const Universe& u);
// Throws ValidationError(InvalidRecord) on shape errors; values are coerced to strings.
Universe parse_universe(const Json& j);
// policy.empty, policy.blocklisted, policy.kg_placeholder,
// universe.field_not_in_schema, universe.unknown_entity
Violations check_universe(const Universe& u, KnowledgeType type, const EntityPolicy& policy);

// ---- skeleton ---------------------------------------------------------------

struct Skeleton {
  Json required_evidence = Json::array();
  std::string bottleneck_op;
  std::string trap;
  std::vector<std::string> gold_trace;
  bool operator==(const Skeleton&) const = default;
};

void to_json(Json& j, const Skeleton& s);
Skeleton parse_skeleton(const Json& j);
// skel.dangling, skel.bottleneck_mismatch, skel.trap_empty, skel.schema
Violations check_skeleton(const Skeleton& s, const KnowledgeSource& source,
                          const DifficultyCard& card);

// ---- instances ----------------------------------------------------------------

// Capitalized spans of `question` that do not occur in `source_text`.
std::vector<std::string> out_of_source_spans(std::string_view question,
                                             std::string_view source_text);

struct TextKItem {
  std::string new_question;
  std::string recipe;
  std::string new_gold_answer;
  std::string clue;
};

// k.anti_leak, k.recipe, k.same.answer_equal, k.same.clue_empty,
// k.hop.answer_differs, k.hop.clue_substring, k.hop.clue_contains_answer,
// k.hop.clue_length
Violations check_text_k_item(const TextKItem& item, const std::string& original_gold,
                             const KnowledgeSource& source);

// kgk.answer_empty, kgk.answer_in_question, kgk.restates_missing, kgk.no_dependency.
// `missing` empty (analysis ablated) skips the dependency rules.
Violations check_kg_k_item(const std::string& question, const std::string& answer,
                           const std::vector<Triple>& missing);

// k.diversity: `question` is within 3 token edits of an accepted one.
std::optional<Violation> check_diversity(const std::string& question,
                                         const std::vector<std::string>& accepted);

// k.freeze
std::optional<Violation> check_freeze(const KnowledgeSource& seed, const KnowledgeSource& out);

// Shared R checks: r.answer_empty, r.closed_world, and policy.blocklisted
// when a policy is given (null when the original source is reused).
// Text additionally: r.text.sf_*, r.text.pa_lines. Table: r.table.*.
// KG: r.kg.closed_world.
Violations check_text_r_instance(const std::string& question, const std::string& answer,
                                 const Json& supporting_facts,
                                 const std::string& pattern_application,
                                 const KnowledgeSource& source, const EntityPolicy* policy);
Violations check_table_r_instance(const std::string& question, const std::string& answer,
                                  const Json& supporting_cells,
                                  const std::string& pattern_application,
                                  const KnowledgeSource& source, const EntityPolicy* policy);
Violations check_kg_r_instance(const std::string& question, const std::string& answer,
                               const KnowledgeSource& source);

// Appends one log entry per violation, or one passing entry per rule group.
void log_into(std::vector<ValidatorEntry>& log, const std::string& group, const Violations& v);

}  // namespace stresseval::validate
