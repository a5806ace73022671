#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stresseval/domain.hpp"

// Parsers for the three supported seed formats. All functions are pure and
// throw ValidationError with kinds MissingField, EmptyContext,
// MalformedTriple, RaggedRow or EmptyHeader.
namespace stresseval::ingest {

enum class SeedFormat { Hotpot, Kgqa, Wtq, Native };

SeedFormat parse_format(std::string_view name);
std::string_view to_string(SeedFormat f);

// HotpotQA-style record: question, answer, context (title + sentences per
// passage) and optional supporting_facts.
SeedInstance parse_hotpot(const Json& record, const std::string& fallback_id);

// "|"-delimited "ENTITY RELATION VALUE" segments. Multi-word entities and
// values are split around the first dotted relation token.
KnowledgeSource parse_kg_block(std::string_view text);
Triple parse_triple(std::string_view segment);
SeedInstance parse_kgqa(const Json& record, const std::string& fallback_id);

// Accepts {"table": {"header", "rows"}} or {"table_md": "..."}.
KnowledgeSource parse_table(const Json& record);
Table parse_markdown_table(std::string_view md);
SeedInstance parse_wtq(const Json& record, const std::string& fallback_id);

SeedInstance parse_record(SeedFormat format, const Json& record, const std::string& fallback_id);

struct IngestReport {
  std::size_t accepted = 0;
  std::vector<std::pair<std::size_t, std::string>> rejected;  // (line_no, reason)
  std::size_t total() const { return accepted + rejected.size(); }
};

struct IngestResult {
  std::vector<SeedInstance> seeds;
  IngestReport report;
};

// Reads raw JSONL (no schema field required). Blank lines are not records.
IngestResult ingest_lines(SeedFormat format, const std::vector<std::string>& lines,
                          const std::string& id_prefix);
IngestResult ingest_file(SeedFormat format, const std::filesystem::path& path);

}  // namespace stresseval::ingest
