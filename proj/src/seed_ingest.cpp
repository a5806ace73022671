#include "stresseval/seed_ingest.hpp"

#include <fstream>
#include <regex>
#include <set>

#include "stresseval/errors.hpp"
#include "stresseval/text.hpp"

namespace stresseval::ingest {
namespace {

[[noreturn]] void missing(const std::string& what) { throw ValidationError("MissingField", what); }

const Json& require(const Json& j, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw ValidationError("InvalidRecord", "record is not an object");
  for (const char* k : keys)
    if (auto it = j.find(k); it != j.end() && !it->is_null()) return *it;
  missing(*keys.begin());
}

std::string cell_string(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  return v.dump();
}

// Answers may be a string or a list of alternatives (joined with ", ").
std::string answer_string(const Json& v) {
  if (v.is_array()) {
    std::vector<std::string> parts;
    for (const auto& a : v) parts.push_back(cell_string(a));
    return text::join(parts, ", ");
  }
  return cell_string(v);
}

std::string record_id(const Json& j, const std::string& fallback) {
  for (const char* k : {"id", "_id", "qid"})
    if (auto it = j.find(k); it != j.end() && !it->is_null()) return cell_string(*it);
  return fallback;
}

void require_qa(const std::string& question, const std::string& answer) {
  if (text::trim(question).empty()) missing("question");
  if (text::trim(answer).empty()) missing("answer");
}

bool is_dotted_relation(const std::string& token) {
  static const std::regex kDotted(R"([a-z_]+(\.\.?[a-z_]+)+)");
  return std::regex_match(token, kDotted);
}

std::vector<Passage> hotpot_passages(const Json& ctx) {
  std::vector<Passage> out;
  if (ctx.is_object() && ctx.contains("title") && ctx.contains("sentences")) {
    const auto& titles = ctx["title"];
    const auto& sents = ctx["sentences"];
    if (!titles.is_array() || !sents.is_array() || titles.size() != sents.size())
      throw ValidationError("InvalidRecord", "context title/sentences lists differ in length");
    for (std::size_t i = 0; i < titles.size(); ++i)
      out.push_back(Passage{cell_string(titles[i]), sents[i].get<std::vector<std::string>>()});
    return out;
  }
  if (!ctx.is_array()) throw ValidationError("InvalidRecord", "context must be a list");
  for (const auto& p : ctx) {
    if (p.is_array() && p.size() == 2) {
      out.push_back(Passage{cell_string(p[0]), p[1].get<std::vector<std::string>>()});
    } else if (p.is_object()) {
      out.push_back(Passage{cell_string(require(p, {"title"})),
                            require(p, {"sentences"}).get<std::vector<std::string>>(),
                            p.value("is_supporting", false)});
    } else {
      throw ValidationError("InvalidRecord", "unrecognized context entry");
    }
  }
  return out;
}

std::vector<std::pair<std::string, int>> hotpot_supporting_facts(const Json& sf) {
  std::vector<std::pair<std::string, int>> out;
  if (sf.is_object() && sf.contains("title") && sf.contains("sent_id")) {
    for (std::size_t i = 0; i < sf["title"].size(); ++i)
      out.emplace_back(cell_string(sf["title"][i]), sf["sent_id"][i].get<int>());
    return out;
  }
  if (!sf.is_array()) throw ValidationError("InvalidRecord", "supporting_facts must be a list");
  for (const auto& f : sf) {
    if (f.is_array() && f.size() == 2)
      out.emplace_back(cell_string(f[0]), f[1].get<int>());
    else if (f.is_object())
      out.emplace_back(cell_string(require(f, {"title"})), require(f, {"sent_id"}).get<int>());
    else
      throw ValidationError("InvalidRecord", "unrecognized supporting fact");
  }
  return out;
}

}  // namespace

SeedFormat parse_format(std::string_view name) {
  auto l = text::to_lower(name);
  if (l == "hotpot" || l == "hotpotqa") return SeedFormat::Hotpot;
  if (l == "kgqa" || l == "cwq" || l == "kg") return SeedFormat::Kgqa;
  if (l == "wtq" || l == "table") return SeedFormat::Wtq;
  if (l == "native" || l == "seed") return SeedFormat::Native;
  throw ValidationError("InvalidArgument", "unknown seed format '" + std::string(name) + "'");
}

std::string_view to_string(SeedFormat f) {
  switch (f) {
    case SeedFormat::Hotpot: return "hotpot";
    case SeedFormat::Kgqa: return "kgqa";
    case SeedFormat::Wtq: return "wtq";
    case SeedFormat::Native: return "native";
  }
  return "?";
}

SeedInstance parse_hotpot(const Json& record, const std::string& fallback_id) {
  SeedInstance seed;
  seed.id = record_id(record, fallback_id);
  seed.question = cell_string(require(record, {"question"}));
  seed.gold_answer = answer_string(require(record, {"answer", "gold_answer"}));
  require_qa(seed.question, seed.gold_answer);

  auto passages = hotpot_passages(require(record, {"context", "contexts"}));
  if (passages.empty()) throw ValidationError("EmptyContext", "record has no passages");
  for (const auto& p : passages)
    if (p.sentences.empty())
      throw ValidationError("EmptyContext", "passage '" + p.title + "' has no sentences");

  if (auto it = record.find("supporting_facts"); it != record.end() && !it->is_null()) {
    for (auto& p : passages) p.is_supporting = false;
    for (const auto& [title, sent_id] : hotpot_supporting_facts(*it)) {
      auto pit = std::find_if(passages.begin(), passages.end(),
                              [&](const Passage& p) { return p.title == title; });
      if (pit == passages.end()) missing("supporting fact cites absent title '" + title + "'");
      if (sent_id < 0 || static_cast<std::size_t>(sent_id) >= pit->sentences.size())
        missing("supporting fact sentence " + std::to_string(sent_id) + " absent from '" +
                title + "'");
      pit->is_supporting = true;
    }
  }
  seed.source = KnowledgeSource::text(std::move(passages));
  if (auto err = check_source_invariants(seed.source))
    throw ValidationError("InvalidRecord", *err);
  return seed;
}

Triple parse_triple(std::string_view segment) {
  const auto tokens = text::split_ws(segment);
  if (tokens.size() == 3) return Triple{tokens[0], tokens[1], tokens[2]};
  if (tokens.size() > 3) {
    for (std::size_t i = 1; i + 1 < tokens.size(); ++i) {
      if (!is_dotted_relation(tokens[i])) continue;
      std::vector<std::string> head(tokens.begin(), tokens.begin() + i);
      std::vector<std::string> tail(tokens.begin() + i + 1, tokens.end());
      return Triple{text::join(head, " "), tokens[i], text::join(tail, " ")};
    }
  }
  throw ValidationError("MalformedTriple", "'" + std::string(segment) + "'");
}

KnowledgeSource parse_kg_block(std::string_view block) {
  std::string body(block);
  const std::string lower = text::to_lower(body);
  if (auto pos = lower.find("knowledge graph triples:"); pos != std::string::npos)
    body = body.substr(pos + std::string_view("knowledge graph triples:").size());
  if (auto pos = text::to_lower(body).find("\nquestion:"); pos != std::string::npos)
    body.resize(pos);

  std::vector<Triple> triples;
  for (const auto& segment : text::split(body, '|')) {
    if (text::trim(segment).empty()) continue;
    triples.push_back(parse_triple(segment));
  }
  if (triples.empty()) throw ValidationError("MalformedTriple", "no triples in block");
  return KnowledgeSource::kg(std::move(triples));
}

SeedInstance parse_kgqa(const Json& record, const std::string& fallback_id) {
  SeedInstance seed;
  seed.id = record_id(record, fallback_id);
  seed.question = cell_string(require(record, {"question"}));
  seed.gold_answer = answer_string(require(record, {"answer", "gold_answer", "answers"}));
  require_qa(seed.question, seed.gold_answer);
  const Json& kg = require(record, {"triples", "kg", "knowledge_graph"});
  if (kg.is_string()) {
    seed.source = parse_kg_block(kg.get<std::string>());
  } else if (kg.is_array()) {
    std::vector<Triple> triples;
    for (const auto& t : kg) {
      if (t.is_string())
        triples.push_back(parse_triple(t.get<std::string>()));
      else if (t.is_array() && t.size() == 3)
        triples.push_back(Triple{cell_string(t[0]), cell_string(t[1]), cell_string(t[2])});
      else
        throw ValidationError("MalformedTriple", t.dump());
    }
    if (triples.empty()) throw ValidationError("EmptyContext", "record has no triples");
    seed.source = KnowledgeSource::kg(std::move(triples));
  } else {
    throw ValidationError("InvalidRecord", "triples must be a string or list");
  }
  if (auto err = check_source_invariants(seed.source))
    throw ValidationError("MalformedTriple", *err);
  return seed;
}

Table parse_markdown_table(std::string_view md) {
  static const std::regex kSeparatorCell(R"(:?-{3,}:?)");
  Table table;
  bool have_header = false;
  for (const auto& raw : text::lines(md)) {
    std::string line = text::trim(raw);
    if (line.find('|') == std::string::npos) continue;
    auto cells = text::split(line, '|');
    if (!cells.empty() && text::trim(cells.front()).empty() && line.front() == '|')
      cells.erase(cells.begin());
    if (!cells.empty() && text::trim(cells.back()).empty() && line.back() == '|') cells.pop_back();
    for (auto& c : cells) c = text::trim(c);
    bool separator = !cells.empty() && std::all_of(cells.begin(), cells.end(), [](const auto& c) {
      return std::regex_match(c, kSeparatorCell);
    });
    if (separator) continue;
    if (!have_header) {
      table.header = std::move(cells);
      have_header = true;
    } else {
      table.rows.push_back(std::move(cells));
    }
  }
  return table;
}

KnowledgeSource parse_table(const Json& record) {
  Table table;
  if (auto it = record.find("table"); it != record.end() && it->is_object()) {
    if (auto h = it->find("header"); h != it->end() && h->is_array())
      for (const auto& c : *h) table.header.push_back(cell_string(c));
    if (auto r = it->find("rows"); r != it->end() && r->is_array())
      for (const auto& row : *r) {
        std::vector<std::string> cells;
        for (const auto& c : row) cells.push_back(cell_string(c));
        table.rows.push_back(std::move(cells));
      }
  } else if (auto md = record.find("table_md"); md != record.end() && md->is_string()) {
    table = parse_markdown_table(md->get<std::string>());
  } else {
    missing("table");
  }
  if (table.header.empty()) throw ValidationError("EmptyHeader", "table header is empty");
  for (std::size_t i = 0; i < table.rows.size(); ++i)
    if (table.rows[i].size() != table.header.size())
      throw ValidationError("RaggedRow", "row " + std::to_string(i) + " has " +
                                             std::to_string(table.rows[i].size()) +
                                             " cells, header has " +
                                             std::to_string(table.header.size()));
  return KnowledgeSource::table(std::move(table));
}

SeedInstance parse_wtq(const Json& record, const std::string& fallback_id) {
  SeedInstance seed;
  seed.id = record_id(record, fallback_id);
  seed.question = cell_string(require(record, {"question", "utterance"}));
  seed.gold_answer = answer_string(require(record, {"answer", "gold_answer", "target_value"}));
  require_qa(seed.question, seed.gold_answer);
  seed.source = parse_table(record);
  return seed;
}

SeedInstance parse_record(SeedFormat format, const Json& record, const std::string& fallback_id) {
  switch (format) {
    case SeedFormat::Hotpot: return parse_hotpot(record, fallback_id);
    case SeedFormat::Kgqa: return parse_kgqa(record, fallback_id);
    case SeedFormat::Wtq: return parse_wtq(record, fallback_id);
    case SeedFormat::Native: {
      Json copy = record;
      copy.erase("schema");
      auto seed = copy.get<SeedInstance>();
      if (auto err = check_source_invariants(seed.source))
        throw ValidationError("InvalidRecord", *err);
      return seed;
    }
  }
  throw ValidationError("InvalidArgument", "unknown format");
}

IngestResult ingest_lines(SeedFormat format, const std::vector<std::string>& lines,
                          const std::string& id_prefix) {
  IngestResult result;
  std::set<std::string> seen_ids;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t line_no = i + 1;
    if (text::trim(lines[i]).empty()) continue;
    try {
      Json record = Json::parse(lines[i]);
      auto seed = parse_record(format, record, id_prefix + std::to_string(line_no));
      if (!seen_ids.insert(seed.id).second)
        throw ValidationError("DuplicateId", "seed id '" + seed.id + "' repeats");
      result.seeds.push_back(std::move(seed));
      ++result.report.accepted;
    } catch (const Error& e) {
      result.report.rejected.emplace_back(line_no, e.what());
    } catch (const std::exception& e) {
      result.report.rejected.emplace_back(line_no, std::string("InvalidRecord: ") + e.what());
    }
  }
  return result;
}

IngestResult ingest_file(SeedFormat format, const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("MissingInput", path.string());
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return ingest_lines(format, lines, std::string(to_string(format)) + "-");
}

}  // namespace stresseval::ingest
