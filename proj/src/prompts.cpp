#include "stresseval/prompts.hpp"

#include <map>

#include "stresseval/errors.hpp"
#include "stresseval/gateway.hpp"

namespace stresseval::prompts {
namespace {

const std::map<std::string, std::string, std::less<>>& registry() {
  static const auto* m = [] {
    auto* out = new std::map<std::string, std::string, std::less<>>;
    for (auto [k, v] : detail::embedded()) out->emplace(std::string(k), std::string(v));
    return out;
  }();
  return *m;
}

}  // namespace

const std::string& get(std::string_view id) {
  auto it = registry().find(id);
  if (it == registry().end()) throw Error("UnknownPrompt", std::string(id));
  return it->second;
}

std::string hash(std::string_view id) { return llm::sha256_hex(get(id)); }

std::vector<std::string> ids() {
  std::vector<std::string> out;
  for (const auto& [k, v] : registry()) out.push_back(k);
  return out;
}

std::string_view default_blocklist() { return detail::default_blocklist(); }

llm::CompletionRequest build_request(std::string_view task, Json payload,
                                     const std::string& model) {
  payload["task"] = std::string(task);
  llm::CompletionRequest req;
  req.system_prompt = get(task);
  req.user_prompt = payload.dump(-1, ' ', false, Json::error_handler_t::replace);
  req.model_name = model;
  return req;
}

Json source_payload(const KnowledgeSource& s) {
  switch (s.kind()) {
    case KnowledgeType::Text: {
      Json arr = Json::array();
      for (const auto& p : s.passages())
        arr.push_back({{"title", p.title},
                       {"sentences", p.sentences},
                       {"paragraph", p.paragraph()},
                       {"is_supporting", p.is_supporting}});
      return arr;
    }
    case KnowledgeType::KG: return render_triples(s.triples());
    case KnowledgeType::Table: return Json{{"header", s.table().header}, {"rows", s.table().rows}};
  }
  return nullptr;
}

std::string format_source(const KnowledgeSource& s) {
  std::string out;
  switch (s.kind()) {
    case KnowledgeType::Text:
      for (const auto& p : s.passages()) {
        out += "Title: " + p.title + "\n";
        for (std::size_t i = 0; i < p.sentences.size(); ++i)
          out += "[" + std::to_string(i) + "] " + p.sentences[i] + "\n";
        out += "\n";
      }
      break;
    case KnowledgeType::KG:
      out = "knowledge graph triples: " + render_triples(s.triples()) + "\n";
      break;
    case KnowledgeType::Table: {
      const auto& t = s.table();
      auto row = [](const std::vector<std::string>& cells) {
        std::string r;
        for (std::size_t i = 0; i < cells.size(); ++i) r += (i ? " | " : "") + cells[i];
        return r;
      };
      out = "Table Header:\n" + row(t.header) + "\n\nTable Rows:\n";
      for (const auto& r : t.rows) out += row(r) + "\n";
      break;
    }
  }
  return out;
}

}  // namespace stresseval::prompts
