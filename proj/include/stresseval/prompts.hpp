#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stresseval/domain.hpp"
#include "stresseval/gateway.hpp"

// Prompt templates compiled in from prompts/*.txt. A template is the system
// prompt of a call; the user prompt is a JSON payload whose "task" field
// names the template.
namespace stresseval::prompts {

const std::string& get(std::string_view id);
// sha256 of the template text, stored in reports for provenance.
std::string hash(std::string_view id);
std::vector<std::string> ids();

std::string_view default_blocklist();

// JSON view of a source for generator/analyzer payloads: passages as
// objects, triples as one " | "-joined string, tables as {header, rows}.
Json source_payload(const KnowledgeSource& s);

// Plain-text rendering of a source for answering prompts.
std::string format_source(const KnowledgeSource& s);

// System prompt = template `task`; user prompt = payload plus {"task": task}.
llm::CompletionRequest build_request(std::string_view task, Json payload,
                                     const std::string& model);

namespace detail {
const std::vector<std::pair<std::string_view, std::string_view>>& embedded();
std::string_view default_blocklist();
}  // namespace detail

}  // namespace stresseval::prompts
