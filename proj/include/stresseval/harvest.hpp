#pragma once

#include <string>
#include <utility>
#include <vector>

#include "stresseval/domain.hpp"
#include "stresseval/gateway.hpp"

namespace stresseval::harvest {

struct ScoreRecord {
  std::string seed_id;
  std::string prediction;
  std::string normalized_pred;
  std::string normalized_gold;
  bool correct = false;
};

ScoreRecord score(const std::string& seed_id, const std::string& prediction,
                  const std::string& gold);

struct AnswerResult {
  std::string raw;
  std::string prediction;
};

// Asks `model` the question with the unified step-by-step prompt.
AnswerResult ask(llm::Gateway& gw, const std::string& model, const std::string& question,
                 const KnowledgeSource& source);

struct HarvestResult {
  std::vector<FailureCase> failures;          // input order
  std::vector<ScoreRecord> scores;            // answered seeds, input order
  std::vector<std::pair<std::string, std::string>> errors;  // (seed_id, message)

  std::size_t correct() const;
  // "correct/total (pct%)" over answered seeds.
  std::string summary() const;
};

HarvestResult run(const std::vector<SeedInstance>& seeds, llm::Gateway& gw,
                  const std::string& model, int width);

}  // namespace stresseval::harvest
