#include "stresseval/harvest.hpp"

#include <cstdio>
#include <optional>

#include "stresseval/errors.hpp"
#include "stresseval/pool.hpp"
#include "stresseval/prompts.hpp"
#include "stresseval/scoring.hpp"

namespace stresseval::harvest {

ScoreRecord score(const std::string& seed_id, const std::string& prediction,
                  const std::string& gold) {
  return ScoreRecord{seed_id, prediction, scoring::normalize_answer(prediction),
                     scoring::normalize_answer(gold), scoring::exact_match(prediction, gold)};
}

AnswerResult ask(llm::Gateway& gw, const std::string& model, const std::string& question,
                 const KnowledgeSource& source) {
  Json payload{{"question", question}, {"source", prompts::format_source(source)}};
  auto raw = gw.complete(prompts::build_request("answer", std::move(payload), model));
  auto pred = scoring::extract_final_answer(raw);
  return AnswerResult{std::move(raw), std::move(pred)};
}

std::size_t HarvestResult::correct() const {
  std::size_t n = 0;
  for (const auto& s : scores) n += s.correct;
  return n;
}

std::string HarvestResult::summary() const {
  const double pct = scores.empty() ? 0.0 : 100.0 * correct() / scores.size();
  char buf[64];
  std::snprintf(buf, sizeof buf, "%zu/%zu (%.1f%%)", correct(), scores.size(), pct);
  return buf;
}

HarvestResult run(const std::vector<SeedInstance>& seeds, llm::Gateway& gw,
                  const std::string& model, int width) {
  if (seeds.empty()) throw ValidationError("EmptyDataset", "harvest needs at least one seed");
  struct Slot {
    std::optional<AnswerResult> answer;
    std::string error;
  };
  auto slots = parallel_map<Slot>(seeds.size(), width, [&](std::size_t i) {
    Slot s;
    try {
      s.answer = ask(gw, model, seeds[i].question, seeds[i].source);
    } catch (const Error& e) {
      s.error = e.what();
    }
    return s;
  });
  HarvestResult out;
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    const auto& seed = seeds[i];
    if (!slots[i].answer) {
      out.errors.emplace_back(seed.id, slots[i].error);
      continue;
    }
    auto rec = score(seed.id, slots[i].answer->prediction, seed.gold_answer);
    if (!rec.correct)
      out.failures.push_back(
          FailureCase{seed, slots[i].answer->prediction, slots[i].answer->raw, model});
    out.scores.push_back(std::move(rec));
  }
  return out;
}

}  // namespace stresseval::harvest
