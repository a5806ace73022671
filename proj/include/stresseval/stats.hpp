#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "stresseval/domain.hpp"
#include "stresseval/gateway.hpp"

namespace stresseval::stats {

// The five (knowledge type, stress) cells in report order.
const std::vector<std::pair<KnowledgeType, Stress>>& splits();

// Lowercase, every ASCII punctuation character removed (commas too), split
// on whitespace.
std::vector<std::string> tokenize(std::string_view text);

// 100 x token-overlap F1 between the two token multisets; 0 when either
// side has no tokens.
double question_similarity(std::string_view q, std::string_view q_star);

struct SplitStats {
  std::string split;  // "Text-K", ..., or "Overall"
  std::size_t n_instances = 0;
  std::size_t n_seeds = 0;
  std::size_t n_failures = 0;
  double avg_source_tokens = 0.0;
  double avg_question_tokens = 0.0;
  std::size_t n_root_causes = 0;
  double sim_q_qstar = 0.0;
};

struct DatasetStats {
  std::vector<SplitStats> splits;  // same order as splits()
  SplitStats overall;
};
Json to_json(const DatasetStats& s);

// n_seeds counts seeds of the split's knowledge type; n_failures counts the
// distinct failure cases the split's instances came from. Sim compares each
// instance with its seed question. Throws ValidationError(OrphanInstance)
// when an instance's seed_id is not among `seeds`.
DatasetStats compute_stats(const std::vector<SynthesizedInstance>& dataset,
                           const std::vector<SeedInstance>& seeds,
                           const std::vector<FailureCase>& failures);

// ---- evaluation -----------------------------------------------------------------

struct Tally {
  std::size_t correct = 0;
  std::size_t total = 0;
  std::optional<double> accuracy() const;  // percent; nullopt when empty
};

struct EvalTable {
  std::string model;
  std::map<std::string, Tally> cells;        // keyed by split name
  std::map<std::string, Tally> root_causes;  // keyed by root cause
  std::vector<std::pair<std::string, std::string>> errors;  // (instance id, message)

  std::optional<double> cell(KnowledgeType t, Stress s) const;
  // Unweighted mean of the type's non-empty cells.
  std::optional<double> type_average(KnowledgeType t) const;
  // Instance-weighted over every cell.
  std::optional<double> overall() const;
};

// Scores pre-computed predictions (one per instance id).
EvalTable tabulate(const std::string& model, const std::vector<SynthesizedInstance>& dataset,
                   const std::map<std::string, std::string>& predictions);

// Asks `model` every instance with the harvest prompt. Gateway errors
// exclude the instance and are listed in `errors`. Throws
// ValidationError(EmptyDataset).
EvalTable evaluate(const std::vector<SynthesizedInstance>& dataset, llm::Gateway& gw,
                   const std::string& model, int width);

// model, Text K-Stress, Text R-Stress, Text Avg., KG K-Stress, KG R-Stress,
// KG Avg., Table R-Stress, Table Avg., Overall. One decimal; empty cells blank.
std::string eval_csv(const std::vector<EvalTable>& tables);
std::string root_cause_accuracy_csv(const std::vector<EvalTable>& tables);

// fine -> coarse root-cause grouping read from a two-column CSV.
using GroupMap = std::map<std::string, std::string>;
GroupMap load_group_map(const std::string& csv_text);

// Root-cause distribution of the failure reports and the dataset: columns
// set, group, root_cause, count, share. Unmapped causes are their own group.
std::string root_cause_dist_csv(const std::vector<AnalyzedCase>& reports,
                                const std::vector<SynthesizedInstance>& dataset,
                                const GroupMap& groups);

// ---- human evaluation ------------------------------------------------------------

// Deterministic draw of k instances. Throws ValidationError(SampleTooLarge).
std::vector<SynthesizedInstance> sample_for_human_eval(
    const std::vector<SynthesizedInstance>& dataset, std::size_t k, std::uint64_t seed);

// id, split, question, gold_answer, source, bottleneck_step, trigger, then
// blank answerability, unambiguity, faithfulness columns.
std::string human_eval_csv(const std::vector<SynthesizedInstance>& sample);

struct HumanEvalSplit {
  std::string split;
  std::size_t rows = 0;
  Tally answerability, unambiguity, faithfulness;
};

// Aggregates filled sheets. Judgements: 1/0, yes/no, y/n, true/false (any
// case); blank cells are not counted. Throws ValidationError(MalformedCsv).
std::vector<HumanEvalSplit> import_human_eval(const std::vector<std::string>& csv_texts);
std::string human_eval_summary_csv(const std::vector<HumanEvalSplit>& splits);

}  // namespace stresseval::stats
