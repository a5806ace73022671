#include "stresseval/stats.hpp"

#include <spdlog/spdlog.h>

#include <cctype>
#include <cstdio>
#include <random>
#include <set>
#include <unordered_map>

#include "stresseval/csv.hpp"
#include "stresseval/harvest.hpp"
#include "stresseval/errors.hpp"
#include "stresseval/pool.hpp"
#include "stresseval/prompts.hpp"
#include "stresseval/text.hpp"

namespace stresseval::stats {
namespace {

std::string split_of(const SynthesizedInstance& x) { return split_name(x.knowledge_type(), x.stress); }

std::string fmt1(const std::optional<double>& v) {
  if (!v) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f", *v);
  return buf;
}

Json split_json(const SplitStats& s) {
  return Json{{"split", s.split},
              {"n_instances", s.n_instances},
              {"n_seeds", s.n_seeds},
              {"n_failures", s.n_failures},
              {"avg_source_tokens", s.avg_source_tokens},
              {"avg_question_tokens", s.avg_question_tokens},
              {"n_root_causes", s.n_root_causes},
              {"sim_q_qstar", s.sim_q_qstar}};
}

// Accumulates one row of the statistics table.
struct Acc {
  std::size_t n = 0;
  double source_tokens = 0, question_tokens = 0, sim = 0;
  std::set<std::string> failures, root_causes;

  void add(const SynthesizedInstance& x, const std::string& seed_question, bool is_failure) {
    ++n;
    source_tokens += static_cast<double>(tokenize(x.source.flat_text()).size());
    question_tokens += static_cast<double>(tokenize(x.question).size());
    sim += question_similarity(seed_question, x.question);
    if (is_failure) failures.insert(x.seed_id);
    root_causes.insert(x.root_cause);
  }

  SplitStats finish(std::string name, std::size_t n_seeds) const {
    SplitStats s;
    s.split = std::move(name);
    s.n_instances = n;
    s.n_seeds = n_seeds;
    s.n_failures = failures.size();
    s.n_root_causes = root_causes.size();
    if (n > 0) {
      s.avg_source_tokens = source_tokens / static_cast<double>(n);
      s.avg_question_tokens = question_tokens / static_cast<double>(n);
      s.sim_q_qstar = sim / static_cast<double>(n);
    }
    return s;
  }
};

std::optional<bool> parse_judgement(const std::string& cell) {
  const auto v = text::to_lower(text::trim(cell));
  if (v.empty()) return std::nullopt;
  if (v == "1" || v == "yes" || v == "y" || v == "true") return true;
  if (v == "0" || v == "no" || v == "n" || v == "false") return false;
  throw ValidationError("MalformedCsv", "unrecognised judgement '" + cell + "'");
}

const std::vector<std::string>& human_header() {
  static const std::vector<std::string> h{"id",      "split",   "question",      "gold_answer",
                                          "source",  "bottleneck_step", "trigger",
                                          "answerability", "unambiguity", "faithfulness"};
  return h;
}

}  // namespace

const std::vector<std::pair<KnowledgeType, Stress>>& splits() {
  static const std::vector<std::pair<KnowledgeType, Stress>> s{
      {KnowledgeType::Text, Stress::K}, {KnowledgeType::Text, Stress::R},
      {KnowledgeType::KG, Stress::K},   {KnowledgeType::KG, Stress::R},
      {KnowledgeType::Table, Stress::R}};
  return s;
}

std::vector<std::string> tokenize(std::string_view s) {
  std::string cleaned;
  cleaned.reserve(s.size());
  for (unsigned char c : s) {
    if (c < 0x80 && std::ispunct(c)) continue;
    cleaned += (c < 0x80) ? static_cast<char>(std::tolower(c)) : static_cast<char>(c);
  }
  return text::split_ws(cleaned);
}

double question_similarity(std::string_view q, std::string_view q_star) {
  const auto a = tokenize(q);
  const auto b = tokenize(q_star);
  if (a.empty() || b.empty()) return 0.0;
  std::unordered_map<std::string, long> counts;
  for (const auto& t : a) ++counts[t];
  long overlap = 0;
  for (const auto& t : b) {
    auto it = counts.find(t);
    if (it != counts.end() && it->second > 0) {
      --it->second;
      ++overlap;
    }
  }
  if (overlap == 0) return 0.0;
  // F1 = 2 * overlap / (|a| + |b|)
  return 100.0 * 2.0 * static_cast<double>(overlap) / static_cast<double>(a.size() + b.size());
}

Json to_json(const DatasetStats& s) {
  Json arr = Json::array();
  for (const auto& x : s.splits) arr.push_back(split_json(x));
  return Json{{"splits", arr}, {"overall", split_json(s.overall)}};
}

DatasetStats compute_stats(const std::vector<SynthesizedInstance>& dataset,
                           const std::vector<SeedInstance>& seeds,
                           const std::vector<FailureCase>& failures) {
  std::map<std::string, const SeedInstance*> by_id;
  for (const auto& s : seeds) by_id[s.id] = &s;
  std::set<std::string> failure_ids;
  for (const auto& f : failures) failure_ids.insert(f.seed.id);

  std::map<std::string, Acc> acc;
  Acc all;
  for (const auto& x : dataset) {
    auto it = by_id.find(x.seed_id);
    if (it == by_id.end()) throw ValidationError("OrphanInstance", x.id);
    const bool is_failure = failure_ids.count(x.seed_id) > 0;
    acc[split_of(x)].add(x, it->second->question, is_failure);
    all.add(x, it->second->question, is_failure);
  }
  DatasetStats out;
  for (const auto& [t, s] : splits()) {
    std::size_t n_seeds = 0;
    for (const auto& seed : seeds) n_seeds += seed.knowledge_type() == t;
    const auto name = split_name(t, s);
    out.splits.push_back(acc[name].finish(name, n_seeds));
  }
  out.overall = all.finish("Overall", seeds.size());
  return out;
}

// ---- evaluation -----------------------------------------------------------------

std::optional<double> Tally::accuracy() const {
  if (total == 0) return std::nullopt;
  return 100.0 * static_cast<double>(correct) / static_cast<double>(total);
}

std::optional<double> EvalTable::cell(KnowledgeType t, Stress s) const {
  auto it = cells.find(split_name(t, s));
  return it == cells.end() ? std::nullopt : it->second.accuracy();
}

std::optional<double> EvalTable::type_average(KnowledgeType t) const {
  double sum = 0;
  int n = 0;
  for (auto s : {Stress::K, Stress::R})
    if (auto v = cell(t, s)) {
      sum += *v;
      ++n;
    }
  if (n == 0) return std::nullopt;
  return sum / n;
}

std::optional<double> EvalTable::overall() const {
  Tally t;
  for (const auto& [_, c] : cells) {
    t.correct += c.correct;
    t.total += c.total;
  }
  return t.accuracy();
}

EvalTable tabulate(const std::string& model, const std::vector<SynthesizedInstance>& dataset,
                   const std::map<std::string, std::string>& predictions) {
  EvalTable table;
  table.model = model;
  for (const auto& x : dataset) {
    auto it = predictions.find(x.id);
    if (it == predictions.end()) continue;
    const bool ok = harvest::score(x.id, it->second, x.gold_answer).correct;
    for (auto* t : {&table.cells[split_of(x)], &table.root_causes[x.root_cause]}) {
      ++t->total;
      t->correct += ok;
    }
  }
  return table;
}

EvalTable evaluate(const std::vector<SynthesizedInstance>& dataset, llm::Gateway& gw,
                   const std::string& model, int width) {
  if (dataset.empty()) throw ValidationError("EmptyDataset", "nothing to evaluate");
  struct Slot {
    std::optional<std::string> prediction;
    std::string error;
  };
  auto slots = parallel_map<Slot>(dataset.size(), width, [&](std::size_t i) {
    Slot s;
    try {
      s.prediction = harvest::ask(gw, model, dataset[i].question, dataset[i].source).prediction;
    } catch (const Error& e) {
      s.error = e.what();
    }
    return s;
  });
  std::map<std::string, std::string> predictions;
  std::vector<std::pair<std::string, std::string>> errors;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (slots[i].prediction) {
      predictions[dataset[i].id] = *slots[i].prediction;
    } else {
      spdlog::warn("eval: excluded {}: {}", dataset[i].id, slots[i].error);
      errors.emplace_back(dataset[i].id, slots[i].error);
    }
  }
  auto table = tabulate(model, dataset, predictions);
  table.errors = std::move(errors);
  return table;
}

std::string eval_csv(const std::vector<EvalTable>& tables) {
  std::vector<csv::Row> rows{{"model", "Text K-Stress", "Text R-Stress", "Text Avg.", "KG K-Stress",
                              "KG R-Stress", "KG Avg.", "Table R-Stress", "Table Avg.", "Overall"}};
  for (const auto& t : tables) {
    using KT = KnowledgeType;
    rows.push_back({t.model, fmt1(t.cell(KT::Text, Stress::K)), fmt1(t.cell(KT::Text, Stress::R)),
                    fmt1(t.type_average(KT::Text)), fmt1(t.cell(KT::KG, Stress::K)),
                    fmt1(t.cell(KT::KG, Stress::R)), fmt1(t.type_average(KT::KG)),
                    fmt1(t.cell(KT::Table, Stress::R)), fmt1(t.type_average(KT::Table)),
                    fmt1(t.overall())});
  }
  return csv::format(rows);
}

std::string root_cause_accuracy_csv(const std::vector<EvalTable>& tables) {
  std::vector<csv::Row> rows{{"model", "root_cause", "correct", "total", "accuracy"}};
  for (const auto& t : tables)
    for (const auto& [rc, tally] : t.root_causes)
      rows.push_back({t.model, rc, std::to_string(tally.correct), std::to_string(tally.total),
                      fmt1(tally.accuracy())});
  return csv::format(rows);
}

GroupMap load_group_map(const std::string& csv_text) {
  GroupMap m;
  for (const auto& row : csv::parse(csv_text)) {
    if (row.size() < 2 || text::trim(row[0]).empty()) continue;
    const auto fine = text::trim(row[0]);
    if (fine == "root_cause" || fine == "fine") continue;  // header
    m[text::canonicalize_root_cause(fine)] = text::trim(row[1]);
  }
  return m;
}

std::string root_cause_dist_csv(const std::vector<AnalyzedCase>& reports,
                                const std::vector<SynthesizedInstance>& dataset,
                                const GroupMap& groups) {
  std::vector<csv::Row> rows{{"set", "group", "root_cause", "count", "share"}};
  auto emit = [&](const std::string& set, const std::map<std::string, std::size_t>& counts,
                  std::size_t total) {
    for (const auto& [rc, n] : counts) {
      auto g = groups.find(rc);
      char share[32];
      std::snprintf(share, sizeof share, "%.4f", static_cast<double>(n) / static_cast<double>(total));
      rows.push_back({set, g == groups.end() ? rc : g->second, rc, std::to_string(n), share});
    }
  };
  std::map<std::string, std::size_t> from_failures, from_dataset;
  for (const auto& r : reports) ++from_failures[r.report.root_cause];
  for (const auto& x : dataset) ++from_dataset[x.root_cause];
  emit("failures", from_failures, reports.size());
  emit("dataset", from_dataset, dataset.size());
  return csv::format(rows);
}

// ---- human evaluation ------------------------------------------------------------

std::vector<SynthesizedInstance> sample_for_human_eval(
    const std::vector<SynthesizedInstance>& dataset, std::size_t k, std::uint64_t seed) {
  if (k > dataset.size())
    throw ValidationError("SampleTooLarge", std::to_string(k) + " > " + std::to_string(dataset.size()));
  std::vector<std::size_t> idx(dataset.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  // Partial Fisher-Yates on raw engine output so the draw does not depend on
  // the standard library's distribution implementation.
  std::mt19937_64 rng(seed);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng() % (idx.size() - i));
    std::swap(idx[i], idx[j]);
  }
  std::vector<SynthesizedInstance> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) out.push_back(dataset[idx[i]]);
  return out;
}

std::string human_eval_csv(const std::vector<SynthesizedInstance>& sample) {
  std::vector<csv::Row> rows{human_header()};
  for (const auto& x : sample)
    rows.push_back({x.id, split_of(x), x.question, x.gold_answer, prompts::format_source(x.source),
                    x.card.bottleneck_step, x.card.trigger, "", "", ""});
  return csv::format(rows);
}

std::vector<HumanEvalSplit> import_human_eval(const std::vector<std::string>& csv_texts) {
  std::map<std::string, HumanEvalSplit> by_split;
  for (const auto& body : csv_texts) {
    auto rows = csv::parse(body);
    if (rows.empty()) continue;
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < rows[0].size(); ++i) col[text::trim(rows[0][i])] = i;
    for (const char* need : {"split", "answerability", "unambiguity", "faithfulness"})
      if (!col.count(need)) throw ValidationError("MalformedCsv", std::string("missing column ") + need);
    for (std::size_t r = 1; r < rows.size(); ++r) {
      const auto& row = rows[r];
      if (row.size() == 1 && row[0].empty()) continue;
      auto at = [&](const char* name) -> std::string {
        auto i = col[name];
        return i < row.size() ? row[i] : "";
      };
      auto& s = by_split[at("split")];
      s.split = at("split");
      ++s.rows;
      auto tally = [&](Tally& t, const char* name) {
        if (auto v = parse_judgement(at(name))) {
          ++t.total;
          t.correct += *v;
        }
      };
      tally(s.answerability, "answerability");
      tally(s.unambiguity, "unambiguity");
      tally(s.faithfulness, "faithfulness");
    }
  }
  std::vector<HumanEvalSplit> out;
  for (auto& [_, s] : by_split) out.push_back(std::move(s));
  return out;
}

std::string human_eval_summary_csv(const std::vector<HumanEvalSplit>& splits) {
  std::vector<csv::Row> rows{{"split", "rows", "A(%)", "U(%)", "F(%)"}};
  for (const auto& s : splits)
    rows.push_back({s.split, std::to_string(s.rows), fmt1(s.answerability.accuracy()),
                    fmt1(s.unambiguity.accuracy()), fmt1(s.faithfulness.accuracy())});
  return csv::format(rows);
}

}  // namespace stresseval::stats
