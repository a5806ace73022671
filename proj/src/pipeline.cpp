#include "stresseval/pipeline.hpp"

#include <spdlog/spdlog.h>

#include "stresseval/analysis.hpp"
#include "stresseval/harvest.hpp"
#include "stresseval/jsonl.hpp"
#include "stresseval/seed_ingest.hpp"
#include "stresseval/stats.hpp"

namespace stresseval::pipeline {

namespace fs = std::filesystem;

LoadedSeeds load_seeds(const std::vector<config::SeedSpec>& specs) {
  LoadedSeeds out;
  for (const auto& spec : specs) {
    if (!fs::exists(spec.path)) throw Error("MissingInput", spec.path.string());
    auto r = ingest::ingest_file(spec.format, spec.path);
    for (const auto& [line, why] : r.report.rejected)
      spdlog::warn("ingest: {}:{}: {}", spec.path.string(), line, why);
    out.rejected += r.report.rejected.size();
    for (auto& s : r.seeds) out.seeds.push_back(std::move(s));
  }
  return out;
}

synth::SynthOptions synth_options(const config::PipelineConfig& cfg,
                                  const validate::EntityPolicy* policy) {
  synth::SynthOptions o;
  o.n = cfg.fanout;
  o.no_black_box = cfg.ablations.no_black_box;
  o.no_freeze_source = cfg.ablations.no_freeze_source;
  o.no_virtual_source = cfg.ablations.no_virtual_source;
  o.no_skeleton = cfg.ablations.no_skeleton;
  o.policy = policy;
  return o;
}

gating::GateOptions gate_options(const config::PipelineConfig& cfg) {
  return gating::GateOptions{cfg.ablations.no_gating, cfg.min_confidence};
}

void write_rejected_candidates(const fs::path& path,
                               const std::vector<synth::RejectedCandidate>& rejected) {
  std::vector<Json> lines;
  for (const auto& r : rejected) lines.push_back(r);
  jsonl::write_lines(path, lines);
}

void write_gate_drops(const fs::path& path, const std::vector<gating::GatedRecord>& dropped) {
  std::vector<Json> lines;
  for (const auto& r : dropped) lines.push_back(r);
  jsonl::write_lines(path, lines);
}

double RunSummary::rejection_rate() const {
  const auto total = k_candidates + r_candidates + rejected_candidates;
  return total == 0 ? 0.0 : static_cast<double>(rejected_candidates) / static_cast<double>(total);
}

int RunSummary::exit_code() const { return rejection_rate() > 0.5 ? 2 : 0; }

Json RunSummary::to_json() const {
  return Json{{"seeds", seeds},
              {"seeds_rejected", seeds_rejected},
              {"answered", answered},
              {"correct", correct},
              {"failures", failures},
              {"harvest_errors", harvest_errors},
              {"analyzed", analyzed},
              {"analysis_skipped", analysis_skipped},
              {"k_candidates", k_candidates},
              {"r_candidates", r_candidates},
              {"rejected_candidates", rejected_candidates},
              {"synth_skipped", synth_skipped},
              {"kept", kept},
              {"dropped", dropped},
              {"rejection_rate", rejection_rate()}};
}

RunSummary run(const config::PipelineConfig& cfg, llm::Gateway& gw) {
  cfg.validate();
  if (cfg.seeds.empty()) throw Error("MissingInput", "no seed files given");
  fs::create_directories(cfg.out_dir);
  const auto out = [&](const char* name) { return cfg.out_dir / name; };
  const int width = cfg.workers;
  RunSummary sum;

  auto loaded = load_seeds(cfg.seeds);
  sum.seeds = loaded.seeds.size();
  sum.seeds_rejected = loaded.rejected;
  jsonl::write(out(files::kSeeds), loaded.seeds);

  auto harvested = harvest::run(loaded.seeds, gw, cfg.models.for_role("target"), width);
  sum.answered = harvested.scores.size();
  sum.correct = harvested.correct();
  sum.failures = harvested.failures.size();
  sum.harvest_errors = harvested.errors.size();
  spdlog::info("harvest: {}", harvested.summary());
  jsonl::write(out(files::kFailures), harvested.failures);

  auto analyzed = analysis::analyze_all(harvested.failures, gw, cfg.models, width,
                                        cfg.ablations.no_error_analysis);
  sum.analyzed = analyzed.cases.size();
  sum.analysis_skipped = analyzed.skipped.size();
  jsonl::write(out(files::kReports), analyzed.cases);

  const auto policy = validate::EntityPolicy::load(
      cfg.blocklist ? std::optional<std::string>(cfg.blocklist->string()) : std::nullopt);
  auto synthesized =
      synth::synthesize_all(analyzed.cases, gw, cfg.models, width, synth_options(cfg, &policy));
  sum.k_candidates = synthesized.k_candidates.size();
  sum.r_candidates = synthesized.r_candidates.size();
  sum.rejected_candidates = synthesized.rejected.size();
  sum.synth_skipped = synthesized.skipped.size();
  jsonl::write(out(files::kCandidatesK), synthesized.k_candidates);
  jsonl::write(out(files::kCandidatesR), synthesized.r_candidates);
  write_rejected_candidates(out(files::kCandidatesRejected), synthesized.rejected);

  std::vector<SynthesizedInstance> candidates = synthesized.k_candidates;
  candidates.insert(candidates.end(), synthesized.r_candidates.begin(),
                    synthesized.r_candidates.end());
  auto gated = gating::gate_all(candidates, gw, cfg.models, width, gate_options(cfg));
  sum.kept = gated.kept.size();
  sum.dropped = gated.dropped.size();
  jsonl::write(out(files::kDataset), gated.kept);
  write_gate_drops(out(files::kRejected), gated.dropped);

  auto st = stats::compute_stats(gated.kept, loaded.seeds, harvested.failures);
  jsonl::write_file_atomic(out(files::kStats), stats::to_json(st).dump(2) + "\n");
  stats::GroupMap groups;
  if (cfg.root_cause_map) groups = stats::load_group_map(jsonl::read_file(*cfg.root_cause_map));
  jsonl::write_file_atomic(out(files::kRootCauseDist),
                           stats::root_cause_dist_csv(analyzed.cases, gated.kept, groups));
  jsonl::write_file_atomic(out(files::kSummary), sum.to_json().dump(2) + "\n");
  return sum;
}

}  // namespace stresseval::pipeline
