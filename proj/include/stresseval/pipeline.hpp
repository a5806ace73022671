#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "stresseval/config.hpp"
#include "stresseval/domain.hpp"
#include "stresseval/gateway.hpp"
#include "stresseval/gating.hpp"
#include "stresseval/synth.hpp"

namespace stresseval::pipeline {

// Output file names inside the run directory.
namespace files {
inline constexpr const char* kSeeds = "seeds.jsonl";
inline constexpr const char* kFailures = "failures.jsonl";
inline constexpr const char* kReports = "reports.jsonl";
inline constexpr const char* kCandidatesK = "candidates_k.jsonl";
inline constexpr const char* kCandidatesR = "candidates_r.jsonl";
inline constexpr const char* kCandidatesRejected = "candidates_rejected.jsonl";
inline constexpr const char* kDataset = "dataset.jsonl";
inline constexpr const char* kRejected = "rejected.jsonl";
inline constexpr const char* kStats = "stats.json";
inline constexpr const char* kRootCauseDist = "root_cause_dist.csv";
inline constexpr const char* kSummary = "run_summary.json";
}  // namespace files

// Reads every seed file; rejected records are logged and counted.
struct LoadedSeeds {
  std::vector<SeedInstance> seeds;
  std::size_t rejected = 0;
};
LoadedSeeds load_seeds(const std::vector<config::SeedSpec>& specs);

synth::SynthOptions synth_options(const config::PipelineConfig& cfg,
                                  const validate::EntityPolicy* policy);
gating::GateOptions gate_options(const config::PipelineConfig& cfg);

void write_rejected_candidates(const std::filesystem::path& path,
                               const std::vector<synth::RejectedCandidate>& rejected);
void write_gate_drops(const std::filesystem::path& path,
                      const std::vector<gating::GatedRecord>& dropped);

struct RunSummary {
  std::size_t seeds = 0;
  std::size_t seeds_rejected = 0;
  std::size_t answered = 0;
  std::size_t correct = 0;
  std::size_t failures = 0;
  std::size_t harvest_errors = 0;
  std::size_t analyzed = 0;
  std::size_t analysis_skipped = 0;
  std::size_t k_candidates = 0;
  std::size_t r_candidates = 0;
  std::size_t rejected_candidates = 0;
  std::size_t synth_skipped = 0;
  std::size_t kept = 0;
  std::size_t dropped = 0;

  // rejected / (accepted + rejected) over synthesized candidates.
  double rejection_rate() const;
  // 0, or 2 when more than half of the candidates were rejected.
  int exit_code() const;
  Json to_json() const;
};

// harvest -> analyze -> synthesize -> gate -> stats, writing every stage's
// file into cfg.out_dir.
RunSummary run(const config::PipelineConfig& cfg, llm::Gateway& gw);

}  // namespace stresseval::pipeline
