// stresseval: every pipeline stage as a subcommand, plus `run` for the whole thing.

#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "stresseval/analysis.hpp"
#include "stresseval/config.hpp"
#include "stresseval/csv.hpp"
#include "stresseval/gating.hpp"
#include "stresseval/harvest.hpp"
#include "stresseval/jsonl.hpp"
#include "stresseval/pipeline.hpp"
#include "stresseval/stats.hpp"
#include "stresseval/synth.hpp"

namespace fs = std::filesystem;
using namespace stresseval;

namespace {

// Flags shared by every subcommand that talks to a model.
struct Common {
  std::string config_path;
  std::string mock_fixtures;
  std::string cache_dir;
  std::string base_url;
  std::string model;
  int workers = 0;
  int max_attempts = 0;
  std::string log_level = "warn";
};

struct Ablate {
  bool no_error_analysis = false, no_gating = false, no_black_box = false;
  bool no_freeze_source = false, no_virtual_source = false, no_skeleton = false;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config_path, "INI config file")->check(CLI::ExistingFile);
  app->add_option("--mock-fixtures", c.mock_fixtures, "serve completions from <dir>/<digest>.txt");
  app->add_option("--cache-dir", c.cache_dir, "completion cache directory");
  app->add_option("--base-url", c.base_url, "OpenAI-compatible endpoint");
  app->add_option("--model", c.model, "backbone model name");
  app->add_option("--workers", c.workers, "worker pool width");
  app->add_option("--max-attempts", c.max_attempts, "provider attempts per request");
  app->add_option("--log-level", c.log_level, "trace|debug|info|warn|error|off");
}

void add_ablations(CLI::App* app, Ablate& a, bool analysis, bool synth, bool gate) {
  if (analysis) app->add_flag("--no-error-analysis", a.no_error_analysis, "stub difficulty cards");
  if (synth) {
    app->add_flag("--no-black-box", a.no_black_box, "feed (Q, A) raw to the K prompt");
    app->add_flag("--no-freeze-source", a.no_freeze_source, "allow the K branch to rewrite S");
    app->add_flag("--no-virtual-source", a.no_virtual_source, "reuse the original S for R");
    app->add_flag("--no-skeleton", a.no_skeleton, "skip the skeleton call");
  }
  if (gate) app->add_flag("--no-gating", a.no_gating, "keep every validated candidate");
}

config::PipelineConfig build_config(const Common& c, const Ablate& a) {
  config::PipelineConfig cfg;
  if (!c.config_path.empty()) config::load_ini_file(c.config_path, cfg);
  if (!c.mock_fixtures.empty()) cfg.mock_fixtures = c.mock_fixtures;
  if (!c.cache_dir.empty()) cfg.cache_dir = c.cache_dir;
  if (!c.base_url.empty()) cfg.base_url = c.base_url;
  if (!c.model.empty()) cfg.models.default_model = c.model;
  if (c.workers > 0) cfg.workers = c.workers;
  if (c.max_attempts > 0) cfg.max_attempts = c.max_attempts;
  auto& x = cfg.ablations;
  x.no_error_analysis |= a.no_error_analysis;
  x.no_gating |= a.no_gating;
  x.no_black_box |= a.no_black_box;
  x.no_freeze_source |= a.no_freeze_source;
  x.no_virtual_source |= a.no_virtual_source;
  x.no_skeleton |= a.no_skeleton;
  spdlog::set_level(spdlog::level::from_str(c.log_level));
  return cfg;
}

std::optional<std::string> api_key() {
  if (const char* k = std::getenv("STRESSEVAL_API_KEY")) return std::string(k);
  return std::nullopt;
}

void require(const fs::path& p) {
  if (!fs::exists(p)) throw Error("MissingInput", p.string());
}

std::vector<config::SeedSpec> seed_specs(const std::vector<std::string>& raw,
                                         const std::string& format) {
  std::vector<config::SeedSpec> out;
  const auto fmt = ingest::parse_format(format);
  for (const auto& s : raw) out.push_back(config::parse_seed_spec(s, fmt));
  return out;
}

void write_text(const fs::path& p, const std::string& body) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  jsonl::write_file_atomic(p, body);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Failure-driven stress-test synthesis for QA models"};
  app.require_subcommand(1);
  spdlog::set_level(spdlog::level::warn);

  Common common;
  Ablate ablate;
  std::vector<std::string> seeds;
  std::string format = "native";
  std::string in_path, out_path, out_dir = "out";
  std::vector<std::string> inputs;
  int n = 0;
  bool allow_any_fanout = false;
  std::string blocklist, root_cause_map, failures_path, reports_path, seeds_path;
  double min_confidence = -1.0;
  std::size_t k = 50;
  std::uint64_t sample_seed = 0;

  auto* harvest_cmd = app.add_subcommand("harvest", "run the target model and keep its failures");
  add_common(harvest_cmd, common);
  harvest_cmd->add_option("--seeds", seeds, "seed files, optionally fmt:path")->required();
  harvest_cmd->add_option("--format", format, "hotpot|kgqa|wtq|native");
  harvest_cmd->add_option("--out", out_path, "failures.jsonl")->required();

  auto* analyze_cmd = app.add_subcommand("analyze", "error analysis of failures");
  add_common(analyze_cmd, common);
  add_ablations(analyze_cmd, ablate, true, false, false);
  analyze_cmd->add_option("--failures", in_path, "failures.jsonl")->required();
  analyze_cmd->add_option("--out", out_path, "reports.jsonl")->required();

  auto* synth_cmd = app.add_subcommand("synth", "synthesize K and R candidates from reports");
  add_common(synth_cmd, common);
  add_ablations(synth_cmd, ablate, false, true, false);
  synth_cmd->add_option("--reports", in_path, "reports.jsonl")->required();
  synth_cmd->add_option("--n", n, "instances per failure case (5-10)");
  synth_cmd->add_flag("--allow-any-fanout", allow_any_fanout, "lift the 5-10 bound on --n");
  synth_cmd->add_option("--blocklist", blocklist, "extra real-entity names, one per line");
  synth_cmd->add_option("--out-dir", out_dir, "directory for candidates_*.jsonl");

  auto* gate_cmd = app.add_subcommand("gate", "answerability and consistency review");
  add_common(gate_cmd, common);
  add_ablations(gate_cmd, ablate, false, false, true);
  gate_cmd->add_option("--candidates", inputs, "candidate files")->required();
  gate_cmd->add_option("--min-confidence", min_confidence, "also drop low-confidence keeps");
  gate_cmd->add_option("--out-dir", out_dir, "directory for dataset.jsonl and rejected.jsonl");

  auto* stats_cmd = app.add_subcommand("stats", "dataset statistics and root-cause distribution");
  stats_cmd->add_option("--dataset", in_path, "dataset.jsonl")->required();
  stats_cmd->add_option("--seeds", seeds, "seed files, optionally fmt:path")->required();
  stats_cmd->add_option("--format", format, "format of --seeds without a prefix");
  stats_cmd->add_option("--failures", failures_path, "failures.jsonl")->required();
  stats_cmd->add_option("--reports", reports_path, "reports.jsonl (for the failure distribution)");
  stats_cmd->add_option("--root-cause-map", root_cause_map, "CSV fine,coarse");
  stats_cmd->add_option("--out-dir", out_dir, "directory for stats.json and root_cause_dist.csv");

  auto* eval_cmd = app.add_subcommand("eval", "exact-match evaluation of a model on a dataset");
  add_common(eval_cmd, common);
  eval_cmd->add_option("--dataset", in_path, "dataset.jsonl")->required();
  eval_cmd->add_option("--out", out_path, "eval_table.csv");
  eval_cmd->add_option("--root-cause-out", reports_path, "per-root-cause accuracy CSV");

  auto* sample_cmd = app.add_subcommand("sample-human", "export a human-evaluation sample");
  sample_cmd->add_option("--dataset", in_path, "dataset.jsonl")->required();
  sample_cmd->add_option("--k", k, "sample size");
  sample_cmd->add_option("--seed", sample_seed, "random seed");
  sample_cmd->add_option("--out", out_path, "human_eval_sample.csv");

  auto* import_cmd = app.add_subcommand("import-human", "aggregate filled human-evaluation sheets");
  import_cmd->add_option("--csv", inputs, "filled CSV files")->required();
  import_cmd->add_option("--out", out_path, "summary CSV (stdout when omitted)");

  auto* run_cmd = app.add_subcommand("run", "whole pipeline");
  add_common(run_cmd, common);
  add_ablations(run_cmd, ablate, true, true, true);
  run_cmd->add_option("--seeds", seeds, "seed files, optionally fmt:path");
  run_cmd->add_option("--format", format, "format of --seeds without a prefix");
  run_cmd->add_option("--n", n, "instances per failure case (5-10)");
  run_cmd->add_flag("--allow-any-fanout", allow_any_fanout, "lift the 5-10 bound on --n");
  run_cmd->add_option("--blocklist", blocklist, "extra real-entity names");
  run_cmd->add_option("--min-confidence", min_confidence, "also drop low-confidence keeps");
  run_cmd->add_option("--root-cause-map", root_cause_map, "CSV fine,coarse");
  run_cmd->add_option("--out-dir", out_dir, "run directory");

  CLI11_PARSE(app, argc, argv);

  try {
    auto cfg = build_config(common, ablate);
    if (n > 0) cfg.fanout = n;
    if (allow_any_fanout) cfg.allow_any_fanout = true;
    if (!blocklist.empty()) cfg.blocklist = blocklist;
    if (min_confidence >= 0.0) cfg.min_confidence = min_confidence;
    if (!root_cause_map.empty()) cfg.root_cause_map = root_cause_map;

    if (*harvest_cmd) {
      auto gw = config::make_gateway(cfg, api_key());
      auto loaded = pipeline::load_seeds(seed_specs(seeds, format));
      auto r = harvest::run(loaded.seeds, *gw, cfg.models.for_role("target"), cfg.workers);
      jsonl::write(out_path, r.failures);
      for (const auto& [id, msg] : r.errors) spdlog::error("harvest: {}: {}", id, msg);
      std::cout << r.summary() << "\n";
      return 0;
    }
    if (*analyze_cmd) {
      require(in_path);
      auto gw = config::make_gateway(cfg, api_key());
      auto failures = jsonl::read<FailureCase>(in_path);
      auto r = analysis::analyze_all(failures, *gw, cfg.models, cfg.workers,
                                     cfg.ablations.no_error_analysis);
      jsonl::write(out_path, r.cases);
      std::cout << "analyzed " << r.cases.size() << ", skipped " << r.skipped.size() << "\n";
      return 0;
    }
    if (*synth_cmd) {
      require(in_path);
      cfg.validate();
      auto gw = config::make_gateway(cfg, api_key());
      auto cases = jsonl::read<AnalyzedCase>(in_path);
      const auto policy = validate::EntityPolicy::load(
          cfg.blocklist ? std::optional<std::string>(cfg.blocklist->string()) : std::nullopt);
      auto r = synth::synthesize_all(cases, *gw, cfg.models, cfg.workers,
                                     pipeline::synth_options(cfg, &policy));
      fs::create_directories(out_dir);
      jsonl::write(fs::path(out_dir) / pipeline::files::kCandidatesK, r.k_candidates);
      jsonl::write(fs::path(out_dir) / pipeline::files::kCandidatesR, r.r_candidates);
      pipeline::write_rejected_candidates(fs::path(out_dir) / pipeline::files::kCandidatesRejected,
                                          r.rejected);
      pipeline::RunSummary s;
      s.k_candidates = r.k_candidates.size();
      s.r_candidates = r.r_candidates.size();
      s.rejected_candidates = r.rejected.size();
      std::cout << "K " << s.k_candidates << ", R " << s.r_candidates << ", rejected "
                << s.rejected_candidates << "\n";
      return s.exit_code();
    }
    if (*gate_cmd) {
      std::vector<SynthesizedInstance> candidates;
      for (const auto& p : inputs) {
        require(p);
        auto part = jsonl::read<SynthesizedInstance>(p);
        candidates.insert(candidates.end(), part.begin(), part.end());
      }
      std::shared_ptr<llm::Gateway> gw;
      if (!cfg.ablations.no_gating) gw = config::make_gateway(cfg, api_key());
      else gw = std::make_shared<llm::Gateway>(std::make_shared<llm::CallbackProvider>(
          "none", [](const llm::CompletionRequest&) -> std::string {
            throw Error("NoProvider", "gating is disabled");
          }));
      auto r = gating::gate_all(candidates, *gw, cfg.models, cfg.workers, pipeline::gate_options(cfg));
      fs::create_directories(out_dir);
      jsonl::write(fs::path(out_dir) / pipeline::files::kDataset, r.kept);
      pipeline::write_gate_drops(fs::path(out_dir) / pipeline::files::kRejected, r.dropped);
      std::cout << "kept " << r.kept.size() << ", dropped " << r.dropped.size() << "\n";
      return 0;
    }
    if (*stats_cmd) {
      require(in_path);
      require(failures_path);
      auto dataset = jsonl::read<SynthesizedInstance>(in_path);
      auto loaded = pipeline::load_seeds(seed_specs(seeds, format));
      auto failures = jsonl::read<FailureCase>(failures_path);
      auto st = stats::compute_stats(dataset, loaded.seeds, failures);
      std::vector<AnalyzedCase> reports;
      if (!reports_path.empty()) {
        require(reports_path);
        reports = jsonl::read<AnalyzedCase>(reports_path);
      }
      stats::GroupMap groups;
      if (cfg.root_cause_map) groups = stats::load_group_map(jsonl::read_file(*cfg.root_cause_map));
      fs::create_directories(out_dir);
      write_text(fs::path(out_dir) / pipeline::files::kStats, stats::to_json(st).dump(2) + "\n");
      write_text(fs::path(out_dir) / pipeline::files::kRootCauseDist,
                 stats::root_cause_dist_csv(reports, dataset, groups));
      std::cout << stats::to_json(st).dump(2) << "\n";
      return 0;
    }
    if (*eval_cmd) {
      require(in_path);
      auto gw = config::make_gateway(cfg, api_key());
      auto dataset = jsonl::read<SynthesizedInstance>(in_path);
      auto table = stats::evaluate(dataset, *gw, cfg.models.for_role("target"), cfg.workers);
      const auto body = stats::eval_csv({table});
      if (out_path.empty()) std::cout << body;
      else write_text(out_path, body);
      if (!reports_path.empty()) write_text(reports_path, stats::root_cause_accuracy_csv({table}));
      return 0;
    }
    if (*sample_cmd) {
      require(in_path);
      auto dataset = jsonl::read<SynthesizedInstance>(in_path);
      const auto body = stats::human_eval_csv(stats::sample_for_human_eval(dataset, k, sample_seed));
      if (out_path.empty()) std::cout << body;
      else write_text(out_path, body);
      return 0;
    }
    if (*import_cmd) {
      std::vector<std::string> bodies;
      for (const auto& p : inputs) {
        require(p);
        bodies.push_back(jsonl::read_file(p));
      }
      const auto body = stats::human_eval_summary_csv(stats::import_human_eval(bodies));
      if (out_path.empty()) std::cout << body;
      else write_text(out_path, body);
      return 0;
    }
    if (*run_cmd) {
      if (!seeds.empty()) cfg.seeds = seed_specs(seeds, format);
      if (run_cmd->count("--out-dir") > 0 || common.config_path.empty()) cfg.out_dir = out_dir;
      auto gw = config::make_gateway(cfg, api_key());
      auto s = pipeline::run(cfg, *gw);
      std::cout << s.to_json().dump(2) << "\n";
      const auto u = gw->usage();
      spdlog::info("usage: {} calls, {} cache hits, {} provider calls", u.calls, u.cache_hits,
                   u.provider_calls);
      return s.exit_code();
    }
  } catch (const Error& e) {
    std::cerr << "stresseval: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "stresseval: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
