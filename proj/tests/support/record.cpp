#include "scripted.hpp"
#include "stresseval/jsonl.hpp"
#include "stresseval/pipeline.hpp"
#include "stresseval/stats.hpp"

namespace stresseval::testing {

std::vector<std::pair<std::string, config::Ablations>> ablation_variants() {
  std::vector<std::pair<std::string, config::Ablations>> v = {{"full", {}}};
  auto add = [&](const char* name, bool config::Ablations::*flag) {
    config::Ablations a;
    a.*flag = true;
    v.emplace_back(name, a);
  };
  add("no_error_analysis", &config::Ablations::no_error_analysis);
  add("no_gating", &config::Ablations::no_gating);
  add("no_black_box", &config::Ablations::no_black_box);
  add("no_freeze_source", &config::Ablations::no_freeze_source);
  add("no_virtual_source", &config::Ablations::no_virtual_source);
  add("no_skeleton", &config::Ablations::no_skeleton);
  return v;
}

config::PipelineConfig five_seed_config(const std::filesystem::path& out_dir,
                                        const config::Ablations& ab, int workers) {
  config::PipelineConfig cfg;
  cfg.seeds = five_seed_specs();
  cfg.ablations = ab;
  cfg.workers = workers;
  cfg.out_dir = out_dir;
  return cfg;
}

void record_fixtures(const std::filesystem::path& dir, const std::filesystem::path& scratch,
                     std::ostream* log) {
  std::filesystem::create_directories(dir);
  auto rec = std::make_shared<llm::RecordingProvider>(scripted_provider(), dir);
  llm::Gateway gw(rec);
  for (const auto& [name, ab] : ablation_variants()) {
    auto sum = pipeline::run(five_seed_config(scratch / name, ab), gw);
    if (log) *log << name << ": " << sum.to_json().dump() << "\n";
  }
  // So `eval` can run against the recorded fixtures too.
  auto kept = jsonl::read<SynthesizedInstance>(scratch / "full" / pipeline::files::kDataset);
  stats::evaluate(kept, gw, llm::RoleModels{}.for_role("target"), 1);
  config::PipelineConfig cfg;
  cfg.seeds = {harvest_three_spec()};
  cfg.workers = 1;
  cfg.out_dir = scratch / "harvest_three";
  pipeline::run(cfg, gw);
}

}  // namespace stresseval::testing
