#pragma once

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "stresseval/gateway.hpp"
#include "stresseval/seed_ingest.hpp"

namespace stresseval::config {

struct Ablations {
  bool no_error_analysis = false;
  bool no_gating = false;
  bool no_black_box = false;
  bool no_freeze_source = false;
  bool no_virtual_source = false;
  bool no_skeleton = false;
  bool operator==(const Ablations&) const = default;
};

struct SeedSpec {
  ingest::SeedFormat format = ingest::SeedFormat::Native;
  std::filesystem::path path;
};

// "fmt:path" or a bare path read with `default_format`.
SeedSpec parse_seed_spec(const std::string& spec, ingest::SeedFormat default_format);

struct PipelineConfig {
  // provider
  std::string base_url;
  std::optional<std::filesystem::path> mock_fixtures;
  int timeout_seconds = 120;
  llm::RoleModels models;
  // retry / cache
  int max_attempts = 4;
  int base_backoff_ms = 500;
  std::optional<std::filesystem::path> cache_dir;
  std::optional<std::filesystem::path> usage_log;
  // pipeline
  int fanout = 7;
  bool allow_any_fanout = false;
  int workers = 4;
  std::optional<double> min_confidence;
  std::optional<std::filesystem::path> blocklist;
  std::optional<std::filesystem::path> root_cause_map;
  std::filesystem::path out_dir = "out";
  std::vector<SeedSpec> seeds;
  Ablations ablations;

  // Throws ValidationError(InvalidConfig).
  void validate() const;
};

// Sections and keys:
//   [provider] base_url, model, mock_fixtures, timeout_seconds
//   [models]   <role> = <model>   (target, analyzer, canonicalizer, generator, reviewer)
//   [retry]    max_attempts, base_backoff_ms
//   [cache]    dir, usage_log
//   [pipeline] fanout, allow_any_fanout, workers, min_confidence, blocklist,
//              root_cause_map, out_dir, seeds (comma separated fmt:path)
//   [ablation] no_error_analysis, no_gating, no_black_box, no_freeze_source,
//              no_virtual_source, no_skeleton
// Values overwrite `cfg`; unknown sections/keys and bad values throw
// ValidationError(InvalidConfig).
void apply_ini(const std::string& text, PipelineConfig& cfg);
void load_ini_file(const std::filesystem::path& path, PipelineConfig& cfg);

// Mock provider when fixtures are configured, otherwise the HTTP provider
// with `api_key` (from STRESSEVAL_API_KEY). Throws ValidationError(NoProvider).
std::shared_ptr<llm::Gateway> make_gateway(const PipelineConfig& cfg,
                                           const std::optional<std::string>& api_key);

}  // namespace stresseval::config
