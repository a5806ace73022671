#pragma once

#include <filesystem>
#include <memory>
#include <ostream>
#include <utility>
#include <string>
#include <vector>

#include "stresseval/config.hpp"
#include "stresseval/gateway.hpp"

// A stand-in backbone model for the five-seed fixture (t1 text-K, t2 text-R,
// k1 KG-K, k2 KG-R, w1 table-R) and the three-seed harvest fixture. Replies
// depend only on the request payload, never on call order, so they are
// stable across worker counts.
namespace stresseval::testing {

std::filesystem::path fixtures_dir();

// hotpot:five_text.jsonl, kgqa:five_kg.jsonl, wtq:five_table.jsonl
std::vector<config::SeedSpec> five_seed_specs();
config::SeedSpec harvest_three_spec();

// Throws MockMiss for anything it has no script for.
std::string scripted_reply(const llm::CompletionRequest& req);
std::shared_ptr<llm::Provider> scripted_provider();

// The analyzer reply the script gives for a report prompt id
// ("text_r_report", "kg_k_report", ...), already parsed.
Json sample_report(const std::string& prompt_id);

// "full" plus every single ablation, in a fixed order.
std::vector<std::pair<std::string, config::Ablations>> ablation_variants();

// Pipeline config for the five-seed fixture.
config::PipelineConfig five_seed_config(const std::filesystem::path& out_dir,
                                        const config::Ablations& ab = {}, int workers = 1);

// Runs every variant (and the three-seed harvest fixture) through a recording
// provider so `dir` ends up holding a complete mock fixture set. Run outputs
// go under `scratch`.
void record_fixtures(const std::filesystem::path& dir, const std::filesystem::path& scratch,
                     std::ostream* log = nullptr);

// Per-candidate fictional names, indexed by candidate_index.
const std::vector<std::string>& text_writers();
const std::vector<std::string>& table_clubs();

// Questions the reviewer is scripted to turn down or to hesitate on.
inline constexpr const char* kInconsistentQuestion =
    "What gender is the father shared by Justin Bieber and his sibling?";
inline constexpr const char* kGarbledReviewQuestion =
    "Which company created the character that Carl Barks is best known for drawing?";

}  // namespace stresseval::testing
