#pragma once

#include <array>
#include <string_view>

// Closed vocabularies that analyzer and generator outputs must draw from.
namespace stresseval::vocab {

inline constexpr std::array<std::string_view, 10> kTableReasoningFamilies = {
    "lookup_single_cell",     "filter_then_lookup",       "filter_then_aggregate",
    "aggregate_then_compare", "normalize_then_compare",   "compute_difference_or_ratio",
    "argmax_argmin",          "temporal_ordering",        "string_parse_then_reason",
    "multi_hop_composition",
};

inline constexpr std::array<std::string_view, 10> kTableBottlenecks = {
    "unit_normalization",     "format_parsing",   "aggregation",
    "comparison_argmin_argmax", "arithmetic",     "filtering_logic",
    "temporal_ordering",      "multi_step_composition", "string_parse_then_reason",
    "other_reasoning",
};

inline constexpr std::array<std::string_view, 15> kTableOps = {
    "select_rows",     "select_columns", "filter_rows",     "lookup_cell",
    "normalize_unit",  "parse_number",   "aggregate_sum",   "aggregate_avg",
    "aggregate_count", "compare_argmin", "compare_argmax",  "sort_by_time",
    "compute_difference", "compute_ratio", "compute_percent",
};

// Labels of the four sections a table trigger must contain, in this order.
inline constexpr std::array<std::string_view, 4> kTableTriggerSections = {
    "Surface pattern:", "Reasoning requirement:", "Failure signature:",
    "Anti-ambiguity constraints:",
};

inline constexpr std::array<std::string_view, 3> kKgKnowledgePatterns = {
    "Missing Entity Information", "Missing Attribute Information",
    "Missing Inter-Triple Relation",
};

inline constexpr std::array<std::string_view, 7> kKgReasoningPatterns = {
    "Partial Entity Recognition Error", "Multi-hop composition failure",
    "Path confusion",                   "Relation directionality confusion",
    "Temporal constraint Error",        "Constraint coverage Error",
    "Type constraint violation",
};

template <std::size_t N>
constexpr bool contains(const std::array<std::string_view, N>& vocab, std::string_view v) {
  for (auto s : vocab)
    if (s == v) return true;
  return false;
}

}  // namespace stresseval::vocab
