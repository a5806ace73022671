#pragma once

#include <string>
#include <string_view>
#include <vector>

// Small ASCII-oriented string helpers shared across stages. Bytes >= 0x80 are
// passed through untouched and treated as word characters.
namespace stresseval::text {

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);
std::vector<std::string> split(std::string_view s, char sep);
std::vector<std::string> split_ws(std::string_view s);
std::string join(const std::vector<std::string>& parts, std::string_view sep);
std::vector<std::string> lines(std::string_view s);

bool starts_with_ci(std::string_view s, std::string_view prefix);
bool contains_ci(std::string_view haystack, std::string_view needle);
// Case-insensitive match of `needle` bounded by non-word characters.
bool contains_word_ci(std::string_view haystack, std::string_view needle);

// Levenshtein distance over lowercase whitespace tokens.
std::size_t token_edit_distance(std::string_view a, std::string_view b);

// Lowercase snake_case label; whitespace and hyphen runs become "_", other
// characters outside [a-z0-9_] are dropped. Throws ValidationError(EmptyLabel)
// when nothing survives.
std::string canonicalize_root_cause(std::string_view label);

std::size_t count_ws_tokens(std::string_view s);

}  // namespace stresseval::text
