#pragma once

#include <string>
#include <string_view>

namespace stresseval::scoring {

// Lowercase, strip ASCII punctuation except ',', drop the articles a/an/the,
// collapse whitespace. Commas survive because they delimit multi-answers.
std::string normalize_answer(std::string_view text);

// Normalized comparison. A gold containing commas is compared as a set of
// comma-separated items; gold "none" also accepts "no answer" and "".
bool exact_match(std::string_view pred, std::string_view gold);

// Remainder of the last line containing "answer:" (any case); when that
// remainder is empty the next non-empty line is used. Without such a line,
// the last non-empty line.
std::string extract_final_answer(std::string_view raw);

}  // namespace stresseval::scoring
