#pragma once

#include <string>
#include <string_view>
#include <vector>

// RFC 4180 CSV: CRLF record separators, fields quoted only when they contain
// a comma, quote, CR or LF, quotes doubled inside quoted fields.
namespace stresseval::csv {

using Row = std::vector<std::string>;

std::string escape(std::string_view field);
std::string format_row(const Row& row);
std::string format(const std::vector<Row>& rows);

// Accepts CRLF or bare LF. A trailing line break does not start a record.
// Throws ValidationError(MalformedCsv) on an unterminated quoted field or
// stray characters after a closing quote.
std::vector<Row> parse(std::string_view text);

}  // namespace stresseval::csv
