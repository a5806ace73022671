#include "stresseval/text.hpp"

#include <algorithm>
#include <cctype>

#include "stresseval/errors.hpp"

namespace stresseval::text {
namespace {

char lower(char c) {
  return static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
}

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

bool is_word(char c) {
  auto u = static_cast<unsigned char>(c);
  return u >= 0x80 || std::isalnum(u) != 0 || c == '_';
}

}  // namespace

std::string to_lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(), lower);
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && is_space(s[b])) ++b;
  while (e > b && is_space(s[e - 1])) --e;
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.emplace_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  return out;
}

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && is_space(s[i])) ++i;
    std::size_t j = i;
    while (j < s.size() && !is_space(s[j])) ++j;
    if (j > i) out.emplace_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::vector<std::string> lines(std::string_view s) {
  auto out = split(s, '\n');
  for (auto& l : out)
    if (!l.empty() && l.back() == '\r') l.pop_back();
  return out;
}

bool starts_with_ci(std::string_view s, std::string_view prefix) {
  if (prefix.size() > s.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i)
    if (lower(s[i]) != lower(prefix[i])) return false;
  return true;
}

bool contains_ci(std::string_view haystack, std::string_view needle) {
  if (needle.empty()) return true;
  return to_lower(haystack).find(to_lower(needle)) != std::string::npos;
}

bool contains_word_ci(std::string_view haystack, std::string_view needle) {
  if (needle.empty()) return false;
  const std::string h = to_lower(haystack);
  const std::string n = to_lower(needle);
  for (auto pos = h.find(n); pos != std::string::npos; pos = h.find(n, pos + 1)) {
    bool left_ok = pos == 0 || !is_word(h[pos - 1]) || !is_word(n.front());
    std::size_t end = pos + n.size();
    bool right_ok = end == h.size() || !is_word(h[end]) || !is_word(n.back());
    if (left_ok && right_ok) return true;
  }
  return false;
}

std::size_t token_edit_distance(std::string_view a, std::string_view b) {
  const auto ta = split_ws(to_lower(a));
  const auto tb = split_ws(to_lower(b));
  std::vector<std::size_t> prev(tb.size() + 1), cur(tb.size() + 1);
  for (std::size_t j = 0; j <= tb.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= ta.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= tb.size(); ++j) {
      std::size_t sub = prev[j - 1] + (ta[i - 1] == tb[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[tb.size()];
}

std::string canonicalize_root_cause(std::string_view label) {
  std::string out;
  bool pending_sep = false;
  for (char c : label) {
    if (is_space(c) || c == '-' || c == '_') {
      pending_sep = true;
      continue;
    }
    char l = lower(c);
    bool keep = (l >= 'a' && l <= 'z') || (l >= '0' && l <= '9');
    if (!keep) continue;
    if (pending_sep && !out.empty()) out += '_';
    pending_sep = false;
    out += l;
  }
  if (out.empty())
    throw ValidationError("EmptyLabel", "root-cause label '" + std::string(label) +
                                            "' has no usable characters");
  return out;
}

std::size_t count_ws_tokens(std::string_view s) { return split_ws(s).size(); }

}  // namespace stresseval::text
