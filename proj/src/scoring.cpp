#include "stresseval/scoring.hpp"

#include <cctype>
#include <optional>
#include <set>
#include <vector>

#include "stresseval/text.hpp"

namespace stresseval::scoring {
namespace {

bool is_article(std::string_view w) { return w == "a" || w == "an" || w == "the"; }

std::set<std::string> answer_set(const std::string& normalized) {
  std::set<std::string> out;
  for (auto& item : text::split(normalized, ',')) {
    auto t = text::trim(item);
    if (!t.empty()) out.insert(t);
  }
  return out;
}

}  // namespace

std::string normalize_answer(std::string_view in) {
  std::string s;
  s.reserve(in.size());
  for (char c : in) {
    auto u = static_cast<unsigned char>(c);
    if (u < 0x80 && std::ispunct(u) && c != ',') continue;
    s += u < 0x80 ? static_cast<char>(std::tolower(u)) : c;
  }
  // Keep commas as their own tokens so "a, b" and "a ,b" normalize alike.
  std::string spaced;
  for (char c : s) {
    if (c == ',') {
      spaced += " , ";
    } else {
      spaced += c;
    }
  }
  std::string out;
  for (const auto& w : text::split_ws(spaced)) {
    if (is_article(w)) continue;
    if (w == ",") {
      out += ",";
      continue;
    }
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

bool exact_match(std::string_view pred, std::string_view gold) {
  const auto p = normalize_answer(pred);
  const auto g = normalize_answer(gold);
  if (g == "none") return p == "none" || p == "no answer" || p.empty();
  if (g.find(',') != std::string::npos) return answer_set(p) == answer_set(g);
  return p == g;
}

std::string extract_final_answer(std::string_view raw) {
  const auto ls = text::lines(raw);
  std::optional<std::size_t> hit;
  std::size_t col = 0;
  for (std::size_t i = 0; i < ls.size(); ++i) {
    auto pos = text::to_lower(ls[i]).rfind("answer:");
    if (pos != std::string::npos) {
      hit = i;
      col = pos + 7;
    }
  }
  if (hit) {
    auto rest = text::trim(std::string_view(ls[*hit]).substr(col));
    if (!rest.empty()) return rest;
    for (std::size_t i = *hit + 1; i < ls.size(); ++i) {
      auto t = text::trim(ls[i]);
      if (!t.empty()) return t;
    }
    return "";
  }
  for (auto it = ls.rbegin(); it != ls.rend(); ++it) {
    auto t = text::trim(*it);
    if (!t.empty()) return t;
  }
  return "";
}

}  // namespace stresseval::scoring
