#include "thyropath/text_match.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>

namespace thyropath {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }
bool is_alpha(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
bool is_alnum(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }
char lower(char c) { return static_cast<char>(std::tolower(static_cast<unsigned char>(c))); }

// Spelled-out numbers accepted by the numeric parser.
struct WordNumber {
  const char* word;
  double value;
};

constexpr WordNumber kWordNumbers[] = {
    {"zero", 0},     {"one", 1},        {"two", 2},       {"three", 3},   {"four", 4},
    {"five", 5},     {"six", 6},        {"seven", 7},     {"eight", 8},   {"nine", 9},
    {"ten", 10},     {"eleven", 11},    {"twelve", 12},   {"thirteen", 13},
    {"fourteen", 14},{"fifteen", 15},   {"sixteen", 16},  {"seventeen", 17},
    {"eighteen", 18},{"nineteen", 19},  {"twenty", 20},
};

bool boundary_ok_before(std::string_view text, std::size_t pos) {
  if (pos == 0) return true;
  char prev = text[pos - 1];
  if (!is_alnum(prev)) return true;
  // Allow a letter to begin right after a digit ("pT1|N1b").
  return is_digit(prev) && is_alpha(text[pos]);
}

bool boundary_ok_after(std::string_view text, std::size_t end) {
  if (end >= text.size()) return true;
  char next = text[end];
  if (!is_alnum(next)) return true;
  return is_digit(text[end - 1]) && is_alpha(next);
}

}  // namespace

std::string normalize_phrase(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  bool pending_space = false;
  for (char c : s) {
    if (is_space(c)) {
      if (!out.empty()) pending_space = true;
      continue;
    }
    if (pending_space) {
      out.push_back(' ');
      pending_space = false;
    }
    out.push_back(lower(c));
  }
  return out;
}

namespace {

std::optional<std::size_t> match_impl(std::string_view text, std::size_t pos,
                                      std::string_view needle, bool tail_boundary) {
  if (needle.empty() || pos >= text.size()) return std::nullopt;
  if (!boundary_ok_before(text, pos)) return std::nullopt;
  std::size_t t = pos;
  for (std::size_t i = 0; i < needle.size(); ++i) {
    char nc = needle[i];
    if (nc == ' ') {
      if (t >= text.size() || !is_space(text[t])) return std::nullopt;
      while (t < text.size() && is_space(text[t])) ++t;
      continue;
    }
    if (t >= text.size() || lower(text[t]) != nc) {
      // Stem elision: a trailing 'e' may be dropped before an inflected
      // ending ("measure" → "measuring"). Prefix mode only.
      if (!tail_boundary && i + 1 == needle.size() && nc == 'e' && t > pos &&
          t < text.size() && is_alpha(text[t]))
        return t;
      return std::nullopt;
    }
    ++t;
  }
  if (tail_boundary && !boundary_ok_after(text, t)) return std::nullopt;
  return t;
}

}  // namespace

std::optional<std::size_t> match_phrase_at(std::string_view text, std::size_t pos,
                                           std::string_view needle) {
  return match_impl(text, pos, needle, true);
}

std::optional<std::size_t> match_phrase_prefix_at(std::string_view text, std::size_t pos,
                                                  std::string_view needle) {
  return match_impl(text, pos, needle, false);
}

std::vector<PhraseHit> find_phrases(std::string_view text, const std::vector<std::string>& needles) {
  std::vector<PhraseHit> hits;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t best_end = 0;
    std::size_t best_needle = 0;
    bool found = false;
    for (std::size_t i = 0; i < needles.size(); ++i) {
      auto end = match_phrase_at(text, pos, needles[i]);
      if (end && (!found || *end > best_end)) {
        best_end = *end;
        best_needle = i;
        found = true;
      }
    }
    if (found) {
      hits.push_back({pos, best_end, best_needle});
      pos = best_end;
    } else {
      ++pos;
    }
  }
  return hits;
}

std::vector<PhraseHit> find_phrases_overlapping(std::string_view text,
                                                const std::vector<std::string>& needles) {
  std::vector<PhraseHit> hits;
  for (std::size_t pos = 0; pos < text.size(); ++pos) {
    std::size_t best_end = 0;
    std::size_t best_needle = 0;
    bool found = false;
    for (std::size_t i = 0; i < needles.size(); ++i) {
      auto end = match_phrase_at(text, pos, needles[i]);
      if (end && (!found || *end > best_end)) {
        best_end = *end;
        best_needle = i;
        found = true;
      }
    }
    if (found) hits.push_back({pos, best_end, best_needle});
  }
  return hits;
}

std::size_t sentence_end(std::string_view text, std::size_t from) {
  for (std::size_t i = from; i < text.size(); ++i) {
    if (text[i] != '.') continue;
    if (i + 1 < text.size() && !is_space(text[i + 1])) continue;
    // Protect unit abbreviations: "cm." / "mm." do not end a capture.
    std::size_t w = i;
    while (w > 0 && is_alpha(text[w - 1])) --w;
    std::string_view word = text.substr(w, i - w);
    std::string low;
    for (char c : word) low.push_back(lower(c));
    if (low == "cm" || low == "mm") continue;
    return i;
  }
  return text.size();
}

namespace {

// Parse a plain decimal number at pos; group-internal helper.
struct RawNumber {
  std::size_t begin, end;
  double value;
  bool integral;
};

std::optional<RawNumber> parse_raw_number(std::string_view text, std::size_t pos) {
  if (pos >= text.size()) return std::nullopt;
  if (is_digit(text[pos])) {
    if (pos > 0 && is_alnum(text[pos - 1])) return std::nullopt;
    std::size_t e = pos;
    while (e < text.size() && is_digit(text[e])) ++e;
    bool integral = true;
    if (e + 1 < text.size() && text[e] == '.' && is_digit(text[e + 1])) {
      integral = false;
      ++e;
      while (e < text.size() && is_digit(text[e])) ++e;
    }
    if (e < text.size() && is_alpha(text[e])) return std::nullopt;  // "8th", "2nd"
    double v = std::strtod(std::string(text.substr(pos, e - pos)).c_str(), nullptr);
    return RawNumber{pos, e, v, integral};
  }
  if (is_alpha(text[pos]) && boundary_ok_before(text, pos)) {
    for (const auto& wn : kWordNumbers) {
      auto end = match_phrase_at(text, pos, wn.word);
      if (end) return RawNumber{pos, *end, wn.value, true};
    }
  }
  return std::nullopt;
}

}  // namespace

std::vector<NumberGroup> find_number_groups(std::string_view text, std::size_t begin,
                                            std::size_t end) {
  std::vector<NumberGroup> groups;
  std::size_t pos = begin;
  end = std::min(end, text.size());
  while (pos < end) {
    auto first = parse_raw_number(text, pos);
    if (!first || first->begin >= end) {
      ++pos;
      continue;
    }
    NumberGroup g;
    g.begin = first->begin;
    g.end = first->end;
    g.value = first->value;
    g.integral = first->integral;
    // Dimension chain: "a x b x c".
    std::size_t p = first->end;
    while (true) {
      std::size_t q = p;
      while (q < end && is_space(text[q])) ++q;
      if (q < end && (text[q] == 'x' || text[q] == 'X')) {
        std::size_t r = q + 1;
        while (r < end && is_space(text[r])) ++r;
        auto next = parse_raw_number(text, r);
        if (next && next->end <= end) {
          g.value = std::max(g.value, next->value);
          g.integral = g.integral && next->integral;
          g.end = next->end;
          p = next->end;
          continue;
        }
      }
      break;
    }
    // Optional unit.
    std::size_t q = p;
    while (q < end && is_space(text[q])) ++q;
    static const char* kCm[] = {"centimeters", "centimeter", "cm"};
    static const char* kMm[] = {"millimeters", "millimeter", "mm"};
    bool unit_found = false;
    for (const char* u : kCm) {
      auto e = match_phrase_at(text, q, u);
      if (e) {
        g.has_unit = true;
        g.end = *e;
        unit_found = true;
        break;
      }
    }
    if (!unit_found) {
      for (const char* u : kMm) {
        auto e = match_phrase_at(text, q, u);
        if (e) {
          g.has_unit = true;
          g.unit_mm = true;
          g.value = g.value / 10.0;
          g.end = *e;
          unit_found = true;
          break;
        }
      }
    }
    if (g.end > end) g.end = end;
    groups.push_back(g);
    pos = g.end;
  }
  return groups;
}

}  // namespace thyropath
