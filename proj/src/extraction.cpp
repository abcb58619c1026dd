#include "thyropath/extraction.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "thyropath/text_match.hpp"

namespace thyropath {

namespace {

constexpr std::size_t kMaxGap = 250;  // widest wildcard capture zone, in characters

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

Mention make_mention(const ReportDocument& doc, Category c, std::size_t begin, std::size_t end,
                     AttributeValue value) {
  Mention m;
  m.category = c;
  m.begin = begin;
  m.end = end;
  m.surface = doc.text.substr(begin, end - begin);
  m.value = std::move(value);
  return m;
}

// Start of the sentence containing pos (one past the previous
// terminator), used for backward numeric capture.
std::size_t sentence_begin(std::string_view text, std::size_t pos) {
  for (std::size_t i = pos; i > 1; --i) {
    char c = text[i - 1];
    if (c == '\n' && i >= 2 && text[i - 2] == '\n') return i;
    if (c != '.') continue;
    if (i < text.size() && !is_space(text[i])) continue;
    std::size_t w = i - 1;
    while (w > 0 && std::isalpha(static_cast<unsigned char>(text[w - 1]))) --w;
    std::string low;
    for (std::size_t k = w; k + 1 <= i - 1; ++k)
      low.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(text[k]))));
    if (low == "cm" || low == "mm") continue;
    return i;
  }
  return 0;
}

bool group_usable(const NumberGroup& g, ValueKind kind) {
  if (kind == ValueKind::Length) {
    if (!g.has_unit) return false;
    return g.value >= 0.0 && g.value < 100.0;
  }
  return g.integral && !g.has_unit;
}

struct ClaimSet {
  std::vector<std::pair<std::size_t, std::size_t>> spans;

  bool overlaps(std::size_t b, std::size_t e) const {
    for (const auto& [cb, ce] : spans)
      if (b < ce && cb < e) return true;
    return false;
  }
  void claim(std::size_t b, std::size_t e) { spans.emplace_back(b, e); }
};

AttributeValue numeric_value(ValueKind kind, const NumberGroup& g) {
  if (kind == ValueKind::Length) return AttributeValue::length_cm(g.value);
  return AttributeValue::count(static_cast<long>(g.value));
}

}  // namespace

std::vector<Mention> extract_categorical(const ReportDocument& doc, const Segment& seg,
                                         const ExtractionLexicon& lex) {
  std::vector<Mention> out;
  for (const auto& hit : lex.find_attribute_hits(seg.category, doc.text, seg.body_begin,
                                                 seg.body_end)) {
    out.push_back(make_mention(doc, seg.category, hit.begin, hit.end,
                               lex.value_for_canonical(seg.category, hit.pattern->canonical)));
  }
  return out;
}

std::vector<Mention> extract_numeric_structured(const ReportDocument& doc, const Segment& seg,
                                                const ExtractionLexicon& lex) {
  (void)lex;
  ValueKind kind = value_kind_of(seg.category);
  std::vector<Mention> out;
  for (const auto& g : find_number_groups(doc.text, seg.body_begin, seg.body_end)) {
    // Structured bodies state the value directly, so the unit is
    // optional for lengths; bare numbers are centimeters already.
    if (kind == ValueKind::Length) {
      if (!(g.value >= 0.0 && g.value < 100.0)) continue;
      out.push_back(make_mention(doc, seg.category, g.begin, g.end,
                                 AttributeValue::length_cm(g.value)));
      break;
    }
    if (!g.integral || g.has_unit) continue;
    out.push_back(
        make_mention(doc, seg.category, g.begin, g.end, AttributeValue::count(static_cast<long>(g.value))));
    break;
  }
  return out;
}

namespace {

void capture_from_zone(const ReportDocument& doc, Category category, ValueKind kind,
                       std::size_t zone_begin, std::size_t zone_end, std::size_t anchor_begin,
                       std::size_t anchor_end, bool backward_last_only, ClaimSet& claims,
                       std::vector<Mention>& out, bool* any_number_seen) {
  auto groups = find_number_groups(doc.text, zone_begin, zone_end);
  if (!groups.empty() && any_number_seen) *any_number_seen = true;
  if (backward_last_only && !groups.empty()) {
    // keep only the group nearest the anchor
    groups.erase(groups.begin(), groups.end() - 1);
  }
  for (const auto& g : groups) {
    if (!group_usable(g, kind)) continue;
    if (claims.overlaps(g.begin, g.end)) continue;
    claims.claim(g.begin, g.end);
    out.push_back(make_mention(doc, category, g.begin, g.end, numeric_value(kind, g)));
  }
  (void)anchor_begin;
  (void)anchor_end;
}

// "(N of M)" immediately followed, within the sentence, by a lymph node
// phrase and a positivity cue; N is the involved count.
void capture_involved_of_examined(const ReportDocument& doc, ClaimSet& claims,
                                  std::vector<Mention>& out) {
  std::string_view text = doc.text;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '(') continue;
    std::size_t p = i + 1;
    while (p < text.size() && is_space(text[p])) ++p;
    std::size_t n_begin = p;
    while (p < text.size() && is_digit(text[p])) ++p;
    if (p == n_begin) continue;
    std::size_t n_end = p;
    while (p < text.size() && is_space(text[p])) ++p;
    auto of_end = match_phrase_at(text, p, "of");
    if (!of_end) continue;
    p = *of_end;
    while (p < text.size() && is_space(text[p])) ++p;
    std::size_t m_begin = p;
    while (p < text.size() && is_digit(text[p])) ++p;
    if (p == m_begin) continue;
    while (p < text.size() && is_space(text[p])) ++p;
    if (p >= text.size() || text[p] != ')') continue;
    std::size_t close = p + 1;
    std::size_t limit = sentence_end(text, close);
    bool node_then_positive = false;
    for (std::size_t q = close; q < limit && !node_then_positive; ++q) {
      auto node_end = match_phrase_at(text, q, "lymph node");
      auto nodes_end = match_phrase_at(text, q, "lymph nodes");
      std::size_t after = 0;
      if (nodes_end)
        after = *nodes_end;
      else if (node_end)
        after = *node_end;
      else
        continue;
      for (std::size_t r = after; r < limit; ++r) {
        if (match_phrase_at(text, r, "positive")) {
          node_then_positive = true;
          break;
        }
      }
      break;
    }
    if (!node_then_positive) continue;
    if (claims.overlaps(n_begin, n_end)) continue;
    long n = std::strtol(std::string(text.substr(n_begin, n_end - n_begin)).c_str(), nullptr, 10);
    claims.claim(n_begin, n_end);
    out.push_back(make_mention(doc, Category::NumberOfLymphNodesInvolved, n_begin, n_end,
                               AttributeValue::count(n)));
  }
}

}  // namespace

std::vector<Mention> extract_numeric_unstructured(const ReportDocument& doc,
                                                  const ExtractionLexicon& lex) {
  std::string_view text = doc.text;
  std::vector<Mention> out;
  ClaimSet claims;

  // Most specific targets first so the generic tumor-size templates
  // cannot steal numbers that belong to a narrower category.
  const Category order[] = {
      Category::SizeOfLargestMetastaticDeposit,
      Category::NumberOfLymphNodesInvolved,
      Category::NumberOfLymphNodesExamined,
      Category::TumorSize,
  };
  for (Category c : order) {
    const KeyStringSet* set = lex.key_strings_for(c);
    ValueKind kind = value_kind_of(c);
    if (set) {
      for (const auto& tmpl : set->templates) {
        for (std::size_t i = 0; i < text.size(); ++i) {
          // Anchors match as stems: "measure" also hits "measuring".
          auto pe = match_phrase_prefix_at(text, i, tmpl.prefix);
          if (!pe) continue;
          std::size_t prefix_end = *pe;
          bool any_number = false;
          if (tmpl.gapped()) {
            std::size_t suffix_begin = std::string_view::npos;
            std::size_t stop = std::min(text.size(), prefix_end + kMaxGap);
            for (std::size_t j = prefix_end; j < stop; ++j) {
              if (match_phrase_at(text, j, tmpl.suffix)) {
                suffix_begin = j;
                break;
              }
            }
            if (suffix_begin == std::string_view::npos) {
              // Suffix never appears: degrade to a sentence-bounded
              // forward capture ("tumor measuring 12 mm" still yields
              // 1.2 cm). An empty degraded zone is not an anchor, so
              // it raises nothing.
              capture_from_zone(doc, c, kind, prefix_end, sentence_end(text, prefix_end), i,
                                prefix_end, false, claims, out, &any_number);
              i = prefix_end - 1;
              continue;
            }
            capture_from_zone(doc, c, kind, prefix_end, suffix_begin, i, prefix_end, false,
                              claims, out, &any_number);
            if (!any_number)
              throw ExtractionError(ExtractionError::Code::MalformedNumber, i, suffix_begin,
                                    "no number inside key-string capture in document '" + doc.id +
                                        "'");
          } else {
            capture_from_zone(doc, c, kind, prefix_end, sentence_end(text, prefix_end), i,
                              prefix_end, false, claims, out, &any_number);
            if (!any_number) {
              // fall back to the nearest number before the anchor
              capture_from_zone(doc, c, kind, sentence_begin(text, i), i, i, prefix_end, true,
                                claims, out, &any_number);
            }
            if (!any_number)
              throw ExtractionError(ExtractionError::Code::MalformedNumber, i, prefix_end,
                                    "no number near key string in document '" + doc.id + "'");
          }
          i = prefix_end - 1;
        }
      }
    }
    if (c == Category::NumberOfLymphNodesInvolved && lex.involved_of_examined_extension())
      capture_involved_of_examined(doc, claims, out);
  }
  return out;
}

std::vector<Mention> extract(const ReportDocument& doc, const ExtractionLexicon& lex) {
  validate_document(doc);
  DetectedFormat fmt;
  switch (doc.format_hint) {
    case FormatHint::Structured: fmt = DetectedFormat::Structured; break;
    case FormatHint::Unstructured: fmt = DetectedFormat::Unstructured; break;
    default: fmt = detect_format(doc, lex); break;
  }

  std::vector<Mention> out;
  if (fmt == DetectedFormat::Structured) {
    for (const auto& seg : segment_structured(doc, lex)) {
      switch (value_kind_of(seg.category)) {
        case ValueKind::Length:
        case ValueKind::Count: {
          auto ms = extract_numeric_structured(doc, seg, lex);
          out.insert(out.end(), ms.begin(), ms.end());
          break;
        }
        default: {
          auto ms = extract_categorical(doc, seg, lex);
          out.insert(out.end(), ms.begin(), ms.end());
          break;
        }
      }
    }
  } else {
    for (const auto& seg : segment_unstructured(doc, lex)) {
      switch (value_kind_of(seg.category)) {
        case ValueKind::Length:
        case ValueKind::Count:
          break;  // numerics come from the key-string scan
        default: {
          auto ms = extract_categorical(doc, seg, lex);
          out.insert(out.end(), ms.begin(), ms.end());
          break;
        }
      }
    }
    auto nums = extract_numeric_unstructured(doc, lex);
    out.insert(out.end(), nums.begin(), nums.end());
  }

  std::sort(out.begin(), out.end(), [](const Mention& a, const Mention& b) {
    if (a.begin != b.begin) return a.begin < b.begin;
    if (a.end != b.end) return a.end < b.end;
    return static_cast<int>(a.category) < static_cast<int>(b.category);
  });
  out.erase(std::unique(out.begin(), out.end(),
                        [](const Mention& a, const Mention& b) {
                          return a.category == b.category && a.begin == b.begin &&
                                 a.end == b.end && a.value == b.value;
                        }),
            out.end());
  return out;
}

namespace {

int severity_rank(Category c, const AttributeValue& v) {
  if (v.kind() != ValueKind::Categorical) return 0;
  const std::string& s = v.canonical();
  switch (c) {
    case Category::Margins:
    case Category::Angioinvasion:
    case Category::LymphaticInvasion:
    case Category::LymphovascularInvasion:
    case Category::ExtranodalExtension:
      if (s == "Positive") return 1;
      if (s == "Negative") return 0;
      return -1;
    case Category::ExtrathyroidalExtension:
      if (s == "Macroscopic") return 3;
      if (s == "MicroscopicModerateSevere") return 2;
      if (s == "MicroscopicMinimal") return 1;
      if (s == "Negative") return 0;
      return -1;
    case Category::TumorFocality:
      if (s == "Multifocal") return 1;
      if (s == "Unifocal") return 0;
      return -1;
    default:
      return 0;
  }
}

bool severity_ordered(Category c) {
  switch (c) {
    case Category::Margins:
    case Category::Angioinvasion:
    case Category::LymphaticInvasion:
    case Category::LymphovascularInvasion:
    case Category::ExtranodalExtension:
    case Category::ExtrathyroidalExtension:
    case Category::TumorFocality:
      return true;
    default:
      return false;
  }
}

}  // namespace

FeatureRecord to_feature_record(const ReportDocument& doc, std::vector<Mention> mentions) {
  (void)doc;
  std::sort(mentions.begin(), mentions.end(), [](const Mention& a, const Mention& b) {
    if (a.begin != b.begin) return a.begin < b.begin;
    return a.end < b.end;
  });

  FeatureRecord rec;
  for (Category c : all_categories()) {
    const Mention* chosen = nullptr;
    double best_len = -1.0;
    long best_count = -1;
    int best_rank = -2;
    for (const auto& m : mentions) {
      if (m.category != c) continue;
      switch (value_kind_of(c)) {
        case ValueKind::Length:
          if (m.value.cm() > best_len) {
            best_len = m.value.cm();
            chosen = &m;
          }
          break;
        case ValueKind::Count:
          if (m.value.n() > best_count) {
            best_count = m.value.n();
            chosen = &m;
          }
          break;
        default:
          if (severity_ordered(c)) {
            int r = severity_rank(c, m.value);
            if (r > best_rank) {
              best_rank = r;
              chosen = &m;
            }
          } else if (chosen == nullptr) {
            chosen = &m;  // first in document order
          }
          break;
      }
    }
    if (chosen) rec.set_slot(c, chosen->value);
  }
  rec.provenance() = std::move(mentions);
  return rec;
}

}  // namespace thyropath
