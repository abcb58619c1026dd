#include "thyropath/segmentation.hpp"

#include <algorithm>
#include <cctype>
#include <limits>

#include "thyropath/text_match.hpp"

namespace thyropath {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

struct Line {
  std::size_t begin;    // offset of first character of the line
  std::size_t content;  // first non-space character
  std::size_t end;      // offset of '\n' or text end
};

std::vector<Line> split_lines(std::string_view text) {
  std::vector<Line> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::size_t end = (nl == std::string_view::npos) ? text.size() : nl;
    std::size_t content = pos;
    while (content < end && is_space(text[content])) ++content;
    lines.push_back({pos, content, end});
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return lines;
}

struct HeaderMatch {
  Category category;
  std::size_t begin, end;  // keyword span
  std::size_t body_begin;  // after ':' when present, else after keyword
};

// Longest header keyword matching at the start of the line's content.
// The keyword must stop at the line's first ':' (when one exists before
// anything else meaningful) or at a non-alphanumeric boundary.
std::optional<HeaderMatch> match_header(std::string_view text, const Line& line,
                                        const ExtractionLexicon& lex) {
  if (line.content >= line.end) return std::nullopt;
  std::size_t colon = std::string_view::npos;
  for (std::size_t i = line.content; i < line.end; ++i) {
    if (text[i] == ':') {
      colon = i;
      break;
    }
  }
  std::optional<HeaderMatch> best;
  for (Category c : all_categories()) {
    for (const auto& kw : lex.entry(c).header_keywords) {
      auto end = match_phrase_at(text, line.content, kw);
      if (!end || *end > line.end) continue;
      if (colon != std::string_view::npos && *end > colon) continue;
      // Require the keyword to exhaust the pre-colon prefix or to stop at
      // a non-word character ("Pathologic Staging (AJCC...)").
      if (colon == std::string_view::npos) {
        if (*end < line.end && std::isalnum(static_cast<unsigned char>(text[*end]))) continue;
      } else {
        std::size_t p = *end;
        while (p < colon && is_space(text[p])) ++p;
        if (p != colon && std::isalnum(static_cast<unsigned char>(text[p]))) continue;
      }
      if (!best || *end - line.content > best->end - best->begin) {
        HeaderMatch m;
        m.category = c;
        m.begin = line.content;
        m.end = *end;
        m.body_begin = (colon != std::string_view::npos) ? colon + 1 : *end;
        best = m;
      }
    }
  }
  return best;
}

}  // namespace

DetectedFormat detect_format(const ReportDocument& doc, const ExtractionLexicon& lex) {
  validate_document(doc);
  std::string_view text = doc.text;
  for (std::size_t i = 0; i + 1 < text.size(); ++i) {
    if (match_phrase_at(text, i, "synoptic report")) return DetectedFormat::Structured;
  }
  std::size_t with_colon = 0;
  for (Category c : all_categories()) {
    bool found = false;
    for (const auto& kw : lex.entry(c).header_keywords) {
      for (std::size_t i = 0; i < text.size() && !found; ++i) {
        auto end = match_phrase_at(text, i, kw);
        if (!end) continue;
        std::size_t p = *end;
        while (p < text.size() && (text[p] == ' ' || text[p] == '\t')) ++p;
        if (p < text.size() && text[p] == ':') found = true;
      }
      if (found) break;
    }
    if (found) ++with_colon;
  }
  return with_colon >= 6 ? DetectedFormat::Structured : DetectedFormat::Unstructured;
}

std::vector<Segment> segment_structured(const ReportDocument& doc, const ExtractionLexicon& lex) {
  validate_document(doc);
  std::string_view text = doc.text;
  auto lines = split_lines(text);

  struct Opened {
    HeaderMatch header;
    std::size_t line_begin;
  };
  std::vector<Opened> headers;
  for (const auto& line : lines) {
    auto m = match_header(text, line, lex);
    if (m) headers.push_back({*m, line.begin});
  }
  if (headers.empty())
    throw SegmentationError(SegmentationError::Code::NoHeadersFound,
                            "no header keywords found in document '" + doc.id + "'");

  std::vector<Segment> segments;
  for (std::size_t i = 0; i < headers.size(); ++i) {
    Segment s;
    s.category = headers[i].header.category;
    s.header_begin = headers[i].header.begin;
    s.header_end = headers[i].header.end;
    s.body_begin = headers[i].header.body_begin;
    s.body_end = (i + 1 < headers.size()) ? headers[i + 1].line_begin : text.size();
    if (s.body_end < s.body_begin) s.body_end = s.body_begin;
    s.strategy = SegmentStrategy::HeaderBased;
    segments.push_back(s);
  }
  return segments;
}

std::vector<Segment> segment_unstructured(const ReportDocument& doc,
                                          const ExtractionLexicon& lex) {
  validate_document(doc);
  std::string_view text = doc.text;

  struct Anchor {
    std::size_t begin, end;
    Category category;
  };
  std::vector<Anchor> anchors;
  for (Category c : all_categories()) {
    const auto& e = lex.entry(c);
    std::vector<std::string> needles = e.header_keywords;
    for (const auto& a : e.attributes)
      for (const auto& s : a.surfaces)
        if (lex.surface_is_unambiguous(c, s)) needles.push_back(s);
    if (needles.empty()) continue;
    for (const auto& hit : find_phrases_overlapping(text, needles))
      anchors.push_back({hit.begin, hit.end, c});
  }
  std::sort(anchors.begin(), anchors.end(), [](const Anchor& a, const Anchor& b) {
    if (a.begin != b.begin) return a.begin < b.begin;
    if (a.end != b.end) return a.end > b.end;  // longer anchor first
    return static_cast<int>(a.category) < static_cast<int>(b.category);
  });

  // An anchor contained in a longer anchor of the same category is
  // redundant ("total thyroidectomy" inside "near-total thyroidectomy")
  // and would open a duplicate segment.
  std::vector<Anchor> kept;
  for (const auto& a : anchors) {
    bool contained = false;
    for (const auto& k : kept) {
      if (k.category == a.category && k.begin <= a.begin && a.end <= k.end &&
          (k.begin != a.begin || k.end != a.end)) {
        contained = true;
        break;
      }
    }
    if (!contained) kept.push_back(a);
  }
  anchors = std::move(kept);

  std::vector<Segment> segments;
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    const Anchor& a = anchors[i];
    std::size_t next_begin = text.size();
    for (std::size_t j = i + 1; j < anchors.size(); ++j) {
      // Anchors nested inside this one (e.g. a keyword inside a longer
      // surface) must not cut the body short.
      if (anchors[j].begin >= a.end) {
        next_begin = anchors[j].begin;
        break;
      }
    }
    std::size_t body_end = std::min(sentence_end(text, a.end), next_begin);
    if (body_end < a.end) body_end = a.end;
    Segment s;
    s.category = a.category;
    s.header_begin = a.begin;
    s.header_end = a.end;
    s.body_begin = a.begin;  // the anchor itself may carry the value
    s.body_end = body_end;
    s.strategy = SegmentStrategy::TopicAnchored;
    segments.push_back(s);
  }
  return segments;
}

}  // namespace thyropath
