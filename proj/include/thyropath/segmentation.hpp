#pragma once

#include <stdexcept>
#include <vector>

#include "thyropath/lexicon.hpp"
#include "thyropath/model.hpp"

namespace thyropath {

enum class SegmentStrategy { HeaderBased, TopicAnchored };

// One topical region of a report. Spans are half-open character
// intervals into the document text. Header-based bodies never overlap;
// topic-anchored bodies may.
struct Segment {
  Category category = Category::Procedure;
  std::size_t header_begin = 0;
  std::size_t header_end = 0;
  std::size_t body_begin = 0;
  std::size_t body_end = 0;
  SegmentStrategy strategy = SegmentStrategy::HeaderBased;
};

struct SegmentationError : std::runtime_error {
  enum class Code { NoHeadersFound };
  SegmentationError(Code c, std::string msg) : std::runtime_error(std::move(msg)), code(c) {}
  Code code;
};

enum class DetectedFormat { Structured, Unstructured };

// Structured iff the literal "SYNOPTIC REPORT" occurs (any casing) or
// at least six distinct category header keywords are each followed by
// a colon.
DetectedFormat detect_format(const ReportDocument& doc, const ExtractionLexicon& lex);

// Line-oriented: a line opening with a category header keyword (longest
// keyword wins; the keyword must end at the line's first colon or at a
// non-alphanumeric boundary) starts a segment whose body runs to the
// next header line. Repeated headers yield repeated segments in
// document order. Throws NoHeadersFound when nothing matches.
std::vector<Segment> segment_structured(const ReportDocument& doc, const ExtractionLexicon& lex);

// Anchor-oriented: every occurrence of a header keyword or of an
// attribute surface owned by exactly one category opens a segment; the
// body runs from the anchor to the earlier of the next sentence
// terminator or the next anchor. An empty result is valid.
std::vector<Segment> segment_unstructured(const ReportDocument& doc, const ExtractionLexicon& lex);

}  // namespace thyropath
