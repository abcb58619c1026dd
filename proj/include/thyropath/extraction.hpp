#pragma once

#include <stdexcept>
#include <vector>

#include "thyropath/lexicon.hpp"
#include "thyropath/model.hpp"
#include "thyropath/segmentation.hpp"

namespace thyropath {

struct ExtractionError : std::runtime_error {
  enum class Code { MalformedNumber };
  ExtractionError(Code c, std::size_t b, std::size_t e, std::string msg)
      : std::runtime_error(std::move(msg)), code(c), begin(b), end(e) {}
  Code code;
  std::size_t begin, end;
};

// Dictionary hits inside one segment body for categorical-valued
// categories (including TNM codes and staging editions).
std::vector<Mention> extract_categorical(const ReportDocument& doc, const Segment& seg,
                                         const ExtractionLexicon& lex);

// First numeric group inside a header-based segment body. Lengths are
// normalized to cm; counts must be bare integers.
std::vector<Mention> extract_numeric_structured(const ReportDocument& doc, const Segment& seg,
                                                const ExtractionLexicon& lex);

// Whole-text key-string capture for the four numeric categories of an
// unstructured report. Earlier templates take precedence; a numeric
// group captured once is never captured again. Throws MalformedNumber
// when an anchored template's capture zone contains no number at all.
std::vector<Mention> extract_numeric_unstructured(const ReportDocument& doc,
                                                  const ExtractionLexicon& lex);

// Full pipeline for one document: honors the format hint, otherwise
// detects the format; result is sorted by span start and deduplicated.
std::vector<Mention> extract(const ReportDocument& doc, const ExtractionLexicon& lex);

// Collapse mentions into one feature row. Numeric slots take the
// maximum; graded categoricals resolve by severity (Positive over
// Negative; Macroscopic over microscopic grades over Negative;
// Multifocal over Unifocal); everything else keeps the first mention in
// document order.
FeatureRecord to_feature_record(const ReportDocument& doc, std::vector<Mention> mentions);

}  // namespace thyropath
