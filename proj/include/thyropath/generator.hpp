#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "thyropath/lexicon.hpp"
#include "thyropath/model.hpp"

namespace thyropath {

// Rates are independent per-site probabilities in [0, 1].
struct NoiseProfile {
  double synonym_rate = 0.0;  // alternative phrasing for a value
  double reorder_rate = 0.0;  // shuffled section order
  double mm_rate = 0.0;       // lengths written in millimeters
  double drop_rate = 0.0;     // optional statements omitted

  static NoiseProfile none() { return {}; }
  static NoiseProfile standard() { return {0.35, 0.25, 0.2, 0.15}; }

  bool operator==(const NoiseProfile&) const = default;
};

struct GeneratorConfig {
  std::uint64_t seed = 1;
  std::size_t n = 100;
  double structured_fraction = 0.5;  // leading fraction of documents
  NoiseProfile noise = NoiseProfile::standard();
};

// One generated report with its reference annotation: the mention spans
// an annotator would mark, the feature record those mentions collapse
// to, and the risk that record implies.
struct SyntheticDoc {
  ReportDocument doc;
  GoldAnnotation gold;
  FeatureRecord record;
};

// Deterministic: equal configs produce byte-identical corpora on every
// platform.
std::vector<SyntheticDoc> generate_synthetic(const GeneratorConfig& config,
                                             const ExtractionLexicon& lex);

// Direct restatement of the risk ledger, kept independent of the
// table-driven classifier so the two implementations check each other.
RiskCategory generator_risk_oracle(const FeatureRecord& record,
                                   const std::set<std::string>& aggressive_histologies);

}  // namespace thyropath
