#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "thyropath/model.hpp"

namespace thyropath {

// One canonical attribute with every surface string that maps to it.
struct AttributePattern {
  std::string canonical;
  std::vector<std::string> surfaces;

  bool operator==(const AttributePattern&) const = default;
};

// Dictionary entry for one category: the headers that open its topic
// and the attribute surfaces recognized inside it.
struct CategoryEntry {
  Category category = Category::Procedure;
  std::vector<std::string> header_keywords;
  std::vector<AttributePattern> attributes;
  ValueKind kind = ValueKind::Categorical;

  bool operator==(const CategoryEntry&) const = default;
};

// Numeric capture template. A template with a suffix is gapped: a
// literal prefix, the shortest intervening segment (the capture zone),
// then the literal suffix. Suffix-less templates capture adjacent to
// the anchor phrase. Order within a set is significant: earlier
// templates take precedence.
struct KeyString {
  std::string prefix;
  std::string suffix;  // empty for plain anchors

  bool gapped() const { return !suffix.empty(); }
  // Wire form, "<prefix> [...] <suffix>" when gapped.
  std::string to_text() const;
  static KeyString parse(std::string_view text);

  bool operator==(const KeyString&) const = default;
};

struct KeyStringSet {
  Category category = Category::TumorSize;
  std::vector<KeyString> templates;

  bool operator==(const KeyStringSet&) const = default;
};

struct LexiconError : std::runtime_error {
  enum class Code { ParseError, MissingCategory, DuplicateCanonical, BadKeyStringTarget };
  LexiconError(Code c, std::string msg) : std::runtime_error(std::move(msg)), code(c) {}
  Code code;
};

struct SurfaceHit {
  std::size_t begin = 0;
  std::size_t end = 0;
  const AttributePattern* pattern = nullptr;
};

class RuleTable;  // classifier; the rule ledger rides in the same config file

class ExtractionLexicon {
 public:
  ExtractionLexicon() = default;

  // Entries for all 18 categories; throws MissingCategory/DuplicateCanonical.
  static ExtractionLexicon build(std::vector<CategoryEntry> entries,
                                 std::vector<KeyStringSet> key_strings,
                                 std::set<std::string> aggressive_histologies,
                                 bool involved_of_examined_extension);

  const CategoryEntry& entry(Category c) const;
  const std::vector<KeyStringSet>& key_string_sets() const { return key_strings_; }
  const KeyStringSet* key_strings_for(Category c) const;
  const std::set<std::string>& aggressive_histologies() const { return aggressive_; }

  // Count-involved capture from "(N of M) ... lymph nodes ... positive"
  // phrasing. A heuristic beyond the core vocabulary, so the config
  // carries it separately under "extensions".
  bool involved_of_examined_extension() const { return involved_of_examined_; }

  // Whole-surface lookup: case-insensitive, whitespace-collapsed,
  // longest match wins. Returns the normalized value.
  std::optional<AttributeValue> lookup(Category c, std::string_view surface) const;

  // Scanning lookup used by extraction: non-overlapping hits in
  // [begin, end) of `text`, longest surface first at each position.
  std::vector<SurfaceHit> find_attribute_hits(Category c, std::string_view text, std::size_t begin,
                                              std::size_t end) const;

  // Surfaces owned by exactly one category (usable as topic anchors).
  bool surface_is_unambiguous(Category c, const std::string& normalized_surface) const;

  // Normalized value for one of this category's canonicals.
  AttributeValue value_for_canonical(Category c, const std::string& canonical) const;

  bool operator==(const ExtractionLexicon& other) const;

 private:
  std::vector<CategoryEntry> entries_;              // indexed by category
  std::vector<KeyStringSet> key_strings_;
  std::set<std::string> aggressive_;
  bool involved_of_examined_ = false;
  // normalized surface -> number of owning categories
  std::vector<std::vector<std::string>> normalized_surfaces_;  // per category, aligned to attributes
  std::set<std::string> shared_surfaces_;                      // owned by >1 category

  friend class LexiconCodec;
};

// The dictionary shipped with the tool: header keywords, attribute
// surfaces, numeric key strings, and the one flagged extension pattern.
const ExtractionLexicon& default_lexicon();

// JSON config = {"categories", "key_strings", "aggressive_histologies",
// "extensions", "rules"}. Unknown keys are rejected. The
// "rules" section belongs to the classifier; it is carried here as raw
// JSON text ("" when absent) so the two modules stay decoupled.
struct LoadedConfig {
  ExtractionLexicon lexicon;
  std::string rules_json;
};

LoadedConfig load_config(const std::string& json_text);
LoadedConfig load_config_file(const std::string& path);
ExtractionLexicon load_lexicon(const std::string& json_text);
std::string config_to_json(const ExtractionLexicon& lex, const std::string& rules_json);

}  // namespace thyropath
