#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace thyropath {

// Case-insensitive phrase matching over raw report text. Needles are
// stored lowercased with whitespace collapsed to single spaces; a space
// in the needle consumes any whitespace run in the haystack, so spans
// always index the original text.

// Lowercase and collapse internal whitespace; trims both ends.
std::string normalize_phrase(std::string_view s);

// Match `needle` (pre-normalized) at position `pos`. Returns one past
// the last matched character, or nullopt. Boundary rule: a match may
// not butt against an alphanumeric run on either side, except across a
// digit/letter seam (so "pT1" and "N1b" both match inside "pT1N1b").
std::optional<std::size_t> match_phrase_at(std::string_view text, std::size_t pos,
                                           std::string_view needle);

// Same, but without the trailing boundary: "measure" matches inside
// "measuring". Used for key-string anchors, which behave like stems.
std::optional<std::size_t> match_phrase_prefix_at(std::string_view text, std::size_t pos,
                                                  std::string_view needle);

struct PhraseHit {
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t needle_index = 0;  // into the needles vector passed in
};

// All non-overlapping hits, scanning left to right; at each position the
// longest matching needle wins.
std::vector<PhraseHit> find_phrases(std::string_view text, const std::vector<std::string>& needles);

// Like find_phrases but reports every match position even when hits
// overlap (used for segment anchoring, where anchors may overlap).
std::vector<PhraseHit> find_phrases_overlapping(std::string_view text,
                                                const std::vector<std::string>& needles);

// Offset of the '.' terminating the sentence containing `from`: the
// next '.' followed by whitespace or end-of-text whose preceding token
// is not a length unit ("cm"/"mm"). Returns text.size() when none.
std::size_t sentence_end(std::string_view text, std::size_t from);

// Parsed numeric group: a number, an "a x b x c" dimension chain, or a
// spelled-out small number, with an optional length unit.
struct NumberGroup {
  std::size_t begin = 0;
  std::size_t end = 0;
  double value = 0.0;       // greatest member of a dimension chain
  bool has_unit = false;    // an explicit cm/mm style unit was present
  bool unit_mm = false;     // value still needs /10 if true (applied already)
  bool integral = true;     // every member parsed as a plain integer
};

// All numeric groups in [begin, end). Groups never start inside an
// alphanumeric run ("pT2" yields nothing). mm values are normalized to
// cm. Spelled-out numbers zero..twenty are recognized.
std::vector<NumberGroup> find_number_groups(std::string_view text, std::size_t begin,
                                            std::size_t end);

}  // namespace thyropath
