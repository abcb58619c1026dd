#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>
#include <vector>

#include "thyropath/text_match.hpp"

using namespace thyropath;

TEST_CASE("phrase normalization lowers case and collapses whitespace") {
  CHECK(normalize_phrase("Total  Thyroidectomy") == "total thyroidectomy");
  CHECK(normalize_phrase("  Tumor\tSize \n") == "tumor size");
  CHECK(normalize_phrase("ALREADY lower") == "already lower");
  CHECK(normalize_phrase("") == "");
  CHECK(normalize_phrase("   ") == "");
}

TEST_CASE("match_phrase_at is case-insensitive and whitespace-elastic") {
  std::string text = "Procedure: Total   Thyroidectomy.";
  auto end = match_phrase_at(text, 11, "total thyroidectomy");
  REQUIRE(end.has_value());
  CHECK(*end == 32);  // one past the final 'y', before '.'
  CHECK(text.substr(11, *end - 11) == "Total   Thyroidectomy");

  CHECK(!match_phrase_at(text, 12, "total thyroidectomy").has_value());
  CHECK(!match_phrase_at(text, 11, "total thyroidectomy x").has_value());
}

TEST_CASE("word boundaries block alpha-alpha seams") {
  // A leading boundary violation: 'sub' + 'total thyroidectomy'.
  std::string text = "subtotal thyroidectomy";
  CHECK(!match_phrase_at(text, 3, "total thyroidectomy").has_value());
  // Trailing boundary violation: 'isthmus' inside 'isthmusectomy'.
  std::string text2 = "an isthmusectomy was performed";
  CHECK(!match_phrase_at(text2, 3, "isthmus").has_value());
  // Letter-letter seam inside TNM strings: "nx" may not end before 'm'.
  std::string text3 = "pTXNXM0";
  CHECK(!match_phrase_at(text3, 3, "nx").has_value());
}

TEST_CASE("digit/letter seams are permitted on both sides") {
  std::string text = "Stage pT1N1b overall.";
  // "pt1" ends at a digit→letter seam (1|N): allowed.
  auto e1 = match_phrase_at(text, 6, "pt1");
  REQUIRE(e1.has_value());
  CHECK(text.substr(6, *e1 - 6) == "pT1");
  // "n1b" begins at a digit→letter seam (1|N): allowed.
  auto e2 = match_phrase_at(text, 9, "n1b");
  REQUIRE(e2.has_value());
  CHECK(text.substr(9, *e2 - 9) == "N1b");
  // Plain "n1" also matches inside, ending before 'b'? No: 1→b is a
  // digit→letter seam, so it does match.
  auto e3 = match_phrase_at(text, 9, "n1");
  REQUIRE(e3.has_value());
  CHECK(*e3 == 11);
}

TEST_CASE("prefix matching drops the trailing boundary only") {
  std::string text = "tumor measures 2 cm";
  CHECK(!match_phrase_at(text, 6, "measure").has_value());
  auto e = match_phrase_prefix_at(text, 6, "measure");
  REQUIRE(e.has_value());
  CHECK(*e == 13);  // "measure" consumed; the plural 's' remains
  // Leading boundary still enforced for prefixes.
  std::string text2 = "premeasure";
  CHECK(!match_phrase_prefix_at(text2, 3, "measure").has_value());
}

TEST_CASE("prefix matching elides a trailing 'e' before inflection") {
  std::string text = "a nodule measuring 2 cm";
  CHECK(!match_phrase_at(text, 9, "measure").has_value());
  auto e = match_phrase_prefix_at(text, 9, "measure");
  REQUIRE(e.has_value());
  CHECK(*e == 15);  // stops on the 'i' of "measuring"
  CHECK(text.substr(9, *e - 9) == "measur");
  // Elision needs progress: a lone 'e' needle cannot zero-length match.
  CHECK(!match_phrase_prefix_at(text, 9, "e").has_value());
  // Elision is prefix-only; fully-bounded matching stays strict.
  CHECK(!match_phrase_at(text, 9, "measur").has_value());
}

TEST_CASE("find_phrases prefers longest needle and yields non-overlapping hits") {
  std::vector<std::string> needles = {"tall cell", "tall cell variant", "classic"};
  std::string text = "Subtype: tall cell variant, not classic.";
  auto hits = find_phrases(text, needles);
  REQUIRE(hits.size() == 2);
  CHECK(hits[0].needle_index == 1);
  CHECK(text.substr(hits[0].begin, hits[0].end - hits[0].begin) == "tall cell variant");
  CHECK(hits[1].needle_index == 2);
  CHECK(text.substr(hits[1].begin, hits[1].end - hits[1].begin) == "classic");
  // Non-overlap: next scan starts after the previous hit.
  CHECK(hits[0].end <= hits[1].begin);
}

TEST_CASE("find_phrases_overlapping reports contained hits too") {
  std::vector<std::string> needles = {"extrathyroidal extension", "gross extrathyroidal extension"};
  std::string text = "There is gross extrathyroidal extension.";
  auto flat = find_phrases(text, needles);
  REQUIRE(flat.size() == 1);
  CHECK(flat[0].needle_index == 1);

  auto all = find_phrases_overlapping(text, needles);
  REQUIRE(all.size() == 2);
  // Both the long surface and the contained shorter one are present.
  bool saw_long = false, saw_short = false;
  for (const auto& h : all) {
    if (h.needle_index == 1) saw_long = true;
    if (h.needle_index == 0) saw_short = true;
  }
  CHECK(saw_long);
  CHECK(saw_short);
}

TEST_CASE("sentence_end stops at '.' + whitespace and protects length units") {
  std::string text = "Tumor measures 2.8 cm. Margins are clear.";
  // The '2.8' decimal point must not end the sentence, and the '.' in
  // "cm." is unit-protected, so the first terminator is the final '.'.
  std::size_t e = sentence_end(text, 0);
  CHECK(e == text.size() - 1);
  CHECK(text[e] == '.');

  std::string text2 = "Tumor measures 2.8 cm in size. Margins are clear.";
  std::size_t e2 = sentence_end(text2, 0);
  CHECK(e2 == 29);
  CHECK(text2[e2] == '.');

  std::string text3 = "No terminator here";
  CHECK(sentence_end(text3, 0) == text3.size());

  std::string text4 = "Dims 0.7 x 0.5 x 0.4 cm and more. Next.";
  CHECK(sentence_end(text4, 0) == 32);
  CHECK(text4[32] == '.');
}

TEST_CASE("number groups: plain, decimal, units, normalization") {
  std::string text = "size 2.8 cm and 13 mm and 23 nodes";
  auto gs = find_number_groups(text, 0, text.size());
  REQUIRE(gs.size() == 3);

  CHECK(gs[0].value == doctest::Approx(2.8));
  CHECK(gs[0].has_unit);
  CHECK(!gs[0].integral);
  CHECK(text.substr(gs[0].begin, gs[0].end - gs[0].begin) == "2.8 cm");

  CHECK(gs[1].value == doctest::Approx(1.3));  // 13 mm -> cm
  CHECK(gs[1].has_unit);
  CHECK(gs[1].unit_mm);
  CHECK(text.substr(gs[1].begin, gs[1].end - gs[1].begin) == "13 mm");

  CHECK(gs[2].value == doctest::Approx(23.0));
  CHECK(!gs[2].has_unit);
  CHECK(gs[2].integral);
  CHECK(text.substr(gs[2].begin, gs[2].end - gs[2].begin) == "23");
}

TEST_CASE("dimension chains collapse to their greatest member") {
  std::string text = "focus measuring 0.4 x 0.7 x 0.5 cm today";
  auto gs = find_number_groups(text, 0, text.size());
  REQUIRE(gs.size() == 1);
  CHECK(gs[0].value == doctest::Approx(0.7));
  CHECK(gs[0].has_unit);
  CHECK(text.substr(gs[0].begin, gs[0].end - gs[0].begin) == "0.4 x 0.7 x 0.5 cm");

  // mm chains normalize after taking the max.
  std::string text2 = "measuring 4 x 7 x 5 mm";
  auto gs2 = find_number_groups(text2, 0, text2.size());
  REQUIRE(gs2.size() == 1);
  CHECK(gs2[0].value == doctest::Approx(0.7));
  CHECK(gs2[0].unit_mm);
}

TEST_CASE("spelled-out small numbers are recognized") {
  std::string text = "Two lymph nodes and seventeen others, twenty total";
  auto gs = find_number_groups(text, 0, text.size());
  REQUIRE(gs.size() == 3);
  CHECK(gs[0].value == doctest::Approx(2.0));
  CHECK(gs[1].value == doctest::Approx(17.0));
  CHECK(gs[2].value == doctest::Approx(20.0));
  for (const auto& g : gs) {
    CHECK(g.integral);
    CHECK(!g.has_unit);
  }
}

TEST_CASE("ordinals and embedded digits are not numeric groups") {
  std::string text = "AJCC 8th edition of pT2 staging";
  auto gs = find_number_groups(text, 0, text.size());
  CHECK(gs.empty());  // "8th" has trailing alpha; "2" is inside "pT2"

  std::string text2 = "level II4 and 3a";
  auto gs2 = find_number_groups(text2, 0, text2.size());
  // "4" sits after alpha (inside a run) and "3a" has trailing alpha.
  CHECK(gs2.empty());
}

TEST_CASE("number group windows clip to the requested range") {
  std::string text = "first 5 then 7 then 9";
  auto gs = find_number_groups(text, 8, 17);
  REQUIRE(gs.size() == 1);
  CHECK(gs[0].value == doctest::Approx(7.0));
}
