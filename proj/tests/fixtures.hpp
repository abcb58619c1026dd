#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "thyropath/model.hpp"

namespace fixtures {

// A complete synoptic report exercising every structured pathway:
// nested colons, banner lines, detail lines, parenthesized header
// variants, TNM sub-codes, and an "MX by omission" metastasis line.
inline const char* kSynopticReport =
    "SYNOPTIC REPORT\n"
    " Procedure: Total thyroidectomy.\n"
    " Tumor Focality: Unifocal.\n"
    " Tumor Site: Right lobe.\n"
    " Tumor Size: Greatest dimension: 2.8 cm.\n"
    " Histologic Type: Papillary carcinoma, classic.\n"
    " Margins: Involved by carcinoma.\n"
    " Angioinvasion (Vascular Invasion): Not identified.\n"
    " Lymphatic Invasion: Present.\n"
    " Extrathyroidal Extension: Not identified.\n"
    " Regional Lymph Nodes\n"
    " Number of Lymph Nodes Involved: 23.\n"
    " Level VI, levels IIA, IIB, III and IV.\n"
    " Number of Lymph Nodes Examined: 44.\n"
    " Level VI, levels II-IV, paraesophageal.\n"
    " Size of Largest Metastatic Deposit: 5.5 cm.\n"
    " Extranodal Extension: Present.\n"
    " Pathologic Staging (AJCC, 8th edition)\n"
    " TNM Descriptors: Not applicable.\n"
    " Primary Tumor: pT2.\n"
    " Regional lymph nodes: pN1b.\n"
    " Distant Metastasis: Not applicable.\n";

// A narrative report exercising the unstructured pathway: multi-part
// specimens, compound procedure phrasing, dimension triplets, the
// "(N of M)" node tally, and a bracketed TNM/staging tail.
inline const char* kNarrativeReport =
    "DIAGNOSIS:\n"
    "\n"
    "A. Thyroid and isthmus, right thyroidectomy and isthmusectomy: Grade 1 (of 4) "
    "papillary thyroid carcinoma, follicular subtype forming two nodules "
    "(0.7 x 0.5 x 0.4 cm and 0.6 x 0.5 x 0.4 cm). Tumor is confined to the thyroid. "
    "All surgical resection margins are negative for tumor. A single (1 of 3) "
    "perithyroidal lymph nodes is positive for metastatic papillary thyroid "
    "carcinoma. Extranodal extension is not identified.\n"
    "\n"
    "B. Thyroid, left thyroidectomy: Grade 1 (of 4) papillary thyroid carcinoma, "
    "follicular subtype, forming a microscopic focus measuring 0.1 x 0.1 x 0.1 cm "
    "located in the mid portion of the lobe. The tumor is confined to the thyroid. "
    "All surgical resection margins are negative for tumor.\n"
    "\n"
    "C. Lymph node, bilateral neck, level VI, biopsy: Multiple (4) lymph nodes are "
    "negative for tumor.\n"
    "\n"
    "With available surgical material [AJCC pT1N1] (7th edition, 2010).\n";

inline thyropath::ReportDocument synoptic_doc() {
  thyropath::ReportDocument doc;
  doc.id = "synoptic-1";
  doc.text = kSynopticReport;
  return doc;
}

inline thyropath::ReportDocument narrative_doc() {
  thyropath::ReportDocument doc;
  doc.id = "narrative-1";
  doc.text = kNarrativeReport;
  return doc;
}

inline std::vector<thyropath::Mention> of_category(const std::vector<thyropath::Mention>& all,
                                                   thyropath::Category c) {
  std::vector<thyropath::Mention> out;
  for (const auto& m : all)
    if (m.category == c) out.push_back(m);
  return out;
}

inline std::optional<thyropath::Mention> only_mention(const std::vector<thyropath::Mention>& all,
                                                      thyropath::Category c) {
  auto v = of_category(all, c);
  if (v.size() != 1) return std::nullopt;
  return v.front();
}

// A feature record with the six strict-policy prerequisites populated
// with risk-neutral values; tests then overwrite single slots.
inline thyropath::FeatureRecord baseline_record(double size_cm = 0.5) {
  using namespace thyropath;
  FeatureRecord r;
  r.set_slot(Category::TumorSize, AttributeValue::length_cm(size_cm));
  r.set_slot(Category::HistologicSubtype, AttributeValue::categorical("Classic"));
  r.set_slot(Category::Angioinvasion, AttributeValue::categorical("Negative"));
  r.set_slot(Category::ExtrathyroidalExtension, AttributeValue::categorical("Negative"));
  r.set_slot(Category::ExtranodalExtension, AttributeValue::categorical("Negative"));
  r.set_slot(Category::DistantMetastasis, AttributeValue::tnm("M0"));
  return r;
}

inline thyropath::Mention make_mention(thyropath::Category c, std::size_t begin, std::size_t end,
                                       thyropath::AttributeValue v,
                                       std::string surface = "") {
  thyropath::Mention m;
  m.category = c;
  m.begin = begin;
  m.end = end;
  m.value = std::move(v);
  m.surface = std::move(surface);
  return m;
}

}  // namespace fixtures
