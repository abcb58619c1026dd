#include "thyropath/lexicon.hpp"

namespace thyropath {

namespace {

CategoryEntry categorical_entry(Category c, std::vector<std::string> keywords,
                                std::vector<AttributePattern> attributes) {
  CategoryEntry e;
  e.category = c;
  e.kind = value_kind_of(c);
  e.header_keywords = std::move(keywords);
  e.attributes = std::move(attributes);
  return e;
}

CategoryEntry numeric_entry(Category c, std::vector<std::string> keywords) {
  return categorical_entry(c, std::move(keywords), {});
}

KeyStringSet key_set(Category c, std::vector<std::string> templates) {
  KeyStringSet ks;
  ks.category = c;
  for (const auto& t : templates) ks.templates.push_back(KeyString::parse(t));
  return ks;
}

ExtractionLexicon build_default() {
  std::vector<CategoryEntry> entries;

  entries.push_back(categorical_entry(
      Category::Procedure, {"procedure"},
      {
          {"TotalThyroidectomy", {"total thyroidectomy", "near-total thyroidectomy",
                                  "near total thyroidectomy"}},
          {"Hemithyroidectomy",
           {"hemithyroidectomy", "left lobectomy", "right lobectomy",
            "left lobectomy with isthmusectomy", "right lobectomy with isthmusectomy",
            "right thyroidectomy", "left thyroidectomy", "right thyroid lobectomy",
            "left thyroid lobectomy"}},
          {"SubtotalThyroidectomy",
           {"subtotal thyroidectomy", "right lobectomy with partial left lobectomy",
            "left lobectomy with partial right lobectomy"}},
          {"Isthmusectomy", {"isthmusectomy"}},
      }));

  entries.push_back(categorical_entry(Category::TumorFocality, {"tumor focality"},
                                      {
                                          {"Unifocal", {"unifocal"}},
                                          {"Multifocal", {"multifocal"}},
                                      }));

  entries.push_back(categorical_entry(Category::TumorSite, {"tumor site"},
                                      {
                                          {"RightLobe", {"right lobe", "right thyroid lobe"}},
                                          {"LeftLobe", {"left lobe", "left thyroid lobe"}},
                                          {"Isthmus", {"isthmus"}},
                                      }));

  entries.push_back(numeric_entry(Category::TumorSize, {"tumor size"}));

  entries.push_back(categorical_entry(
      Category::HistologicSubtype, {"histologic subtype", "histologic type", "histological type"},
      {
          {"Classic", {"classic", "classic variant", "classical variant", "usual", "conventional"}},
          {"FollicularVariantInfiltrative",
           {"follicular variant infiltrative", "follicular variant, infiltrative",
            "infiltrative follicular variant"}},
          {"FollicularVariantEncapsulated",
           {"follicular variant encapsulated", "follicular variant, encapsulated",
            "encapsulated follicular variant"}},
          {"EncapsulatedVariant", {"encapsulated variant"}},
          {"Microcarcinoma", {"microcarcinoma", "papillary microcarcinoma"}},
          {"InfiltrativeFollicular", {"infiltrative follicular"}},
          {"TallCell", {"tall cell variant", "tall cell"}},
          {"Hobnail", {"hobnail variant", "hobnail"}},
          {"ColumnarCell", {"columnar cell variant", "columnar cell"}},
          {"SolidTrabecular",
           {"solid / trabecular variant", "solid/trabecular variant", "solid / trabecular",
            "solid/trabecular", "solid variant", "trabecular variant"}},
          {"CribriformMorular",
           {"cribriform-morular variant", "cribriform-morular", "cribriform morular"}},
          {"DiffuseSclerosing", {"diffuse sclerosing variant", "diffuse sclerosing"}},
          {"WarthinLike", {"warthin-like variant", "warthin-like", "warthin like"}},
          {"Oncocytic", {"oncocytic variant", "oncocytic"}},
      }));

  entries.push_back(categorical_entry(
      Category::Margins, {"margins", "margin"},
      {
          {"Positive",
           {"involved by carcinoma", "carcinoma present at margin", "margin involved by carcinoma"}},
          {"Negative",
           {"negative", "uninvolved by carcinoma", "free of tumor", "negative for tumor"}},
      }));

  entries.push_back(categorical_entry(
      Category::Angioinvasion,
      {"angioinvasion (vascular invasion)", "angioinvasion", "vascular invasion"},
      {
          {"Positive", {"present"}},
          {"Negative", {"not identified", "negative"}},
      }));

  entries.push_back(categorical_entry(Category::LymphaticInvasion, {"lymphatic invasion"},
                                      {
                                          {"Positive", {"present"}},
                                          {"Negative", {"not identified", "negative", "absent"}},
                                      }));

  entries.push_back(categorical_entry(Category::LymphovascularInvasion,
                                      {"lymphovascular invasion"},
                                      {
                                          {"Positive", {"present"}},
                                          {"Negative", {"not identified", "negative", "absent"}},
                                      }));

  entries.push_back(categorical_entry(
      Category::ExtrathyroidalExtension, {"extrathyroidal extension"},
      {
          {"Macroscopic",
           {"evidence of macroscopic invasion", "macroscopic invasion", "macroscopic",
            "gross extrathyroidal extension"}},
          {"MicroscopicModerateSevere",
           {"microscopic moderate/severe", "microscopic moderate / severe",
            "subcutaneous tissue", "larynx", "trachea", "esophagus", "recurrent laryngeal nerve",
            "nerves"}},
          {"MicroscopicMinimal",
           {"microscopic minimal", "perithyroidal adipose tissue", "perithyroidal soft tissue",
            "strap muscles", "strap muscle", "sternohyoid", "omohyoid", "thyrohyoid",
            "sternothyroid"}},
          {"Negative", {"not identified", "negative", "absent"}},
      }));

  entries.push_back(
      numeric_entry(Category::NumberOfLymphNodesInvolved, {"number of lymph nodes involved"}));
  entries.push_back(
      numeric_entry(Category::NumberOfLymphNodesExamined, {"number of lymph nodes examined"}));
  entries.push_back(numeric_entry(Category::SizeOfLargestMetastaticDeposit,
                                  {"size of largest metastatic deposit",
                                   "size of the largest metastatic deposit"}));

  entries.push_back(categorical_entry(Category::ExtranodalExtension, {"extranodal extension"},
                                      {
                                          {"Positive", {"present"}},
                                          {"Negative", {"not identified", "absent"}},
                                      }));

  entries.push_back(categorical_entry(
      Category::PathologicStaging, {"pathologic staging", "pathologic stage"},
      {
          {"Edition7",
           {"ajcc, 7th edition", "ajcc 7th edition", "7th edition", "7 th edition",
            "seventh edition", "ajcc 7 th edition"}},
          {"Edition8",
           {"ajcc, 8th edition", "ajcc 8th edition", "8th edition", "8 th edition",
            "eighth edition", "ajcc 8 th edition"}},
      }));

  entries.push_back(categorical_entry(Category::PrimaryTumorTNM, {"primary tumor"},
                                      {
                                          {"T0", {"pt0", "t0"}},
                                          {"T1", {"pt1a", "pt1b", "pt1", "t1a", "t1b", "t1"}},
                                          {"T2", {"pt2", "t2"}},
                                          {"T3", {"pt3a", "pt3b", "pt3", "t3a", "t3b", "t3"}},
                                          {"T4", {"pt4a", "pt4b", "pt4", "t4a", "t4b", "t4"}},
                                      }));

  entries.push_back(categorical_entry(
      Category::LymphNodesTNM, {"regional lymph nodes", "regional lymph node"},
      {
          {"NX", {"pnx", "nx", "not applicable", "lymph nodes cannot be assessed"}},
          {"N0", {"pn0", "n0"}},
          {"N1", {"pn1a", "pn1b", "pn1", "n1a", "n1b", "n1"}},
      }));

  entries.push_back(categorical_entry(
      Category::DistantMetastasis, {"distant metastasis"},
      {
          {"MX", {"pmx", "mx", "not applicable", "cannot be assessed"}},
          {"M0", {"pm0", "m0", "no evidence of distant metastasis"}},
          {"M1", {"pm1", "m1"}},
      }));

  std::vector<KeyStringSet> key_strings;
  key_strings.push_back(key_set(Category::TumorSize,
                                {"tumor size: [...] histologic type", "forming [...] the",
                                 "measure [...] the", "in greatest dimension"}));
  key_strings.push_back(key_set(Category::SizeOfLargestMetastaticDeposit,
                                {"largest metastatic focus in the lymph node",
                                 "lymph node metastasis:",
                                 "largest metastatic focus in the lymph node:",
                                 "largest metastasis measures", "lymph node measures"}));
  key_strings.push_back(key_set(Category::NumberOfLymphNodesInvolved,
                                {"number involved:", "number involved (total)",
                                 "number of lymph nodes involved:"}));
  key_strings.push_back(key_set(Category::NumberOfLymphNodesExamined,
                                {"number examined:", "number examined (total)",
                                 "number of lymph nodes examined:"}));

  std::set<std::string> aggressive = {"TallCell", "Hobnail", "ColumnarCell", "SolidTrabecular",
                                      "DiffuseSclerosing"};

  return ExtractionLexicon::build(std::move(entries), std::move(key_strings),
                                  std::move(aggressive), /*involved_of_examined=*/true);
}

}  // namespace

const ExtractionLexicon& default_lexicon() {
  static const ExtractionLexicon lex = build_default();
  return lex;
}

}  // namespace thyropath
