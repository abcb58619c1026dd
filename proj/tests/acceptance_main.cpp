// Acceptance harness: one pass/fail line per criterion, exit status is
// the number of failed criteria.  Each criterion pins its tolerance
// next to the check that uses it.
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "thyropath/classifier.hpp"
#include "thyropath/corpus_io.hpp"
#include "thyropath/evaluation.hpp"
#include "thyropath/extraction.hpp"
#include "thyropath/generator.hpp"
#include "thyropath/lexicon.hpp"

using namespace thyropath;

namespace {

bool expect(bool cond, std::string& why, const std::string& message) {
  if (!cond && why.empty()) why = message;
  return cond;
}

bool near(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

// ---------------------------------------------------------------------
// Criterion 1: the reference per-category score grids (accuracy,
// precision, recall, F1 at two decimals) must each admit integer
// tp/fp/fn tallies under the library's metric formulas.  A row passes
// when some tally reproduces the rounded precision and recall exactly
// and lands within +/-0.01 of the published accuracy and F1 (the slack
// absorbs the information lost by two-decimal rounding).
// ---------------------------------------------------------------------

struct GridRow {
  const char* label;
  double acc, p, r, f1;
};

struct Grid {
  const char* name;
  std::vector<GridRow> rows;
};

bool rounds_to(double x, double target) { return std::fabs(round_half_up_2(x) - target) < 1e-9; }

bool row_has_consistent_counts(const GridRow& row) {
  const double kSlack = 0.01 + 1e-9;
  for (std::size_t tp = 1; tp <= 400; ++tp) {
    std::vector<std::size_t> fps, fns;
    for (std::size_t fp = 0; fp <= 2000; ++fp) {
      double p = double(tp) / double(tp + fp);
      if (rounds_to(p, row.p))
        fps.push_back(fp);
      else if (p < row.p - 0.006)
        break;
    }
    if (fps.empty()) continue;
    for (std::size_t fn = 0; fn <= 2000; ++fn) {
      double r = double(tp) / double(tp + fn);
      if (rounds_to(r, row.r))
        fns.push_back(fn);
      else if (r < row.r - 0.006)
        break;
    }
    for (std::size_t fp : fps) {
      for (std::size_t fn : fns) {
        MentionMetrics m = compute_metrics(CategoryCounts{tp, fp, fn});
        if (!m.accuracy || !m.precision || !m.recall || !m.f1) continue;
        if (!rounds_to(*m.precision, row.p) || !rounds_to(*m.recall, row.r)) continue;
        if (std::fabs(round_half_up_2(*m.accuracy) - row.acc) <= kSlack &&
            std::fabs(round_half_up_2(*m.f1) - row.f1) <= kSlack)
          return true;
      }
    }
  }
  return false;
}

bool criterion_score_grids(std::string& why) {
  const std::vector<Grid> grids = {
      {"strict/structured",
       {{"Procedure", .69, .86, .78, .82},  {"Focality", .98, 1.0, .98, .99},
        {"Site", .77, .87, .87, .87},       {"Tumor size", 1.0, 1.0, 1.0, 1.0},
        {"Subtype", .66, .81, .78, .80},    {"Margins", .96, 1.0, .96, .98},
        {"Angioinvasion", .96, .99, .97, .98}, {"Lymphatic invasion", .95, .98, .97, .97},
        {"ETE", .90, .96, .94, .95},        {"Nodes involved", .61, .77, .74, .75},
        {"Nodes examined", .70, .92, .75, .83}, {"Deposit size", .81, .98, .83, .90},
        {"ENE", .95, .99, .96, .97},        {"Staging", 1.0, 1.0, 1.0, 1.0},
        {"T stage", .98, 1.0, .98, .99},    {"N stage", .98, 1.0, .98, .99},
        {"M stage", .98, 1.0, .98, .99},    {"Overall", .88, .95, .91, .93}}},
      {"strict/unstructured",
       {{"Procedure", .70, .92, .74, .82},  {"Focality", .94, .98, .96, .97},
        {"Site", .72, .90, .79, .84},       {"Tumor size", 1.0, 1.0, 1.0, 1.0},
        {"Subtype", .74, .88, .82, .85},    {"Margins", .54, 1.0, .54, .70},
        {"Angioinvasion", .96, .98, .98, .98}, {"Lymphatic invasion", .88, .94, .94, .94},
        {"LVI", .83, .93, .88, .91},        {"ETE", .90, .96, .94, .95},
        {"Nodes involved", .68, 1.0, .68, .81}, {"Nodes examined", .90, 1.0, .90, .95},
        {"Deposit size", .92, .98, .94, .96},   {"ENE", .45, .63, .61, .62},
        {"Staging", 1.0, 1.0, 1.0, 1.0},    {"T stage", 1.0, 1.0, 1.0, 1.0},
        {"N stage", .96, .98, .98, .98},    {"M stage", .92, .96, .96, .96},
        {"Overall", .84, .95, .87, .90}}},
      {"lenient/structured",
       {{"Procedure", .84, .93, .90, .92},  {"Focality", .98, 1.0, .98, .99},
        {"Site", .89, .95, .94, .94},       {"Tumor size", 1.0, 1.0, 1.0, 1.0},
        {"Subtype", .71, .84, .82, .83},    {"Margins", .96, 1.0, .96, .98},
        {"Angioinvasion", .96, .99, .97, .98}, {"Lymphatic invasion", .95, .98, .97, .97},
        {"ETE", .90, .96, .94, .95},        {"Nodes involved", .79, .98, .80, .88},
        {"Nodes examined", .79, .98, .80, .88}, {"Deposit size", .81, .98, .83, .90},
        {"ENE", .95, .99, .96, .97},        {"Staging", 1.0, 1.0, 1.0, 1.0},
        {"T stage", .98, 1.0, .98, .99},    {"N stage", .98, 1.0, .98, .99},
        {"M stage", .98, 1.0, .98, .99},    {"Overall", .91, .98, .93, .95}}},
      {"lenient/unstructured",
       {{"Procedure", .71, .88, .78, .83},  {"Focality", .94, .98, .96, .97},
        {"Site", .83, .93, .89, .91},       {"Tumor size", 1.0, 1.0, 1.0, 1.0},
        {"Subtype", .74, .88, .82, .85},    {"Margins", .62, .78, .75, .76},
        {"Angioinvasion", 1.0, 1.0, 1.0, 1.0}, {"Lymphatic invasion", .92, .96, .96, .96},
        {"LVI", .94, 1.0, .94, .97},        {"ETE", .90, .96, .94, .95},
        {"Nodes involved", .68, 1.0, .68, .81}, {"Nodes examined", .90, 1.0, .90, .95},
        {"Deposit size", .92, .98, .94, .96},   {"ENE", .80, .90, .88, .89},
        {"Staging", 1.0, 1.0, 1.0, 1.0},    {"T stage", 1.0, 1.0, 1.0, 1.0},
        {"N stage", 1.0, 1.0, 1.0, 1.0},    {"M stage", 1.0, 1.0, 1.0, 1.0},
        {"Overall", .88, .96, .91, .93}}},
  };

  bool ok = true;
  for (const Grid& grid : grids)
    for (const GridRow& row : grid.rows)
      ok = expect(row_has_consistent_counts(row), why,
                  std::string(grid.name) + " " + row.label + ": no integer tally reproduces " +
                      "the reference accuracy/precision/recall/F1 row") &&
           ok;
  return ok;
}

// ---------------------------------------------------------------------
// Criterion 2: the reference 4x4 agreement fixture.  Tolerance 1e-4 on
// every ratio; the discrepancy count is exact.
// ---------------------------------------------------------------------

bool criterion_confusion_fixture(std::string& why) {
  std::vector<RiskCategory> gold, pred;
  auto add = [&](RiskCategory g, RiskCategory p, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      gold.push_back(g);
      pred.push_back(p);
    }
  };
  add(RiskCategory::High, RiskCategory::High, 10);
  add(RiskCategory::High, RiskCategory::Intermediate, 2);
  add(RiskCategory::High, RiskCategory::Low, 1);
  add(RiskCategory::Intermediate, RiskCategory::Intermediate, 33);
  add(RiskCategory::Intermediate, RiskCategory::Low, 5);
  add(RiskCategory::Low, RiskCategory::Low, 62);
  add(RiskCategory::VeryLow, RiskCategory::VeryLow, 7);

  ConfusionMatrix4 m = confusion_matrix(gold, pred);
  ClassificationMetrics cm = classification_metrics(m);

  bool ok = expect(m.total() == 120 && m.trace() == 112, why, "matrix totals are off");
  ok = expect(near(cm.overall_accuracy, 0.9333, 1e-4), why,
              "overall accuracy " + std::to_string(cm.overall_accuracy) + " != 0.9333") &&
       ok;
  const double per_class[4] = {0.7692, 0.8684, 1.0, 1.0};
  for (std::size_t i = 0; i < 4; ++i) {
    ok = expect(cm.per_class_accuracy[i].has_value() &&
                    near(*cm.per_class_accuracy[i], per_class[i], 1e-4),
                why, std::string("per-class accuracy mismatch for ") +
                         display_name(ConfusionMatrix4::category_at(i))) &&
         ok;
  }
  ok = expect(cm.significant_discrepancies == 1, why,
              "significant discrepancies != 1 (exactly one high case was read as low)") &&
       ok;
  // Closed form for this table: po = 112/120, pe = 5725/14400,
  // kappa = 7715/8675 = 0.88934...
  double kappa = cohen_kappa(m);
  ok = expect(near(kappa, 0.8893, 1e-4), why, "kappa " + std::to_string(kappa) + " != 0.8893") &&
       ok;
  return ok;
}

// ---------------------------------------------------------------------
// Criterion 3: the golden synoptic report yields its exact mention
// inventory and classifies high-risk under both policies, with the two
// expected triggers in ledger order.
// ---------------------------------------------------------------------

bool criterion_golden_report(std::string& why) {
  struct Row {
    Category category;
    const char* surface;
    AttributeValue value;
  };
  const std::vector<Row> want = {
      {Category::Procedure, "Total thyroidectomy", AttributeValue::categorical("TotalThyroidectomy")},
      {Category::TumorFocality, "Unifocal", AttributeValue::categorical("Unifocal")},
      {Category::TumorSite, "Right lobe", AttributeValue::categorical("RightLobe")},
      {Category::TumorSize, "2.8 cm", AttributeValue::length_cm(2.8)},
      {Category::HistologicSubtype, "classic", AttributeValue::categorical("Classic")},
      {Category::Margins, "Involved by carcinoma", AttributeValue::categorical("Positive")},
      {Category::Angioinvasion, "Not identified", AttributeValue::categorical("Negative")},
      {Category::LymphaticInvasion, "Present", AttributeValue::categorical("Positive")},
      {Category::ExtrathyroidalExtension, "Not identified", AttributeValue::categorical("Negative")},
      {Category::NumberOfLymphNodesInvolved, "23", AttributeValue::count(23)},
      {Category::NumberOfLymphNodesExamined, "44", AttributeValue::count(44)},
      {Category::SizeOfLargestMetastaticDeposit, "5.5 cm", AttributeValue::length_cm(5.5)},
      {Category::ExtranodalExtension, "Present", AttributeValue::categorical("Positive")},
      {Category::PathologicStaging, "AJCC, 8th edition", AttributeValue::staging(8)},
      {Category::PrimaryTumorTNM, "pT2", AttributeValue::tnm("T2")},
      {Category::LymphNodesTNM, "pN1b", AttributeValue::tnm("N1")},
      {Category::DistantMetastasis, "Not applicable", AttributeValue::tnm("MX")},
  };

  const ExtractionLexicon& lex = default_lexicon();
  ReportDocument doc = fixtures::synoptic_doc();
  std::vector<Mention> got = extract(doc, lex);

  bool ok = expect(got.size() == want.size(), why,
                   "expected " + std::to_string(want.size()) + " mentions, extracted " +
                       std::to_string(got.size()));
  if (ok) {
    for (std::size_t i = 0; i < got.size(); ++i) {
      bool row_ok = got[i].category == want[i].category && got[i].surface == want[i].surface &&
                    values_equal(got[i].value, want[i].value);
      ok = expect(row_ok, why,
                  "mention " + std::to_string(i) + " mismatches (got " +
                      std::string(display_name(got[i].category)) + " '" + got[i].surface + "')") &&
           ok;
    }
  }

  FeatureRecord rec = to_feature_record(doc, got);
  RuleTable table = default_rule_table(lex.aggressive_histologies());
  for (Policy policy : {Policy::Permissive, Policy::Strict}) {
    try {
      RiskAssignment a = classify(rec, table, policy);
      bool triggers_ok = a.risk == RiskCategory::High && a.triggers.size() == 2 &&
                         a.triggers[0].rule_id == "H1" && a.triggers[0].value_text == "Positive" &&
                         a.triggers[1].rule_id == "H2" && a.triggers[1].value_text == "5.5";
      ok = expect(triggers_ok, why,
                  std::string("policy ") + to_string(policy) +
                      ": expected high risk with triggers H1(Positive), H2(5.5)") &&
           ok;
    } catch (const ClassifierError& e) {
      ok = expect(false, why, std::string("classification threw: ") + e.what()) && ok;
    }
  }
  return ok;
}

// ---------------------------------------------------------------------
// Criterion 4: three independent statements of the risk ledger agree.
// (a) the table-driven classifier reproduces the generator's latent
// label on 200 synthetic records; (b) it matches the generator's direct
// predicate oracle on 10,000 random feature records.  Zero mismatches
// allowed.
// ---------------------------------------------------------------------

struct SplitMix {
  // Tiny deterministic engine so random records are identical on every
  // platform and standard library.
  std::uint64_t state;
  explicit SplitMix(std::uint64_t seed) : state(seed) {}
  std::uint64_t next() {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(next() % n); }
  bool chance(double p) { return (next() >> 11) * 0x1.0p-53 < p; }
};

FeatureRecord random_record(SplitMix& eng) {
  const double sizes[] = {0.2, 0.5, 0.9, 0.99, 1.0, 1.5, 2.5, 3.9, 4.0, 4.01, 4.5, 6.0};
  const double deposits[] = {0.2, 0.5, 0.99, 1.0, 1.5, 3.0, 3.01, 3.5, 5.5};
  const long nodes[] = {0, 1, 2, 5, 6, 9, 23};
  const char* subtypes[] = {"Classic",        "FollicularVariant", "Oncocytic",
                            "WarthinLike",    "TallCell",          "Hobnail",
                            "ColumnarCell",   "SolidTrabecular",   "DiffuseSclerosing"};
  const char* etes[] = {"Negative", "MicroscopicMinimal", "MicroscopicModerateSevere",
                        "Macroscopic"};
  const char* ms[] = {"MX", "M0", "M1"};

  FeatureRecord r;
  if (eng.chance(0.8)) r.set_slot(Category::TumorSize, AttributeValue::length_cm(sizes[eng.index(12)]));
  if (eng.chance(0.5))
    r.set_slot(Category::SizeOfLargestMetastaticDeposit,
               AttributeValue::length_cm(deposits[eng.index(9)]));
  if (eng.chance(0.6))
    r.set_slot(Category::NumberOfLymphNodesInvolved, AttributeValue::count(nodes[eng.index(7)]));
  if (eng.chance(0.5))
    r.set_slot(Category::NumberOfLymphNodesExamined, AttributeValue::count(nodes[eng.index(7)]));
  if (eng.chance(0.7))
    r.set_slot(Category::HistologicSubtype, AttributeValue::categorical(subtypes[eng.index(9)]));
  if (eng.chance(0.7))
    r.set_slot(Category::ExtranodalExtension,
               AttributeValue::categorical(eng.chance(0.5) ? "Positive" : "Negative"));
  if (eng.chance(0.7))
    r.set_slot(Category::Angioinvasion,
               AttributeValue::categorical(eng.chance(0.5) ? "Positive" : "Negative"));
  if (eng.chance(0.7))
    r.set_slot(Category::ExtrathyroidalExtension, AttributeValue::categorical(etes[eng.index(4)]));
  if (eng.chance(0.3)) r.set_slot(Category::DistantMetastasis, AttributeValue::tnm(ms[eng.index(3)]));
  if (eng.chance(0.3))
    r.set_slot(Category::Margins,
               AttributeValue::categorical(eng.chance(0.5) ? "Positive" : "Negative"));
  return r;
}

bool criterion_oracle_agreement(std::string& why) {
  const ExtractionLexicon& lex = default_lexicon();
  RuleTable table = default_rule_table(lex.aggressive_histologies());

  GeneratorConfig cfg;
  cfg.seed = 42;
  cfg.n = 200;
  cfg.structured_fraction = 0.5;
  cfg.noise = NoiseProfile::standard();
  auto corpus = generate_synthetic(cfg, lex);

  std::size_t latent_mismatches = 0;
  for (const auto& sd : corpus) {
    RiskAssignment a = classify(sd.record, table, Policy::Permissive);
    if (!sd.gold.risk || a.risk != *sd.gold.risk) ++latent_mismatches;
  }
  bool ok = expect(latent_mismatches == 0, why,
                   std::to_string(latent_mismatches) +
                       "/200 synthetic records classified differently from their latent label");

  SplitMix eng(20260816ull);
  std::size_t oracle_mismatches = 0;
  for (int i = 0; i < 10000; ++i) {
    FeatureRecord rec = random_record(eng);
    RiskAssignment a = classify(rec, table, Policy::Permissive);
    if (a.risk != generator_risk_oracle(rec, lex.aggressive_histologies())) ++oracle_mismatches;
  }
  ok = expect(oracle_mismatches == 0, why,
              std::to_string(oracle_mismatches) +
                  "/10000 random records disagree with the predicate oracle") &&
       ok;
  return ok;
}

// ---------------------------------------------------------------------
// Criterion 5: a noise-free structured corpus must round-trip
// perfectly: strict extraction F1 = 1.00 in every category, and the
// classified risks must match the generated labels on all documents.
// ---------------------------------------------------------------------

bool criterion_clean_roundtrip(std::string& why) {
  const ExtractionLexicon& lex = default_lexicon();
  RuleTable table = default_rule_table(lex.aggressive_histologies());

  GeneratorConfig cfg;
  cfg.seed = 42;
  cfg.n = 200;
  cfg.structured_fraction = 1.0;
  cfg.noise = NoiseProfile::none();
  auto corpus = generate_synthetic(cfg, lex);

  std::map<Category, CategoryCounts> totals;
  std::size_t risk_mismatches = 0;
  for (const auto& sd : corpus) {
    auto preds = extract(sd.doc, lex);
    add_counts(totals, match_by_category(sd.gold.mentions, preds, MatchMode::Strict));
    RiskAssignment a = classify(to_feature_record(sd.doc, preds), table, Policy::Permissive);
    if (!sd.gold.risk || a.risk != *sd.gold.risk) ++risk_mismatches;
  }

  bool ok = expect(!totals.empty(), why, "no mentions were matched at all");
  for (const auto& [cat, counts] : totals) {
    bool perfect = counts.fp == 0 && counts.fn == 0 && counts.tp > 0;
    ok = expect(perfect, why,
                std::string(display_name(cat)) + ": tp=" + std::to_string(counts.tp) +
                    " fp=" + std::to_string(counts.fp) + " fn=" + std::to_string(counts.fn) +
                    " (strict F1 must be 1.00)") &&
         ok;
  }
  ok = expect(risk_mismatches == 0, why,
              std::to_string(risk_mismatches) + "/200 clean documents classified off-label") &&
       ok;
  return ok;
}

// ---------------------------------------------------------------------
// Criterion 6: across 20 seeds of noisy mixed corpora, lenient matching
// never scores below strict in any category, and the unstructured
// strict micro-F1 never exceeds the structured strict micro-F1.
// ---------------------------------------------------------------------

bool criterion_noise_ordering(std::string& why) {
  const ExtractionLexicon& lex = default_lexicon();
  bool ok = true;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    GeneratorConfig cfg;
    cfg.seed = seed;
    cfg.n = 60;
    cfg.structured_fraction = 0.5;
    cfg.noise = NoiseProfile::standard();
    auto corpus = generate_synthetic(cfg, lex);

    std::map<Category, CategoryCounts> strict, lenient, structured, unstructured;
    for (const auto& sd : corpus) {
      auto preds = extract(sd.doc, lex);
      auto s = match_by_category(sd.gold.mentions, preds, MatchMode::Strict);
      add_counts(strict, s);
      add_counts(lenient, match_by_category(sd.gold.mentions, preds, MatchMode::Lenient));
      add_counts(sd.doc.format_hint == FormatHint::Structured ? structured : unstructured, s);
    }

    for (const auto& [cat, s] : strict) {
      auto it = lenient.find(cat);
      bool bound = it != lenient.end() && it->second.tp >= s.tp && it->second.fn <= s.fn;
      ok = expect(bound, why,
                  "seed " + std::to_string(seed) + ", " + display_name(cat) +
                      ": lenient scored below strict") &&
           ok;
    }

    auto s_f1 = micro_average(structured).f1;
    auto u_f1 = micro_average(unstructured).f1;
    bool format_bound = s_f1.has_value() && u_f1.has_value() && *u_f1 <= *s_f1 + 1e-9;
    ok = expect(format_bound, why,
                "seed " + std::to_string(seed) +
                    ": unstructured strict micro-F1 exceeds structured") &&
         ok;
  }
  return ok;
}

// ---------------------------------------------------------------------
// Criterion 7: cross-cutting invariants.  (a) generated spans always
// reproduce their surface text; (b) millimeter and centimeter
// phrasings resolve to equal records; (c) adding risk factors never
// lowers the assigned risk; (d) all reported metrics stay within
// [0, 1] and F1 lies between precision and recall; (e) perfect
// agreement scores kappa 1; (f) generation is rerun-identical.
// ---------------------------------------------------------------------

bool criterion_invariants(std::string& why) {
  const ExtractionLexicon& lex = default_lexicon();
  RuleTable table = default_rule_table(lex.aggressive_histologies());
  bool ok = true;

  {  // (a) span/surface consistency
    GeneratorConfig cfg;
    cfg.seed = 123;
    cfg.n = 50;
    cfg.structured_fraction = 0.5;
    cfg.noise = NoiseProfile::standard();
    std::size_t bad = 0;
    for (const auto& sd : generate_synthetic(cfg, lex)) {
      try {
        validate_annotation(sd.gold, sd.doc);
      } catch (const SpanError&) {
        ++bad;
      }
    }
    ok = expect(bad == 0, why, std::to_string(bad) + " generated annotations failed validation") &&
         ok;
  }

  {  // (b) unit equivalence
    ReportDocument mm{"mm", "Tumor Size: 12 mm.", FormatHint::Structured};
    ReportDocument cm{"cm", "Tumor Size: 1.2 cm.", FormatHint::Structured};
    auto rec_mm = to_feature_record(mm, extract(mm, lex));
    auto rec_cm = to_feature_record(cm, extract(cm, lex));
    bool equal = rec_mm.tumor_size_cm().has_value() && rec_cm.tumor_size_cm().has_value() &&
                 values_equal(*rec_mm.slot(Category::TumorSize), *rec_cm.slot(Category::TumorSize));
    ok = expect(equal, why, "12 mm and 1.2 cm did not resolve to equal tumor sizes") && ok;
  }

  {  // (c) risk monotonicity under escalation
    SplitMix eng(7ull);
    std::size_t violations = 0;
    for (int i = 0; i < 500; ++i) {
      FeatureRecord base = random_record(eng);
      auto rank = [&](const FeatureRecord& r) {
        return static_cast<int>(classify(r, table, Policy::Permissive).risk);
      };
      int base_rank = rank(base);
      FeatureRecord up = base;
      up.set_slot(Category::ExtranodalExtension, AttributeValue::categorical("Positive"));
      if (rank(up) < base_rank) ++violations;
      up = base;
      up.set_slot(Category::ExtrathyroidalExtension, AttributeValue::categorical("Macroscopic"));
      if (rank(up) < base_rank) ++violations;
      up = base;
      if (auto size = base.tumor_size_cm())
        up.set_slot(Category::TumorSize, AttributeValue::length_cm(*size + 1.1));
      if (rank(up) < base_rank) ++violations;
      up = base;
      if (auto dep = base.deposit_cm())
        up.set_slot(Category::SizeOfLargestMetastaticDeposit,
                    AttributeValue::length_cm(*dep + 1.1));
      if (rank(up) < base_rank) ++violations;
    }
    ok = expect(violations == 0, why,
                std::to_string(violations) + " escalations lowered the assigned risk") &&
         ok;
  }

  {  // (d) metric bounds
    bool bounds_ok = true;
    for (std::size_t tp = 0; tp <= 12 && bounds_ok; ++tp)
      for (std::size_t fp = 0; fp <= 12 && bounds_ok; ++fp)
        for (std::size_t fn = 0; fn <= 12 && bounds_ok; ++fn) {
          MentionMetrics m = compute_metrics(CategoryCounts{tp, fp, fn});
          for (const auto& v : {m.accuracy, m.precision, m.recall, m.f1})
            if (v && (*v < 0.0 || *v > 1.0)) bounds_ok = false;
          if (m.f1 && m.precision && m.recall) {
            double lo = std::min(*m.precision, *m.recall);
            double hi = std::max(*m.precision, *m.recall);
            if (*m.f1 < lo - 1e-12 || *m.f1 > hi + 1e-12) bounds_ok = false;
          }
        }
    ok = expect(bounds_ok, why, "a metric left [0, 1] or F1 left [min(P,R), max(P,R)]") && ok;
  }

  {  // (e) kappa of perfect agreement
    std::vector<RiskCategory> labels;
    for (int i = 0; i < 6; ++i) labels.push_back(RiskCategory::High);
    for (int i = 0; i < 9; ++i) labels.push_back(RiskCategory::Low);
    for (int i = 0; i < 2; ++i) labels.push_back(RiskCategory::VeryLow);
    ok = expect(near(cohen_kappa(labels, labels), 1.0, 1e-12), why,
                "perfect self-agreement did not score kappa 1") &&
         ok;
  }

  {  // (f) deterministic regeneration
    GeneratorConfig cfg;
    cfg.seed = 5;
    cfg.n = 30;
    cfg.structured_fraction = 0.5;
    cfg.noise = NoiseProfile::standard();
    auto sig = [&](const std::vector<SyntheticDoc>& corpus) {
      std::string s;
      for (const auto& sd : corpus) {
        s += document_to_line(sd.doc);
        s += annotation_to_line(sd.gold);
      }
      return s;
    };
    ok = expect(sig(generate_synthetic(cfg, lex)) == sig(generate_synthetic(cfg, lex)), why,
                "two runs with one seed produced different corpora") &&
         ok;
  }

  return ok;
}

// ---------------------------------------------------------------------
// Criterion 8: a 270-record cohort engineered so each record's first
// trigger is a chosen rule must reproduce the reference first-trigger
// distribution exactly (tier shares within 0.5 percentage points of
// the reference percentages) and a perfect-diagonal agreement matrix.
// ---------------------------------------------------------------------

struct CohortSlice {
  const char* rule_id;
  RiskCategory tier;
  double reference_percent;  // share of the tier's first triggers
  std::size_t count;
  FeatureRecord record;
};

FeatureRecord make_record(std::initializer_list<std::pair<Category, AttributeValue>> slots) {
  FeatureRecord r;
  for (const auto& [c, v] : slots) r.set_slot(c, v);
  return r;
}

bool criterion_trigger_mix(std::string& why) {
  using AV = AttributeValue;
  const auto size = [](double v) { return std::pair(Category::TumorSize, AV::length_cm(v)); };
  const auto deposit = [](double v) {
    return std::pair(Category::SizeOfLargestMetastaticDeposit, AV::length_cm(v));
  };
  const auto involved = [](long n) {
    return std::pair(Category::NumberOfLymphNodesInvolved, AV::count(n));
  };
  const auto ene = [](const char* v) {
    return std::pair(Category::ExtranodalExtension, AV::categorical(v));
  };
  const auto ete = [](const char* v) {
    return std::pair(Category::ExtrathyroidalExtension, AV::categorical(v));
  };

  std::vector<CohortSlice> cohort = {
      {"H1", RiskCategory::High, 60.0, 21, make_record({size(2.5), ene("Positive")})},
      {"H2", RiskCategory::High, 34.2, 12,
       make_record({size(2.5), deposit(3.5), involved(7), ene("Negative")})},
      {"H3", RiskCategory::High, 2.9, 1,
       make_record({size(2.5), ene("Negative"),
                    {Category::DistantMetastasis, AV::tnm("M1")}})},
      {"H4", RiskCategory::High, 2.9, 1,
       make_record({size(2.5), ene("Negative"), ete("Macroscopic")})},
      {"I1", RiskCategory::Intermediate, 44.8, 26, make_record({size(2.5), involved(7)})},
      {"I2", RiskCategory::Intermediate, 29.3, 17, make_record({size(4.5), involved(2)})},
      {"I3", RiskCategory::Intermediate, 12.1, 7,
       make_record({size(2.5), {Category::Angioinvasion, AV::categorical("Positive")}})},
      {"I4", RiskCategory::Intermediate, 6.9, 4,
       make_record({size(2.5), deposit(2.0), involved(2)})},
      {"I5", RiskCategory::Intermediate, 6.9, 4,
       make_record({size(2.5), {Category::HistologicSubtype, AV::categorical("TallCell")}})},
      {"L1", RiskCategory::Low, 79.5, 116, make_record({size(2.5)})},
      {"L2", RiskCategory::Low, 18.5, 27, make_record({size(0.5), involved(3)})},
      {"L3", RiskCategory::Low, 1.4, 2, make_record({size(0.5), ete("MicroscopicMinimal")})},
      {"L4", RiskCategory::Low, 0.6, 1, make_record({size(0.5), deposit(0.5)})},
      {"VL1", RiskCategory::VeryLow, 100.0, 31, make_record({size(0.5)})},
  };

  const ExtractionLexicon& lex = default_lexicon();
  RuleTable table = default_rule_table(lex.aggressive_histologies());

  std::vector<RiskAssignment> assignments;
  std::vector<RiskCategory> intended, assigned;
  bool ok = true;
  for (const auto& slice : cohort) {
    for (std::size_t i = 0; i < slice.count; ++i) {
      RiskAssignment a = classify(slice.record, table, Policy::Permissive);
      bool first_ok = a.risk == slice.tier && !a.triggers.empty() &&
                      a.triggers[0].rule_id == slice.rule_id;
      ok = expect(first_ok, why,
                  std::string("record engineered for ") + slice.rule_id +
                      " did not fire it as its first trigger") &&
           ok;
      intended.push_back(slice.tier);
      assigned.push_back(a.risk);
      assignments.push_back(std::move(a));
    }
  }
  ok = expect(assignments.size() == 270, why, "cohort is not 270 records") && ok;

  // First-trigger tallies must match the engineered counts exactly.
  auto dist = trigger_distribution(assignments);
  std::map<RiskCategory, std::size_t> tier_totals;
  for (const auto& slice : cohort) tier_totals[slice.tier] += slice.count;
  for (const auto& slice : cohort) {
    auto it = dist.find(slice.rule_id);
    std::size_t got = it == dist.end() ? 0 : it->second;
    ok = expect(got == slice.count, why,
                std::string(slice.rule_id) + ": tallied " + std::to_string(got) + ", expected " +
                    std::to_string(slice.count)) &&
         ok;
    double share = 100.0 * double(got) / double(tier_totals[slice.tier]);
    ok = expect(near(share, slice.reference_percent, 0.5), why,
                std::string(slice.rule_id) + ": tier share " + std::to_string(share) +
                    "% is off the reference " + std::to_string(slice.reference_percent) + "%") &&
         ok;
  }
  ok = expect(dist.size() == cohort.size(), why, "unexpected extra trigger ids in the tally") && ok;

  // Perfect diagonal: 35 / 58 / 146 / 31, no off-diagonal mass.
  ConfusionMatrix4 m = confusion_matrix(intended, assigned);
  const std::size_t diag[4] = {35, 58, 146, 31};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      std::size_t want = i == j ? diag[i] : 0;
      ok = expect(m.cells[i][j] == want, why,
                  "agreement matrix cell (" + std::to_string(i) + "," + std::to_string(j) +
                      ") = " + std::to_string(m.cells[i][j]) + ", expected " +
                      std::to_string(want)) &&
           ok;
    }
  ok = expect(near(cohen_kappa(m), 1.0, 1e-12), why, "cohort kappa is not exactly 1") && ok;
  return ok;
}

struct Criterion {
  const char* name;
  bool (*run)(std::string&);
};

}  // namespace

int main() {
  const Criterion criteria[] = {
      {"reference extraction score grids admit consistent integer tallies", criterion_score_grids},
      {"reference confusion fixture reproduces pinned agreement statistics",
       criterion_confusion_fixture},
      {"golden synoptic report extracts and classifies exactly", criterion_golden_report},
      {"classifier agrees with independent oracle restatements", criterion_oracle_agreement},
      {"noise-free structured corpus round-trips to perfect scores", criterion_clean_roundtrip},
      {"lenient bounds strict and unstructured never beats structured", criterion_noise_ordering},
      {"cross-cutting invariants: units, monotonicity, bounds, determinism",
       criterion_invariants},
      {"engineered cohort reproduces the reference trigger distribution", criterion_trigger_mix},
  };

  int failures = 0;
  int index = 1;
  for (const Criterion& c : criteria) {
    std::string why;
    bool ok = false;
    try {
      ok = c.run(why);
    } catch (const std::exception& e) {
      why = std::string("unhandled exception: ") + e.what();
    }
    if (ok) {
      std::printf("[PASS] %d. %s\n", index, c.name);
    } else {
      std::printf("[FAIL] %d. %s -- %s\n", index, c.name, why.c_str());
      ++failures;
    }
    ++index;
  }
  std::printf("acceptance: %d/8 criteria passed\n", 8 - failures);
  return failures;
}
