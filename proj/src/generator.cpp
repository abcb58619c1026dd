#include "thyropath/generator.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <iterator>
#include <random>
#include <stdexcept>
#include <string>

#include "thyropath/extraction.hpp"

namespace thyropath {

namespace {

// All randomness funnels through this wrapper; the raw engine output is
// converted by hand so corpora are byte-identical across platforms.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  bool chance(double p) { return uniform() < p; }
  std::size_t index(std::size_t n) {
    return n == 0 ? 0 : static_cast<std::size_t>(uniform() * static_cast<double>(n));
  }
  long range(long lo, long hi) {  // inclusive
    return lo + static_cast<long>(index(static_cast<std::size_t>(hi - lo + 1)));
  }
  const char* pick(std::initializer_list<const char*> options) {
    return *(options.begin() + index(options.size()));
  }
  // First option unless synonym noise fires.
  const char* surface(double synonym_rate, std::initializer_list<const char*> options) {
    if (options.size() > 1 && chance(synonym_rate)) return pick(options);
    return *options.begin();
  }

 private:
  std::mt19937_64 eng_;
};

// Latent truth behind one report. Lengths are integer millimeters so
// rendering in either unit stays exact.
struct Case {
  std::string procedure;
  bool multifocal = false;
  std::string site;  // canonical; empty = unstated
  int size_mm = 8;
  int second_mm = 0;  // second nodule when multifocal
  std::string subtype = "Classic";
  bool subtype_underspecified = false;  // render as "follicular subtype"
  std::string margins = "Negative";
  std::string angio = "Negative";
  std::string lymphatic = "Negative";
  std::string lvi = "Negative";
  std::string ete = "Negative";
  long involved = 0;
  long examined = 0;
  int deposit_mm = 0;  // 0 = absent
  std::string ene = "Negative";
  int edition = 8;
  std::string t_code = "T1", n_code = "NX", m_code = "MX";
};

const char* kNonAggressive[] = {
    "Classic", "Classic", "Classic", "Classic", "FollicularVariantInfiltrative",
    "FollicularVariantEncapsulated", "EncapsulatedVariant", "Oncocytic", "WarthinLike",
    "CribriformMorular",
};

const char* kAggressive[] = {"TallCell", "Hobnail", "ColumnarCell", "SolidTrabecular",
                             "DiffuseSclerosing"};

void sample_nodes(Rng& rng, Case& c, long lo, long hi) {
  c.involved = rng.range(lo, hi);
  c.examined = std::min<long>(44, c.involved + rng.range(0, 21));
  if (c.examined < c.involved) c.examined = c.involved;
}

Case sample_case(Rng& rng) {
  Case c;
  c.procedure = rng.pick({"TotalThyroidectomy", "TotalThyroidectomy", "TotalThyroidectomy",
                          "Hemithyroidectomy", "Hemithyroidectomy", "SubtotalThyroidectomy"});
  c.site = rng.pick({"RightLobe", "RightLobe", "LeftLobe", "LeftLobe", "Isthmus", ""});
  c.subtype = kNonAggressive[rng.index(std::size(kNonAggressive))];
  c.margins = rng.chance(0.2) ? "Positive" : "Negative";
  c.lymphatic = rng.chance(0.3) ? "Positive" : "Negative";
  c.lvi = rng.chance(0.25) ? "Positive" : "Negative";
  c.edition = rng.chance(0.3) ? 7 : 8;
  c.m_code = rng.chance(0.5) ? "MX" : "M0";
  c.examined = rng.chance(0.4) ? 0 : rng.range(1, 8);

  double u = rng.uniform();
  if (u < 0.14) {
    // very low: sub-centimeter tumor, nothing that fires a rule
    c.size_mm = static_cast<int>(rng.range(2, 9));
    c.involved = 0;
  } else if (u < 0.62) {
    double d = rng.uniform();
    if (d < 0.72) {  // tumor 1-4 cm
      c.size_mm = static_cast<int>(rng.range(10, 40));
      if (rng.chance(0.35)) {
        sample_nodes(rng, c, 1, 5);
        if (rng.chance(0.5)) c.deposit_mm = static_cast<int>(rng.range(1, 9));
      }
    } else if (d < 0.88) {  // node-positive microcarcinoma
      c.size_mm = static_cast<int>(rng.range(2, 9));
      sample_nodes(rng, c, 1, 5);
      if (rng.chance(0.5)) c.deposit_mm = static_cast<int>(rng.range(1, 9));
    } else if (d < 0.95) {  // minimal extrathyroidal extension
      c.size_mm = static_cast<int>(rng.range(2, 9));
      c.ete = "MicroscopicMinimal";
    } else {  // sub-centimeter deposit
      c.size_mm = static_cast<int>(rng.range(2, 9));
      sample_nodes(rng, c, 1, 5);
      c.deposit_mm = static_cast<int>(rng.range(1, 9));
    }
  } else if (u < 0.85) {
    double d = rng.uniform();
    if (d < 0.42) {  // more than 5 nodes
      c.size_mm = static_cast<int>(rng.range(5, 40));
      sample_nodes(rng, c, 6, 23);
      if (rng.chance(0.5)) c.deposit_mm = static_cast<int>(rng.range(5, 30));
    } else if (d < 0.70) {  // tumor above 4 cm
      c.size_mm = static_cast<int>(rng.range(41, 65));
      if (rng.chance(0.3)) {
        sample_nodes(rng, c, 1, 5);
        if (rng.chance(0.5)) c.deposit_mm = static_cast<int>(rng.range(1, 9));
      }
    } else if (d < 0.83) {  // angioinvasion
      c.size_mm = static_cast<int>(rng.range(5, 40));
      c.angio = "Positive";
    } else if (d < 0.90) {  // deposit 1-3 cm
      c.size_mm = static_cast<int>(rng.range(5, 40));
      sample_nodes(rng, c, 1, 5);
      c.deposit_mm = static_cast<int>(rng.range(10, 30));
    } else if (d < 0.96) {  // aggressive subtype
      c.size_mm = static_cast<int>(rng.range(5, 40));
      c.subtype = kAggressive[rng.index(std::size(kAggressive))];
    } else {  // moderate/severe microscopic extension
      c.size_mm = static_cast<int>(rng.range(5, 40));
      c.ete = "MicroscopicModerateSevere";
    }
  } else {
    double d = rng.uniform();
    if (d < 0.60) {  // extranodal extension
      c.size_mm = static_cast<int>(rng.range(5, 55));
      sample_nodes(rng, c, 1, 23);
      c.ene = "Positive";
      if (rng.chance(0.6)) c.deposit_mm = static_cast<int>(rng.range(5, 35));
    } else if (d < 0.92) {  // deposit above 3 cm
      c.size_mm = static_cast<int>(rng.range(5, 45));
      sample_nodes(rng, c, 1, 23);
      c.deposit_mm = static_cast<int>(rng.range(31, 55));
    } else if (d < 0.97) {  // distant metastasis
      c.size_mm = static_cast<int>(rng.range(10, 45));
      c.m_code = "M1";
      if (c.examined == 0) c.examined = rng.range(1, 8);
    } else {  // gross extension
      c.size_mm = static_cast<int>(rng.range(10, 55));
      c.ete = "Macroscopic";
    }
  }

  c.multifocal = rng.chance(0.2);
  if (c.multifocal) c.second_mm = std::max(1, c.size_mm - static_cast<int>(rng.range(1, 5)));

  if (c.ete == "Macroscopic")
    c.t_code = "T4";
  else if (c.size_mm > 40)
    c.t_code = "T3";
  else if (c.size_mm > 20)
    c.t_code = "T2";
  else
    c.t_code = "T1";
  c.n_code = c.involved > 0 ? "N1" : (c.examined > 0 ? "N0" : "NX");
  return c;
}

std::string fmt_cm(int mm) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "%d.%d", mm / 10, mm % 10);
  return buf;
}

// Records gold mention spans while assembling the document text.
struct Builder {
  std::string text;
  std::vector<Mention> gold;

  void raw(std::string_view s) { text.append(s); }

  void mark(Category c, std::string_view surface, AttributeValue v) {
    Mention m;
    m.category = c;
    m.surface = std::string(surface);
    m.begin = text.size();
    m.end = text.size() + surface.size();
    m.value = std::move(v);
    gold.push_back(std::move(m));
    text.append(surface);
  }

  void categorical(Category c, std::string_view surface, const std::string& canonical) {
    mark(c, surface, AttributeValue::categorical(canonical));
  }

  // "2.8 cm" or "28 mm"; the gold span covers the number and unit.
  void length(Category c, int mm, bool as_mm) {
    std::string s = as_mm ? std::to_string(mm) + " mm" : fmt_cm(mm) + " cm";
    mark(c, s, AttributeValue::length_cm(mm / 10.0));
  }

  // "a x b x c cm" with the greatest dimension first.
  void triplet(Category c, Rng& rng, int mm, bool as_mm) {
    int b = std::max(1, mm - static_cast<int>(rng.range(1, std::max(1, mm / 3))));
    int d = std::max(1, b - static_cast<int>(rng.range(0, std::max(1L, static_cast<long>(b / 3)))));
    auto one = [&](int v) { return as_mm ? std::to_string(v) : fmt_cm(v); };
    std::string s =
        one(mm) + " x " + one(b) + " x " + one(d) + (as_mm ? " mm" : " cm");
    mark(c, s, AttributeValue::length_cm(mm / 10.0));
  }

  void count(Category c, long n) { mark(c, std::to_string(n), AttributeValue::count(n)); }
};

// --- structured rendering (synoptic template) ---

void structured_histology(Builder& b, Rng& rng, const Case& c, double syn) {
  if (c.subtype == "Classic") {
    b.raw("Papillary carcinoma, ");
    b.categorical(Category::HistologicSubtype,
                  rng.surface(syn, {"classic", "classic variant", "conventional"}), c.subtype);
    return;
  }
  b.raw("Papillary carcinoma, ");
  const char* s = nullptr;
  if (c.subtype == "FollicularVariantInfiltrative")
    s = rng.surface(syn, {"follicular variant, infiltrative", "infiltrative follicular variant"});
  else if (c.subtype == "FollicularVariantEncapsulated")
    s = rng.surface(syn, {"follicular variant, encapsulated", "encapsulated follicular variant"});
  else if (c.subtype == "EncapsulatedVariant")
    s = "encapsulated variant";
  else if (c.subtype == "Oncocytic")
    s = rng.surface(syn, {"oncocytic variant", "oncocytic"});
  else if (c.subtype == "WarthinLike")
    s = "warthin-like variant";
  else if (c.subtype == "CribriformMorular")
    s = "cribriform-morular variant";
  else if (c.subtype == "TallCell")
    s = rng.surface(syn, {"tall cell variant", "tall cell"});
  else if (c.subtype == "Hobnail")
    s = "hobnail variant";
  else if (c.subtype == "ColumnarCell")
    s = "columnar cell variant";
  else if (c.subtype == "SolidTrabecular")
    s = rng.surface(syn, {"solid/trabecular variant", "solid variant"});
  else if (c.subtype == "DiffuseSclerosing")
    s = "diffuse sclerosing variant";
  else
    s = "classic";
  b.categorical(Category::HistologicSubtype, s, c.subtype);
}

void render_structured(Builder& b, Rng& rng, const Case& c, const NoiseProfile& noise) {
  const double syn = noise.synonym_rate;
  b.raw("SYNOPTIC REPORT\n");

  bool drop_focality = rng.chance(noise.drop_rate);
  bool drop_site = rng.chance(noise.drop_rate);
  bool drop_lymphatic = rng.chance(noise.drop_rate);
  bool size_mm_unit = rng.chance(noise.mm_rate);

  std::vector<std::function<void()>> head;
  head.push_back([&] {
                    b.raw(" Procedure: ");
                    const char* s = nullptr;
                    if (c.procedure == "TotalThyroidectomy")
                      s = rng.surface(syn, {"Total thyroidectomy", "Near-total thyroidectomy"});
                    else if (c.procedure == "Hemithyroidectomy")
                      s = rng.surface(syn,
                                      {"Hemithyroidectomy", "Right lobectomy", "Left lobectomy"});
                    else
                      s = "Subtotal thyroidectomy";
                    b.categorical(Category::Procedure, s, c.procedure);
                    b.raw(".\n");
                  });
  if (!drop_focality)
    head.push_back([&] {
                      b.raw(" Tumor Focality: ");
                      b.categorical(Category::TumorFocality, c.multifocal ? "Multifocal" : "Unifocal",
                                    c.multifocal ? "Multifocal" : "Unifocal");
                      b.raw(".\n");
                    });
  if (!drop_site && !c.site.empty())
    head.push_back([&] {
                      b.raw(" Tumor Site: ");
                      const char* s = c.site == "RightLobe"
                                          ? rng.surface(syn, {"Right lobe", "Right thyroid lobe"})
                                          : (c.site == "LeftLobe"
                                                 ? rng.surface(syn, {"Left lobe", "Left thyroid lobe"})
                                                 : "Isthmus");
                      b.categorical(Category::TumorSite, s, c.site);
                      b.raw(".\n");
                    });
  head.push_back([&] {
                    b.raw(" Tumor Size: Greatest dimension: ");
                    b.length(Category::TumorSize, c.size_mm, size_mm_unit);
                    b.raw(".\n");
                  });
  head.push_back([&] {
                    b.raw(" Histologic Type: ");
                    structured_histology(b, rng, c, syn);
                    b.raw(".\n");
                  });
  head.push_back([&] {
                    b.raw(" Margins: ");
                    const char* s =
                        c.margins == "Positive"
                            ? rng.surface(syn,
                                          {"Involved by carcinoma", "Carcinoma present at margin"})
                            : rng.surface(syn,
                                          {"Negative", "Uninvolved by carcinoma", "Free of tumor"});
                    b.categorical(Category::Margins, s, c.margins);
                    b.raw(".\n");
                  });
  head.push_back([&] {
                    b.raw(" Angioinvasion (Vascular Invasion): ");
                    const char* s = c.angio == "Positive"
                                        ? "Present"
                                        : rng.surface(syn, {"Not identified", "Negative"});
                    b.categorical(Category::Angioinvasion, s, c.angio);
                    b.raw(".\n");
                  });
  if (!drop_lymphatic)
    head.push_back([&] {
                      b.raw(" Lymphatic Invasion: ");
                      const char* s = c.lymphatic == "Positive"
                                          ? "Present"
                                          : rng.surface(syn, {"Not identified", "Negative"});
                      b.categorical(Category::LymphaticInvasion, s, c.lymphatic);
                      b.raw(".\n");
                    });
  head.push_back([&] {
                    b.raw(" Extrathyroidal Extension: ");
                    const char* s = nullptr;
                    if (c.ete == "Macroscopic")
                      s = rng.surface(syn, {"Macroscopic invasion", "Macroscopic"});
                    else if (c.ete == "MicroscopicModerateSevere")
                      s = "Microscopic moderate/severe";
                    else if (c.ete == "MicroscopicMinimal")
                      s = "Microscopic minimal";
                    else
                      s = rng.surface(syn, {"Not identified", "Absent"});
                    b.categorical(Category::ExtrathyroidalExtension, s, c.ete);
                    b.raw(".\n");
                  });

  // Section order noise: one adjacent swap inside the categorical block.
  if (head.size() > 2 && rng.chance(noise.reorder_rate)) {
    std::size_t i = rng.index(head.size() - 1);
    std::swap(head[i], head[i + 1]);
  }
  for (auto& blk : head) blk();

  b.raw(" Regional Lymph Nodes\n");
  b.raw(" Number of Lymph Nodes Involved: ");
  b.count(Category::NumberOfLymphNodesInvolved, c.involved);
  b.raw(".\n");
  if (c.involved > 0) b.raw(" Level VI, levels IIA, IIB, III and IV.\n");
  b.raw(" Number of Lymph Nodes Examined: ");
  b.count(Category::NumberOfLymphNodesExamined, c.examined);
  b.raw(".\n");
  if (c.examined > 0) b.raw(" Level VI, levels II-IV, paraesophageal.\n");
  if (c.deposit_mm > 0) {
    b.raw(" Size of Largest Metastatic Deposit: ");
    b.length(Category::SizeOfLargestMetastaticDeposit, c.deposit_mm, rng.chance(noise.mm_rate));
    b.raw(".\n");
  }
  b.raw(" Extranodal Extension: ");
  b.categorical(Category::ExtranodalExtension,
                c.ene == "Positive" ? "Present"
                                    : rng.surface(syn, {"Not identified", "Absent"}),
                c.ene);
  b.raw(".\n");

  b.raw(" Pathologic Staging (");
  {
    std::string s = std::string("AJCC, ") + std::to_string(c.edition) + "th edition";
    b.mark(Category::PathologicStaging, s, AttributeValue::staging(c.edition));
  }
  b.raw(")\n");
  b.raw(" TNM Descriptors: Not applicable.\n");
  b.raw(" Primary Tumor: ");
  {
    std::string s = "p" + c.t_code;
    if ((c.t_code == "T1" || c.t_code == "T3" || c.t_code == "T4") && rng.chance(0.5))
      s += rng.chance(0.5) ? "a" : "b";
    b.mark(Category::PrimaryTumorTNM, s, AttributeValue::tnm(c.t_code));
  }
  b.raw(".\n");
  b.raw(" Regional lymph nodes: ");
  {
    std::string s = "p" + c.n_code;
    if (c.n_code == "N1" && rng.chance(0.6)) s += rng.chance(0.5) ? "a" : "b";
    b.mark(Category::LymphNodesTNM, s, AttributeValue::tnm(c.n_code));
  }
  b.raw(".\n");
  b.raw(" Distant Metastasis: ");
  {
    if (c.m_code == "MX")
      b.mark(Category::DistantMetastasis, "Not applicable", AttributeValue::tnm("MX"));
    else if (c.m_code == "M0")
      b.mark(Category::DistantMetastasis,
             rng.surface(syn, {"pM0", "No evidence of distant metastasis"}),
             AttributeValue::tnm("M0"));
    else
      b.mark(Category::DistantMetastasis, "pM1", AttributeValue::tnm("M1"));
  }
  b.raw(".\n");
}

// --- unstructured rendering (narrative template) ---

void render_unstructured(Builder& b, Rng& rng, const Case& c, const NoiseProfile& noise) {
  const double syn = noise.synonym_rate;
  b.raw("DIAGNOSIS:\n\nA. Thyroid, ");

  // Compound phrasing is a deliberate vocabulary gap: the reference span
  // covers the whole phrase while the dictionary knows only its parts.
  bool compound = c.procedure == "Hemithyroidectomy" && rng.chance(0.4);
  if (compound) {
    const char* phrase = rng.chance(0.5) ? "right thyroidectomy and isthmusectomy"
                                         : "left thyroidectomy and isthmusectomy";
    b.categorical(Category::Procedure, phrase, c.procedure);
  } else {
    const char* s = nullptr;
    if (c.procedure == "TotalThyroidectomy")
      s = rng.surface(syn, {"total thyroidectomy", "near-total thyroidectomy"});
    else if (c.procedure == "Hemithyroidectomy")
      s = rng.chance(0.5) ? "right thyroidectomy" : "left thyroidectomy";
    else
      s = "subtotal thyroidectomy";
    b.categorical(Category::Procedure, s, c.procedure);
  }
  b.raw(": Grade 1 (of 4) papillary thyroid carcinoma, ");

  if (c.subtype_underspecified) {
    b.categorical(Category::HistologicSubtype, "follicular subtype", c.subtype);
  } else {
    const char* s = nullptr;
    if (c.subtype == "Classic")
      s = rng.surface(syn, {"classic variant", "classical variant"});
    else if (c.subtype == "FollicularVariantInfiltrative")
      s = "infiltrative follicular variant";
    else if (c.subtype == "FollicularVariantEncapsulated")
      s = "encapsulated follicular variant";
    else if (c.subtype == "EncapsulatedVariant")
      s = "encapsulated variant";
    else if (c.subtype == "Oncocytic")
      s = "oncocytic variant";
    else if (c.subtype == "WarthinLike")
      s = "warthin-like variant";
    else if (c.subtype == "CribriformMorular")
      s = "cribriform-morular variant";
    else if (c.subtype == "TallCell")
      s = rng.surface(syn, {"tall cell variant", "tall cell"});
    else if (c.subtype == "Hobnail")
      s = "hobnail variant";
    else if (c.subtype == "ColumnarCell")
      s = "columnar cell variant";
    else if (c.subtype == "SolidTrabecular")
      s = "solid/trabecular variant";
    else
      s = "diffuse sclerosing variant";
    b.categorical(Category::HistologicSubtype, s, c.subtype);
  }

  bool triplets_mm = rng.chance(noise.mm_rate);
  if (c.multifocal && c.second_mm > 0) {
    b.raw(", forming two nodules (");
    b.triplet(Category::TumorSize, rng, c.size_mm, triplets_mm);
    b.raw(" and ");
    b.triplet(Category::TumorSize, rng, c.second_mm, triplets_mm);
    b.raw(") located in the ");
  } else {
    b.raw(", forming a nodule measuring ");
    b.triplet(Category::TumorSize, rng, c.size_mm, triplets_mm);
    b.raw(" located in the ");
  }
  if (c.site.empty() || rng.chance(noise.drop_rate)) {
    b.raw("mid portion of the lobe");
  } else {
    const char* s = c.site == "RightLobe" ? "right lobe"
                                          : (c.site == "LeftLobe" ? "left lobe" : "isthmus");
    b.categorical(Category::TumorSite, s, c.site);
  }
  b.raw(". ");

  // Sentence bag for the remainder of specimen A; one adjacent swap
  // models dictation order drift.
  std::vector<std::function<void()>> sentences;

  if (c.ete == "Negative") {
    // Designed miss: the negation never uses dictionary vocabulary.
    sentences.push_back([&] {
      b.raw(rng.chance(0.5) ? "Tumor is " : "The tumor is ");
      b.categorical(Category::ExtrathyroidalExtension, "confined to the thyroid", "Negative");
      b.raw(". ");
    });
  } else if (c.ete == "MicroscopicMinimal") {
    sentences.push_back([&] {
      b.raw("Microscopic extrathyroidal extension into ");
      b.categorical(Category::ExtrathyroidalExtension,
                    rng.surface(syn, {"perithyroidal adipose tissue", "strap muscles"}),
                    c.ete);
      b.raw(" is identified. ");
    });
  } else if (c.ete == "MicroscopicModerateSevere") {
    sentences.push_back([&] {
      b.raw("Extrathyroidal extension into the ");
      b.categorical(Category::ExtrathyroidalExtension,
                    rng.surface(syn, {"recurrent laryngeal nerve", "trachea", "esophagus"}),
                    c.ete);
      b.raw(" is identified. ");
    });
  } else {
    sentences.push_back([&] {
      b.raw("There is ");
      b.categorical(Category::ExtrathyroidalExtension,
                    rng.surface(syn,
                                {"gross extrathyroidal extension", "evidence of macroscopic invasion"}),
                    c.ete);
      b.raw(". ");
    });
  }

  sentences.push_back([&] {
    b.raw("All surgical resection margins are ");
    const char* s = c.margins == "Positive"
                        ? "involved by carcinoma"
                        : rng.surface(syn, {"negative for tumor", "free of tumor"});
    b.categorical(Category::Margins, s, c.margins);
    b.raw(". ");
  });

  sentences.push_back([&] {
    b.raw(rng.chance(0.5) ? "Angioinvasion is " : "Vascular invasion is ");
    b.categorical(Category::Angioinvasion,
                  c.angio == "Positive" ? "present"
                                        : rng.surface(syn, {"not identified", "negative"}),
                  c.angio);
    b.raw(". ");
  });

  if (!rng.chance(noise.drop_rate))
    sentences.push_back([&] {
      b.raw("Lymphatic invasion is ");
      b.categorical(Category::LymphaticInvasion,
                    c.lymphatic == "Positive" ? "present"
                                              : rng.surface(syn, {"not identified", "absent"}),
                    c.lymphatic);
      b.raw(". ");
    });

  if (rng.chance(0.5))
    sentences.push_back([&] {
      b.raw("Lymphovascular invasion is ");
      b.categorical(Category::LymphovascularInvasion,
                    c.lvi == "Positive" ? "present"
                                        : rng.surface(syn, {"absent", "not identified"}),
                    c.lvi);
      b.raw(". ");
    });

  if (c.multifocal)
    sentences.push_back([&] {
      b.raw("The tumor is ");
      b.categorical(Category::TumorFocality, "multifocal", "Multifocal");
      b.raw(". ");
    });

  if (sentences.size() > 1 && rng.chance(noise.reorder_rate)) {
    std::size_t i = rng.index(sentences.size() - 1);
    std::swap(sentences[i], sentences[i + 1]);
  }
  for (auto& s : sentences) s();

  if (c.examined > 0) {
    b.raw("\n\nB. Lymph nodes, central neck dissection: ");
    if (c.involved > 0) {
      b.raw(c.involved == 1 ? "A single (" : "Several (");
      b.count(Category::NumberOfLymphNodesInvolved, c.involved);
      b.raw(" of ");
      // The examined count hides inside the tally and stays out of the
      // dictionary's reach: a designed extraction miss.
      b.count(Category::NumberOfLymphNodesExamined, c.examined);
      b.raw(") ");
      b.raw(rng.chance(0.5) ? "perithyroidal" : "cervical");
      b.raw(c.involved == 1 ? " lymph nodes is positive for metastatic papillary thyroid carcinoma. "
                            : " lymph nodes are positive for metastatic papillary thyroid carcinoma. ");
      b.raw("Extranodal extension is ");
      b.categorical(Category::ExtranodalExtension,
                    c.ene == "Positive" ? "present"
                                        : rng.surface(syn, {"not identified", "absent"}),
                    c.ene);
      b.raw(". ");
      if (c.deposit_mm > 0) {
        b.raw("The largest metastatic focus in the lymph node measures ");
        b.length(Category::SizeOfLargestMetastaticDeposit, c.deposit_mm,
                 rng.chance(noise.mm_rate));
        b.raw(". ");
      }
    } else {
      b.raw("Multiple (");
      b.count(Category::NumberOfLymphNodesExamined, c.examined);
      b.raw(") lymph nodes are negative for tumor. ");
    }
  }

  b.raw("\n\nWith available surgical material [AJCC ");
  // Dictionary matching absorbs the 'p' prefix, so the reference span
  // must carry it too.
  b.mark(Category::PrimaryTumorTNM, "p" + c.t_code, AttributeValue::tnm(c.t_code));
  b.mark(Category::LymphNodesTNM, c.n_code, AttributeValue::tnm(c.n_code));
  bool render_m = c.m_code == "M1" || (c.n_code != "NX" && rng.chance(0.5));
  if (render_m) b.mark(Category::DistantMetastasis, c.m_code, AttributeValue::tnm(c.m_code));
  b.raw("] (");
  {
    std::string s = std::to_string(c.edition) + "th edition";
    b.mark(Category::PathologicStaging, s, AttributeValue::staging(c.edition));
  }
  b.raw(", ");
  b.raw(rng.pick({"2010", "2016", "2017", "2021"}));
  b.raw(").\n");
}

}  // namespace

RiskCategory generator_risk_oracle(const FeatureRecord& r,
                                   const std::set<std::string>& aggressive_histologies) {
  auto text_of = [&](Category c) -> std::string {
    const auto& s = r.slot(c);
    if (!s) return "";
    if (s->kind() == ValueKind::Categorical) return s->canonical();
    if (s->kind() == ValueKind::Tnm) return s->code();
    return "";
  };
  double deposit = r.deposit_cm().value_or(0.0);
  long involved = r.nodes_involved().value_or(0);
  auto size = r.tumor_size_cm();
  std::string ete = text_of(Category::ExtrathyroidalExtension);

  if (text_of(Category::ExtranodalExtension) == "Positive" || deposit > 3.0 ||
      text_of(Category::DistantMetastasis) == "M1" || ete == "Macroscopic")
    return RiskCategory::High;

  std::string subtype = text_of(Category::HistologicSubtype);
  if (involved > 5 || (size && *size > 4.0) || text_of(Category::Angioinvasion) == "Positive" ||
      (deposit >= 1.0 && deposit <= 3.0) ||
      (!subtype.empty() && aggressive_histologies.count(subtype) > 0) ||
      ete == "MicroscopicModerateSevere")
    return RiskCategory::Intermediate;

  if ((size && *size >= 1.0 && *size <= 4.0) || (involved >= 1 && involved <= 5) ||
      ete == "MicroscopicMinimal" || (deposit > 0.0 && deposit < 1.0))
    return RiskCategory::Low;

  return RiskCategory::VeryLow;
}

std::vector<SyntheticDoc> generate_synthetic(const GeneratorConfig& config,
                                             const ExtractionLexicon& lex) {
  if (config.structured_fraction < 0.0 || config.structured_fraction > 1.0)
    throw std::invalid_argument("structured_fraction must be within [0, 1]");
  Rng rng(config.seed);
  std::size_t n_structured = static_cast<std::size_t>(
      config.structured_fraction * static_cast<double>(config.n) + 0.5);

  std::vector<SyntheticDoc> out;
  out.reserve(config.n);
  for (std::size_t i = 0; i < config.n; ++i) {
    bool structured = i < n_structured;
    Case c = sample_case(rng);
    if (!structured) {
      bool non_aggressive = lex.aggressive_histologies().count(c.subtype) == 0;
      if (non_aggressive && rng.chance(0.25)) {
        c.subtype = "FollicularVariantInfiltrative";
        c.subtype_underspecified = true;
      }
    }

    Builder b;
    if (structured)
      render_structured(b, rng, c, config.noise);
    else
      render_unstructured(b, rng, c, config.noise);

    SyntheticDoc sd;
    char idbuf[24];
    std::snprintf(idbuf, sizeof idbuf, "synth-%05zu", i + 1);
    sd.doc.id = idbuf;
    sd.doc.text = std::move(b.text);
    sd.doc.format_hint = structured ? FormatHint::Structured : FormatHint::Unstructured;
    sd.gold.doc_id = sd.doc.id;
    sd.gold.mentions = std::move(b.gold);
    sd.record = to_feature_record(sd.doc, sd.gold.mentions);
    sd.gold.risk = generator_risk_oracle(sd.record, lex.aggressive_histologies());
    out.push_back(std::move(sd));
  }
  return out;
}

}  // namespace thyropath
