#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace thyropath {

// The 18 report categories, in report column order (Lymphovascular
// Invasion sits after Lymphatic Invasion and only occurs in
// unstructured reports).
enum class Category {
  Procedure,
  TumorFocality,
  TumorSite,
  TumorSize,
  HistologicSubtype,
  Margins,
  Angioinvasion,
  LymphaticInvasion,
  LymphovascularInvasion,
  ExtrathyroidalExtension,
  NumberOfLymphNodesInvolved,
  NumberOfLymphNodesExamined,
  SizeOfLargestMetastaticDeposit,
  ExtranodalExtension,
  PathologicStaging,
  PrimaryTumorTNM,
  LymphNodesTNM,
  DistantMetastasis,
};

inline constexpr std::size_t kCategoryCount = 18;

const std::array<Category, kCategoryCount>& all_categories();

// Stable identifier used in data files, e.g. "NumberOfLymphNodesInvolved".
const char* to_string(Category c);
std::optional<Category> category_from_string(std::string_view name);

// Human-readable column header, e.g. "Number of Lymph Nodes Involved".
const char* display_name(Category c);

// Lymphovascular invasion is reported only in unstructured reports.
bool unstructured_only(Category c);

enum class ValueKind { Categorical, Length, Count, Tnm, Staging };

ValueKind value_kind_of(Category c);

// Normalized attribute value. Lengths are always centimeters.
class AttributeValue {
 public:
  static AttributeValue categorical(std::string canonical);
  static AttributeValue length_cm(double cm);
  static AttributeValue count(long n);
  static AttributeValue tnm(std::string code);
  static AttributeValue staging(int edition);

  ValueKind kind() const;
  const std::string& canonical() const;
  double cm() const;
  long n() const;
  const std::string& code() const;
  int edition() const;

  // Rendering used by the features CSV and trigger strings.
  std::string to_text() const;

  bool operator==(const AttributeValue& other) const = default;

 private:
  struct Categorical {
    std::string canonical;
    bool operator==(const Categorical&) const = default;
  };
  struct Length {
    double cm;
    bool operator==(const Length&) const = default;
  };
  struct Count {
    long n;
    bool operator==(const Count&) const = default;
  };
  struct Tnm {
    std::string code;
    bool operator==(const Tnm&) const = default;
  };
  struct Staging {
    int edition;
    bool operator==(const Staging&) const = default;
  };

  std::variant<Categorical, Length, Count, Tnm, Staging> v_;
};

// Value comparison used by strict mention matching: exact for discrete
// kinds, small tolerance for lengths.
bool values_equal(const AttributeValue& a, const AttributeValue& b);

enum class FormatHint { Structured, Unstructured, Auto };

const char* to_string(FormatHint f);
std::optional<FormatHint> format_from_string(std::string_view name);

struct ReportDocument {
  std::string id;
  std::string text;
  FormatHint format_hint = FormatHint::Auto;
};

struct ValidationError : std::runtime_error {
  enum class Code { EmptyText, EmptyId };
  ValidationError(Code c, std::string msg) : std::runtime_error(std::move(msg)), code(c) {}
  Code code;
};

// Returns the document unchanged iff its invariants hold.
const ReportDocument& validate_document(const ReportDocument& doc);

// One extracted entity. Span is a half-open character interval into the
// source document's text; surface equals the slice at that span.
struct Mention {
  Category category;
  std::string surface;
  std::size_t begin = 0;
  std::size_t end = 0;
  AttributeValue value;

  bool operator==(const Mention&) const = default;
};

struct MentionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void validate_mention(const Mention& m, const ReportDocument& doc);

// Per-report feature row: one optional slot per category plus the
// mentions the slots were resolved from.
class FeatureRecord {
 public:
  const std::optional<AttributeValue>& slot(Category c) const;
  void set_slot(Category c, AttributeValue v);
  void clear_slot(Category c);
  bool has(Category c) const;

  std::vector<Mention>& provenance() { return provenance_; }
  const std::vector<Mention>& provenance() const { return provenance_; }

  std::optional<double> tumor_size_cm() const;
  std::optional<double> deposit_cm() const;
  std::optional<long> nodes_involved() const;
  std::optional<long> nodes_examined() const;

  bool operator==(const FeatureRecord& other) const { return slots_ == other.slots_; }

 private:
  std::array<std::optional<AttributeValue>, kCategoryCount> slots_;
  std::vector<Mention> provenance_;
};

// Recurrence-risk tiers, totally ordered.
enum class RiskCategory { VeryLow = 0, Low = 1, Intermediate = 2, High = 3 };

inline bool operator<(RiskCategory a, RiskCategory b) {
  return static_cast<int>(a) < static_cast<int>(b);
}

const char* to_string(RiskCategory r);        // wire form, e.g. "very_low"
const char* display_name(RiskCategory r);     // e.g. "Very low risk"
std::optional<RiskCategory> risk_from_string(std::string_view name);

struct Trigger {
  std::string rule_id;
  Category category;
  std::string value_text;

  bool operator==(const Trigger&) const = default;
};

// Assigned risk plus the rules that drove it, in ledger order. VeryLow
// is the fall-through tier; it carries a single pseudo-trigger naming
// the sub-centimeter tumor size that allowed it.
struct RiskAssignment {
  RiskCategory risk = RiskCategory::VeryLow;
  std::vector<Trigger> triggers;
};

struct GoldAnnotation {
  std::string doc_id;
  std::vector<Mention> mentions;
  std::optional<RiskCategory> risk;
};

// Half-up rounding to two decimals, as used for table rendering.
double round_half_up_2(double x);

}  // namespace thyropath
