#include "thyropath/model.hpp"

#include <cmath>
#include <cstdio>

namespace thyropath {

namespace {

struct CategoryInfo {
  Category category;
  const char* name;
  const char* display;
  ValueKind kind;
};

constexpr CategoryInfo kCategoryInfo[kCategoryCount] = {
    {Category::Procedure, "Procedure", "Procedure", ValueKind::Categorical},
    {Category::TumorFocality, "TumorFocality", "Tumor Focality", ValueKind::Categorical},
    {Category::TumorSite, "TumorSite", "Tumor Site", ValueKind::Categorical},
    {Category::TumorSize, "TumorSize", "Tumor Size", ValueKind::Length},
    {Category::HistologicSubtype, "HistologicSubtype", "Histologic Subtype", ValueKind::Categorical},
    {Category::Margins, "Margins", "Margins", ValueKind::Categorical},
    {Category::Angioinvasion, "Angioinvasion", "Angioinvasion", ValueKind::Categorical},
    {Category::LymphaticInvasion, "LymphaticInvasion", "Lymphatic Invasion", ValueKind::Categorical},
    {Category::LymphovascularInvasion, "LymphovascularInvasion", "Lymphovascular Invasion",
     ValueKind::Categorical},
    {Category::ExtrathyroidalExtension, "ExtrathyroidalExtension", "Extrathyroidal Extension",
     ValueKind::Categorical},
    {Category::NumberOfLymphNodesInvolved, "NumberOfLymphNodesInvolved",
     "Number of Lymph Nodes Involved", ValueKind::Count},
    {Category::NumberOfLymphNodesExamined, "NumberOfLymphNodesExamined",
     "Number of Lymph Nodes Examined", ValueKind::Count},
    {Category::SizeOfLargestMetastaticDeposit, "SizeOfLargestMetastaticDeposit",
     "Size of Largest Metastatic Deposit", ValueKind::Length},
    {Category::ExtranodalExtension, "ExtranodalExtension", "Extranodal Extension",
     ValueKind::Categorical},
    {Category::PathologicStaging, "PathologicStaging", "Pathologic Staging", ValueKind::Staging},
    {Category::PrimaryTumorTNM, "PrimaryTumorTNM", "Primary Tumor TNM", ValueKind::Tnm},
    {Category::LymphNodesTNM, "LymphNodesTNM", "Lymph Nodes TNM", ValueKind::Tnm},
    {Category::DistantMetastasis, "DistantMetastasis", "Distant Metastasis", ValueKind::Tnm},
};

}  // namespace

const std::array<Category, kCategoryCount>& all_categories() {
  static const std::array<Category, kCategoryCount> cats = [] {
    std::array<Category, kCategoryCount> out{};
    for (std::size_t i = 0; i < kCategoryCount; ++i) out[i] = kCategoryInfo[i].category;
    return out;
  }();
  return cats;
}

const char* to_string(Category c) { return kCategoryInfo[static_cast<std::size_t>(c)].name; }

std::optional<Category> category_from_string(std::string_view name) {
  for (const auto& info : kCategoryInfo)
    if (name == info.name) return info.category;
  return std::nullopt;
}

const char* display_name(Category c) { return kCategoryInfo[static_cast<std::size_t>(c)].display; }

bool unstructured_only(Category c) { return c == Category::LymphovascularInvasion; }

ValueKind value_kind_of(Category c) { return kCategoryInfo[static_cast<std::size_t>(c)].kind; }

AttributeValue AttributeValue::categorical(std::string canonical) {
  if (canonical.empty()) throw std::invalid_argument("categorical value must not be empty");
  AttributeValue v;
  v.v_ = Categorical{std::move(canonical)};
  return v;
}

AttributeValue AttributeValue::length_cm(double cm) {
  if (!(cm >= 0.0) || !(cm < 100.0))
    throw std::invalid_argument("length must be in [0, 100) cm");
  AttributeValue v;
  v.v_ = Length{cm};
  return v;
}

AttributeValue AttributeValue::count(long n) {
  if (n < 0) throw std::invalid_argument("count must be non-negative");
  AttributeValue v;
  v.v_ = Count{n};
  return v;
}

AttributeValue AttributeValue::tnm(std::string code) {
  if (code.empty()) throw std::invalid_argument("tnm code must not be empty");
  AttributeValue v;
  v.v_ = Tnm{std::move(code)};
  return v;
}

AttributeValue AttributeValue::staging(int edition) {
  if (edition != 7 && edition != 8) throw std::invalid_argument("staging edition must be 7 or 8");
  AttributeValue v;
  v.v_ = Staging{edition};
  return v;
}

ValueKind AttributeValue::kind() const {
  switch (v_.index()) {
    case 0: return ValueKind::Categorical;
    case 1: return ValueKind::Length;
    case 2: return ValueKind::Count;
    case 3: return ValueKind::Tnm;
    default: return ValueKind::Staging;
  }
}

const std::string& AttributeValue::canonical() const { return std::get<Categorical>(v_).canonical; }
double AttributeValue::cm() const { return std::get<Length>(v_).cm; }
long AttributeValue::n() const { return std::get<Count>(v_).n; }
const std::string& AttributeValue::code() const { return std::get<Tnm>(v_).code; }
int AttributeValue::edition() const { return std::get<Staging>(v_).edition; }

std::string AttributeValue::to_text() const {
  switch (kind()) {
    case ValueKind::Categorical: return canonical();
    case ValueKind::Length: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%g", cm());
      return buf;
    }
    case ValueKind::Count: return std::to_string(n());
    case ValueKind::Tnm: return code();
    case ValueKind::Staging: return std::to_string(edition()) + "th edition";
  }
  return {};
}

bool values_equal(const AttributeValue& a, const AttributeValue& b) {
  if (a.kind() != b.kind()) return false;
  if (a.kind() == ValueKind::Length) return std::fabs(a.cm() - b.cm()) < 1e-9;
  return a == b;
}

const char* to_string(FormatHint f) {
  switch (f) {
    case FormatHint::Structured: return "structured";
    case FormatHint::Unstructured: return "unstructured";
    case FormatHint::Auto: return "auto";
  }
  return "auto";
}

std::optional<FormatHint> format_from_string(std::string_view name) {
  if (name == "structured") return FormatHint::Structured;
  if (name == "unstructured") return FormatHint::Unstructured;
  if (name == "auto") return FormatHint::Auto;
  return std::nullopt;
}

const ReportDocument& validate_document(const ReportDocument& doc) {
  if (doc.id.empty())
    throw ValidationError(ValidationError::Code::EmptyId, "document id must not be empty");
  if (doc.text.empty())
    throw ValidationError(ValidationError::Code::EmptyText,
                          "document '" + doc.id + "' has empty text");
  return doc;
}

void validate_mention(const Mention& m, const ReportDocument& doc) {
  if (m.begin >= m.end || m.end > doc.text.size())
    throw MentionError("mention span out of range in document '" + doc.id + "'");
  if (doc.text.compare(m.begin, m.end - m.begin, m.surface) != 0)
    throw MentionError("mention surface does not equal its span slice in document '" + doc.id +
                       "'");
}

const std::optional<AttributeValue>& FeatureRecord::slot(Category c) const {
  return slots_[static_cast<std::size_t>(c)];
}

void FeatureRecord::set_slot(Category c, AttributeValue v) {
  slots_[static_cast<std::size_t>(c)] = std::move(v);
}

void FeatureRecord::clear_slot(Category c) { slots_[static_cast<std::size_t>(c)].reset(); }

bool FeatureRecord::has(Category c) const { return slots_[static_cast<std::size_t>(c)].has_value(); }

std::optional<double> FeatureRecord::tumor_size_cm() const {
  const auto& s = slot(Category::TumorSize);
  if (!s) return std::nullopt;
  return s->cm();
}

std::optional<double> FeatureRecord::deposit_cm() const {
  const auto& s = slot(Category::SizeOfLargestMetastaticDeposit);
  if (!s) return std::nullopt;
  return s->cm();
}

std::optional<long> FeatureRecord::nodes_involved() const {
  const auto& s = slot(Category::NumberOfLymphNodesInvolved);
  if (!s) return std::nullopt;
  return s->n();
}

std::optional<long> FeatureRecord::nodes_examined() const {
  const auto& s = slot(Category::NumberOfLymphNodesExamined);
  if (!s) return std::nullopt;
  return s->n();
}

const char* to_string(RiskCategory r) {
  switch (r) {
    case RiskCategory::VeryLow: return "very_low";
    case RiskCategory::Low: return "low";
    case RiskCategory::Intermediate: return "intermediate";
    case RiskCategory::High: return "high";
  }
  return "very_low";
}

const char* display_name(RiskCategory r) {
  switch (r) {
    case RiskCategory::VeryLow: return "Very low risk";
    case RiskCategory::Low: return "Low risk";
    case RiskCategory::Intermediate: return "Intermediate risk";
    case RiskCategory::High: return "High risk";
  }
  return "Very low risk";
}

std::optional<RiskCategory> risk_from_string(std::string_view name) {
  if (name == "very_low") return RiskCategory::VeryLow;
  if (name == "low") return RiskCategory::Low;
  if (name == "intermediate") return RiskCategory::Intermediate;
  if (name == "high") return RiskCategory::High;
  return std::nullopt;
}

double round_half_up_2(double x) {
  if (x < 0) return -round_half_up_2(-x);
  return std::floor(x * 100.0 + 0.5) / 100.0;
}

}  // namespace thyropath
