#include "thyropath/classifier.hpp"

#include <algorithm>

#include "json.hpp"

namespace thyropath {

std::string to_string(Policy p) { return p == Policy::Strict ? "strict" : "permissive"; }

Policy policy_from_string(const std::string& s) {
  if (s == "strict") return Policy::Strict;
  if (s == "permissive") return Policy::Permissive;
  throw ClassifierError(ClassifierError::Code::BadRule, "unknown policy '" + s + "'");
}

std::string to_string(RuleOp op) {
  switch (op) {
    case RuleOp::Equals: return "equals";
    case RuleOp::GreaterThan: return "greater_than";
    case RuleOp::InRange: return "in_range";
    case RuleOp::OpenRange: return "open_range";
    case RuleOp::AggressiveHistology: return "aggressive_histology";
  }
  return "equals";
}

RuleOp rule_op_from_string(const std::string& s) {
  if (s == "equals") return RuleOp::Equals;
  if (s == "greater_than") return RuleOp::GreaterThan;
  if (s == "in_range") return RuleOp::InRange;
  if (s == "open_range") return RuleOp::OpenRange;
  if (s == "aggressive_histology") return RuleOp::AggressiveHistology;
  throw ClassifierError(ClassifierError::Code::BadRule, "unknown rule op '" + s + "'");
}

namespace {

bool numeric_kind(ValueKind k) { return k == ValueKind::Length || k == ValueKind::Count; }

void validate_rule(const RiskRule& r) {
  auto bad = [&](const std::string& why) {
    throw ClassifierError(ClassifierError::Code::BadRule, "rule '" + r.id + "': " + why);
  };
  if (r.id.empty()) bad("empty id");
  if (r.tier == RiskCategory::VeryLow)
    bad("very low risk is the fall-through tier and cannot own rules");
  ValueKind kind = value_kind_of(r.category);
  switch (r.op) {
    case RuleOp::Equals:
      if (kind != ValueKind::Categorical && kind != ValueKind::Tnm)
        bad("equals requires a categorical slot");
      if (r.canonical.empty()) bad("equals requires a canonical value");
      break;
    case RuleOp::AggressiveHistology:
      if (r.category != Category::HistologicSubtype)
        bad("aggressive_histology applies only to the histologic subtype");
      break;
    case RuleOp::GreaterThan:
      if (!numeric_kind(kind)) bad("greater_than requires a numeric slot");
      break;
    case RuleOp::InRange:
    case RuleOp::OpenRange:
      if (!numeric_kind(kind)) bad("range rules require a numeric slot");
      if (!(r.min <= r.max)) bad("range bounds are inverted");
      break;
  }
}

}  // namespace

RuleTable::RuleTable(std::vector<RiskRule> rules, std::set<std::string> aggressive_histologies)
    : rules_(std::move(rules)), aggressive_(std::move(aggressive_histologies)) {
  std::set<std::string> seen;
  for (const auto& r : rules_) {
    validate_rule(r);
    if (!seen.insert(r.id).second)
      throw ClassifierError(ClassifierError::Code::BadRule, "duplicate rule id '" + r.id + "'");
  }
}

const RiskRule* RuleTable::find(const std::string& id) const {
  for (const auto& r : rules_)
    if (r.id == id) return &r;
  return nullptr;
}

RuleTable default_rule_table(std::set<std::string> aggressive_histologies) {
  std::vector<RiskRule> rules;
  auto eq = [](const char* id, RiskCategory tier, Category c, const char* canonical,
               const char* label) {
    RiskRule r;
    r.id = id;
    r.tier = tier;
    r.category = c;
    r.op = RuleOp::Equals;
    r.canonical = canonical;
    r.label = label;
    return r;
  };
  auto gt = [](const char* id, RiskCategory tier, Category c, double threshold,
               const char* label) {
    RiskRule r;
    r.id = id;
    r.tier = tier;
    r.category = c;
    r.op = RuleOp::GreaterThan;
    r.min = threshold;
    r.label = label;
    return r;
  };
  auto range = [](const char* id, RiskCategory tier, Category c, RuleOp op, double lo, double hi,
                  const char* label) {
    RiskRule r;
    r.id = id;
    r.tier = tier;
    r.category = c;
    r.op = op;
    r.min = lo;
    r.max = hi;
    r.label = label;
    return r;
  };

  rules.push_back(eq("H1", RiskCategory::High, Category::ExtranodalExtension, "Positive",
                     "extranodal extension present"));
  rules.push_back(gt("H2", RiskCategory::High, Category::SizeOfLargestMetastaticDeposit, 3.0,
                     "metastatic deposit > 3 cm"));
  rules.push_back(
      eq("H3", RiskCategory::High, Category::DistantMetastasis, "M1", "distant metastasis"));
  rules.push_back(eq("H4", RiskCategory::High, Category::ExtrathyroidalExtension, "Macroscopic",
                     "macroscopic extrathyroidal extension"));

  rules.push_back(gt("I1", RiskCategory::Intermediate, Category::NumberOfLymphNodesInvolved, 5,
                     "more than 5 involved lymph nodes"));
  rules.push_back(
      gt("I2", RiskCategory::Intermediate, Category::TumorSize, 4.0, "tumor size > 4 cm"));
  rules.push_back(eq("I3", RiskCategory::Intermediate, Category::Angioinvasion, "Positive",
                     "angioinvasion present"));
  rules.push_back(range("I4", RiskCategory::Intermediate,
                        Category::SizeOfLargestMetastaticDeposit, RuleOp::InRange, 1.0, 3.0,
                        "metastatic deposit 1-3 cm"));
  RiskRule i5;
  i5.id = "I5";
  i5.tier = RiskCategory::Intermediate;
  i5.category = Category::HistologicSubtype;
  i5.op = RuleOp::AggressiveHistology;
  i5.label = "aggressive histologic subtype";
  rules.push_back(i5);
  rules.push_back(eq("I6", RiskCategory::Intermediate, Category::ExtrathyroidalExtension,
                     "MicroscopicModerateSevere",
                     "moderate/severe microscopic extrathyroidal extension"));

  rules.push_back(range("L1", RiskCategory::Low, Category::TumorSize, RuleOp::InRange, 1.0, 4.0,
                        "tumor size 1-4 cm"));
  rules.push_back(range("L2", RiskCategory::Low, Category::NumberOfLymphNodesInvolved,
                        RuleOp::InRange, 1, 5, "1-5 involved lymph nodes"));
  rules.push_back(eq("L3", RiskCategory::Low, Category::ExtrathyroidalExtension,
                     "MicroscopicMinimal", "minimal microscopic extrathyroidal extension"));
  rules.push_back(range("L4", RiskCategory::Low, Category::SizeOfLargestMetastaticDeposit,
                        RuleOp::OpenRange, 0.0, 1.0, "metastatic deposit < 1 cm"));

  return RuleTable(std::move(rules), std::move(aggressive_histologies));
}

bool rule_fires(const RiskRule& rule, const FeatureRecord& record,
                const std::set<std::string>& aggressive_histologies) {
  const auto& slot = record.slot(rule.category);
  if (!slot) return false;
  switch (rule.op) {
    case RuleOp::Equals:
      if (slot->kind() == ValueKind::Categorical) return slot->canonical() == rule.canonical;
      if (slot->kind() == ValueKind::Tnm) return slot->code() == rule.canonical;
      return false;
    case RuleOp::AggressiveHistology:
      return slot->kind() == ValueKind::Categorical &&
             aggressive_histologies.count(slot->canonical()) > 0;
    default: {
      double v;
      if (slot->kind() == ValueKind::Length)
        v = slot->cm();
      else if (slot->kind() == ValueKind::Count)
        v = static_cast<double>(slot->n());
      else
        return false;
      switch (rule.op) {
        case RuleOp::GreaterThan: return v > rule.min;
        case RuleOp::InRange: return v >= rule.min && v <= rule.max;
        case RuleOp::OpenRange: return v > rule.min && v < rule.max;
        default: return false;
      }
    }
  }
}

namespace {

// Slots a strict classification refuses to guess about.
constexpr Category kStrictPrerequisites[] = {
    Category::TumorSize,          Category::HistologicSubtype,
    Category::Angioinvasion,      Category::ExtrathyroidalExtension,
    Category::ExtranodalExtension, Category::DistantMetastasis,
};

}  // namespace

RiskAssignment classify(const FeatureRecord& record, const RuleTable& table, Policy policy) {
  if (policy == Policy::Strict) {
    std::vector<Category> missing;
    for (Category c : kStrictPrerequisites)
      if (!record.has(c)) missing.push_back(c);
    if (!missing.empty()) {
      std::string msg = "insufficient data:";
      for (Category c : missing) msg += std::string(" ") + to_string(c);
      throw ClassifierError(ClassifierError::Code::InsufficientData, msg, std::move(missing));
    }
  }

  for (RiskCategory tier :
       {RiskCategory::High, RiskCategory::Intermediate, RiskCategory::Low}) {
    RiskAssignment a;
    a.risk = tier;
    for (const auto& rule : table.rules()) {
      if (rule.tier != tier) continue;
      if (!rule_fires(rule, record, table.aggressive_histologies())) continue;
      a.triggers.push_back(
          Trigger{rule.id, rule.category, record.slot(rule.category)->to_text()});
    }
    if (!a.triggers.empty()) return a;
  }

  auto size = record.tumor_size_cm();
  if (size && *size >= 1.0)
    throw ClassifierError(ClassifierError::Code::Internal,
                          "rule ledger is not exhaustive: tumor size " + std::to_string(*size) +
                              " cm fired no rule");
  RiskAssignment a;
  a.risk = RiskCategory::VeryLow;
  a.triggers.push_back(Trigger{kVeryLowTriggerId, Category::TumorSize,
                               size ? record.slot(Category::TumorSize)->to_text()
                                    : std::string("absent")});
  return a;
}

std::map<std::string, std::size_t> trigger_distribution(
    const std::vector<RiskAssignment>& assignments) {
  std::map<std::string, std::size_t> out;
  for (const auto& a : assignments)
    if (!a.triggers.empty()) ++out[a.triggers.front().rule_id];
  return out;
}

namespace {

using nlohmann::json;

void require_keys(const json& obj, std::initializer_list<const char*> allowed,
                  const char* where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) ok = true;
    if (!ok)
      throw ClassifierError(ClassifierError::Code::BadRule,
                            std::string("unknown key '") + it.key() + "' in " + where);
  }
}

}  // namespace

RuleTable rules_from_json(const std::string& raw_json,
                          std::set<std::string> aggressive_histologies) {
  if (raw_json.empty()) return default_rule_table(std::move(aggressive_histologies));
  json doc;
  try {
    doc = json::parse(raw_json);
  } catch (const json::exception& e) {
    throw ClassifierError(ClassifierError::Code::BadRule,
                          std::string("rules are not valid JSON: ") + e.what());
  }
  auto bad = [](const std::string& why) {
    throw ClassifierError(ClassifierError::Code::BadRule, "rules: " + why);
  };
  if (!doc.is_object() || !doc.contains("rules")) bad("expected an object with a \"rules\" array");
  require_keys(doc, {"rules"}, "rules object");
  if (!doc["rules"].is_array()) bad("\"rules\" must be an array");

  std::vector<RiskRule> rules;
  for (const auto& jr : doc["rules"]) {
    if (!jr.is_object()) bad("each rule must be an object");
    RiskRule r;
    if (!jr.contains("id") || !jr["id"].is_string()) bad("rule is missing a string \"id\"");
    r.id = jr["id"].get<std::string>();
    if (!jr.contains("tier") || !jr["tier"].is_string())
      bad("rule '" + r.id + "' is missing a string \"tier\"");
    auto tier = risk_from_string(jr["tier"].get<std::string>());
    if (!tier) bad("rule '" + r.id + "' has unknown tier");
    r.tier = *tier;
    if (!jr.contains("category") || !jr["category"].is_string())
      bad("rule '" + r.id + "' is missing a string \"category\"");
    auto cat = category_from_string(jr["category"].get<std::string>());
    if (!cat) bad("rule '" + r.id + "' has unknown category");
    r.category = *cat;
    if (!jr.contains("op") || !jr["op"].is_string())
      bad("rule '" + r.id + "' is missing a string \"op\"");
    r.op = rule_op_from_string(jr["op"].get<std::string>());
    if (jr.contains("label")) {
      if (!jr["label"].is_string()) bad("rule '" + r.id + "' label must be a string");
      r.label = jr["label"].get<std::string>();
    }
    switch (r.op) {
      case RuleOp::Equals:
        require_keys(jr, {"id", "tier", "category", "op", "canonical", "label"},
                     ("rule '" + r.id + "'").c_str());
        if (!jr.contains("canonical") || !jr["canonical"].is_string())
          bad("rule '" + r.id + "' needs a string \"canonical\"");
        r.canonical = jr["canonical"].get<std::string>();
        break;
      case RuleOp::GreaterThan:
        require_keys(jr, {"id", "tier", "category", "op", "threshold", "label"},
                     ("rule '" + r.id + "'").c_str());
        if (!jr.contains("threshold") || !jr["threshold"].is_number())
          bad("rule '" + r.id + "' needs a numeric \"threshold\"");
        r.min = jr["threshold"].get<double>();
        break;
      case RuleOp::InRange:
      case RuleOp::OpenRange:
        require_keys(jr, {"id", "tier", "category", "op", "min", "max", "label"},
                     ("rule '" + r.id + "'").c_str());
        if (!jr.contains("min") || !jr["min"].is_number() || !jr.contains("max") ||
            !jr["max"].is_number())
          bad("rule '" + r.id + "' needs numeric \"min\" and \"max\"");
        r.min = jr["min"].get<double>();
        r.max = jr["max"].get<double>();
        break;
      case RuleOp::AggressiveHistology:
        require_keys(jr, {"id", "tier", "category", "op", "label"},
                     ("rule '" + r.id + "'").c_str());
        break;
    }
    rules.push_back(std::move(r));
  }
  return RuleTable(std::move(rules), std::move(aggressive_histologies));
}

std::string rules_to_json(const RuleTable& table) {
  json out;
  out["rules"] = json::array();
  for (const auto& r : table.rules()) {
    json jr;
    jr["id"] = r.id;
    jr["tier"] = to_string(r.tier);
    jr["category"] = to_string(r.category);
    jr["op"] = to_string(r.op);
    jr["label"] = r.label;
    switch (r.op) {
      case RuleOp::Equals: jr["canonical"] = r.canonical; break;
      case RuleOp::GreaterThan: jr["threshold"] = r.min; break;
      case RuleOp::InRange:
      case RuleOp::OpenRange:
        jr["min"] = r.min;
        jr["max"] = r.max;
        break;
      case RuleOp::AggressiveHistology: break;
    }
    out["rules"].push_back(std::move(jr));
  }
  return out.dump(2) + "\n";
}

}  // namespace thyropath
