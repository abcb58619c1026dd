#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "thyropath/model.hpp"

namespace thyropath {

// How missing prerequisite features are handled during classification.
enum class Policy { Strict, Permissive };

std::string to_string(Policy p);
Policy policy_from_string(const std::string& s);

enum class RuleOp {
  Equals,              // categorical slot equals a canonical value
  GreaterThan,         // numeric slot strictly above a threshold
  InRange,             // numeric slot within [min, max]
  OpenRange,           // numeric slot within (min, max)
  AggressiveHistology  // histologic subtype is in the aggressive set
};

std::string to_string(RuleOp op);
RuleOp rule_op_from_string(const std::string& s);

struct RiskRule {
  std::string id;          // stable identifier, e.g. "H1"
  RiskCategory tier = RiskCategory::High;  // High, Intermediate or Low
  Category category = Category::TumorSize;
  RuleOp op = RuleOp::Equals;
  std::string canonical;   // Equals only
  double min = 0.0;        // InRange / OpenRange
  double max = 0.0;        // InRange / OpenRange; GreaterThan uses min
  std::string label;       // human-readable condition

  bool operator==(const RiskRule&) const = default;
};

class ClassifierError : public std::runtime_error {
 public:
  enum class Code { InsufficientData, BadRule, Internal };

  ClassifierError(Code code, std::string message, std::vector<Category> missing = {})
      : std::runtime_error(std::move(message)), code_(code), missing_(std::move(missing)) {}

  Code code() const { return code_; }
  const std::vector<Category>& missing() const { return missing_; }

 private:
  Code code_;
  std::vector<Category> missing_;
};

// Ordered rule ledger plus the aggressive-subtype set it consults.
// Rules are evaluated tier by tier (High, Intermediate, Low); the first
// tier with at least one firing rule decides the risk, and every firing
// rule of that tier becomes a trigger, in ledger order.  When no rule
// fires the report is very low risk, which requires a tumor below 1 cm.
class RuleTable {
 public:
  RuleTable(std::vector<RiskRule> rules, std::set<std::string> aggressive_histologies);

  const std::vector<RiskRule>& rules() const { return rules_; }
  const std::set<std::string>& aggressive_histologies() const { return aggressive_; }
  const RiskRule* find(const std::string& id) const;

  bool operator==(const RuleTable&) const = default;

 private:
  std::vector<RiskRule> rules_;
  std::set<std::string> aggressive_;
};

// The built-in ledger: H1-H4, I1-I6, L1-L4.
RuleTable default_rule_table(std::set<std::string> aggressive_histologies);

// True when the rule's condition holds for the record.  Missing slots
// never satisfy a rule.
bool rule_fires(const RiskRule& rule, const FeatureRecord& record,
                const std::set<std::string>& aggressive_histologies);

// Identifier used for the very-low fall-through pseudo-trigger.
inline constexpr const char* kVeryLowTriggerId = "VL1";

RiskAssignment classify(const FeatureRecord& record, const RuleTable& table, Policy policy);

// Count of first-trigger rule ids across a set of assignments.
std::map<std::string, std::size_t> trigger_distribution(const std::vector<RiskAssignment>& assignments);

// Serialization of the "rules" config section.  `raw_json` is the JSON
// text of an object {"rules": [...]}; an empty string yields the
// built-in ledger.  The aggressive set always comes from the lexicon.
RuleTable rules_from_json(const std::string& raw_json, std::set<std::string> aggressive_histologies);
std::string rules_to_json(const RuleTable& table);

}  // namespace thyropath
