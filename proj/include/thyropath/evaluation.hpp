#pragma once

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "thyropath/model.hpp"

namespace thyropath {

// Strict credits a prediction only when the span is identical and the
// value is equal; lenient needs only an overlapping span of the same
// category.
enum class MatchMode { Strict, Lenient };

std::string to_string(MatchMode m);
MatchMode match_mode_from_string(const std::string& s);

struct CategoryCounts {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;

  bool empty() const { return tp == 0 && fp == 0 && fn == 0; }
  CategoryCounts& operator+=(const CategoryCounts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  bool operator==(const CategoryCounts&) const = default;
};

// Greedy one-to-one matching per category: gold mentions in ascending
// start order each claim the closest eligible unmatched prediction.
std::map<Category, CategoryCounts> match_by_category(const std::vector<Mention>& gold,
                                                     const std::vector<Mention>& pred,
                                                     MatchMode mode);

void add_counts(std::map<Category, CategoryCounts>& into,
                const std::map<Category, CategoryCounts>& add);

// A metric is absent when its denominator is zero, never reported as 0.
struct MentionMetrics {
  CategoryCounts counts;
  std::optional<double> accuracy;   // tp / (tp + fp + fn)
  std::optional<double> precision;  // tp / (tp + fp)
  std::optional<double> recall;     // tp / (tp + fn)
  std::optional<double> f1;         // harmonic mean of precision and recall
};

MentionMetrics compute_metrics(const CategoryCounts& counts);

// Pools raw counts across categories before computing metrics.
MentionMetrics micro_average(const std::map<Category, CategoryCounts>& per_category);

class EvaluationError : public std::runtime_error {
 public:
  enum class Code { LengthMismatch, EmptyMatrix, DegenerateMarginals };

  EvaluationError(Code code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  Code code() const { return code_; }

 private:
  Code code_;
};

// Rows are ground truth, columns are predictions; both are ordered
// High, Intermediate, Low, VeryLow.
struct ConfusionMatrix4 {
  std::array<std::array<std::size_t, 4>, 4> cells{};

  static std::size_t index(RiskCategory r) { return 3 - static_cast<std::size_t>(r); }
  static RiskCategory category_at(std::size_t i) { return static_cast<RiskCategory>(3 - i); }

  std::size_t& at(RiskCategory gold, RiskCategory pred) { return cells[index(gold)][index(pred)]; }
  std::size_t at(RiskCategory gold, RiskCategory pred) const {
    return cells[index(gold)][index(pred)];
  }
  std::size_t row_total(std::size_t i) const;
  std::size_t col_total(std::size_t i) const;
  std::size_t trace() const;
  std::size_t total() const;

  bool operator==(const ConfusionMatrix4&) const = default;
};

ConfusionMatrix4 confusion_matrix(const std::vector<RiskCategory>& gold,
                                  const std::vector<RiskCategory>& pred);

struct ClassificationMetrics {
  double overall_accuracy = 0.0;
  // Recall per true class (diagonal over row total), same row order as
  // the matrix; absent when the class never occurs in the ground truth.
  std::array<std::optional<double>, 4> per_class_accuracy{};
  // Misclassifications that cross the clinically significant boundary:
  // high mistaken for low/very low, or low/very low mistaken for high.
  std::size_t significant_discrepancies = 0;
};

ClassificationMetrics classification_metrics(const ConfusionMatrix4& m);

double cohen_kappa(const ConfusionMatrix4& m);
double cohen_kappa(const std::vector<RiskCategory>& gold, const std::vector<RiskCategory>& pred);

}  // namespace thyropath
