#include "thyropath/evaluation.hpp"

#include <algorithm>
#include <cstdlib>

namespace thyropath {

std::string to_string(MatchMode m) { return m == MatchMode::Strict ? "strict" : "lenient"; }

MatchMode match_mode_from_string(const std::string& s) {
  if (s == "strict") return MatchMode::Strict;
  if (s == "lenient") return MatchMode::Lenient;
  throw std::invalid_argument("unknown match mode '" + s + "'");
}

namespace {

bool spans_overlap(const Mention& a, const Mention& b) {
  return a.begin < b.end && b.begin < a.end;
}

std::size_t span_distance(const Mention& a, const Mention& b) {
  auto d = [](std::size_t x, std::size_t y) { return x > y ? x - y : y - x; };
  return d(a.begin, b.begin) + d(a.end, b.end);
}

bool strict_match(const Mention& g, const Mention& p) {
  return g.begin == p.begin && g.end == p.end && values_equal(g.value, p.value);
}

}  // namespace

std::map<Category, CategoryCounts> match_by_category(const std::vector<Mention>& gold,
                                                     const std::vector<Mention>& pred,
                                                     MatchMode mode) {
  std::map<Category, CategoryCounts> out;
  for (Category c : all_categories()) {
    std::vector<const Mention*> g, p;
    for (const auto& m : gold)
      if (m.category == c) g.push_back(&m);
    for (const auto& m : pred)
      if (m.category == c) p.push_back(&m);
    if (g.empty() && p.empty()) continue;

    std::sort(g.begin(), g.end(), [](const Mention* a, const Mention* b) {
      if (a->begin != b->begin) return a->begin < b->begin;
      return a->end < b->end;
    });

    std::vector<bool> used(p.size(), false);
    CategoryCounts counts;
    for (const Mention* gm : g) {
      std::size_t best = p.size();
      std::size_t best_dist = 0;
      for (std::size_t i = 0; i < p.size(); ++i) {
        if (used[i]) continue;
        const Mention* pm = p[i];
        bool eligible = mode == MatchMode::Strict ? strict_match(*gm, *pm)
                                                  : spans_overlap(*gm, *pm);
        if (!eligible) continue;
        std::size_t dist = span_distance(*gm, *pm);
        if (best == p.size() || dist < best_dist ||
            (dist == best_dist &&
             (p[i]->begin < p[best]->begin ||
              (p[i]->begin == p[best]->begin && p[i]->end < p[best]->end)))) {
          best = i;
          best_dist = dist;
        }
      }
      if (best < p.size()) {
        used[best] = true;
        ++counts.tp;
      } else {
        ++counts.fn;
      }
    }
    for (std::size_t i = 0; i < p.size(); ++i)
      if (!used[i]) ++counts.fp;
    out[c] = counts;
  }
  return out;
}

void add_counts(std::map<Category, CategoryCounts>& into,
                const std::map<Category, CategoryCounts>& add) {
  for (const auto& [c, counts] : add) into[c] += counts;
}

MentionMetrics compute_metrics(const CategoryCounts& counts) {
  MentionMetrics m;
  m.counts = counts;
  double tp = static_cast<double>(counts.tp);
  if (counts.tp + counts.fp + counts.fn > 0)
    m.accuracy = tp / static_cast<double>(counts.tp + counts.fp + counts.fn);
  if (counts.tp + counts.fp > 0) m.precision = tp / static_cast<double>(counts.tp + counts.fp);
  if (counts.tp + counts.fn > 0) m.recall = tp / static_cast<double>(counts.tp + counts.fn);
  if (m.precision && m.recall && (*m.precision + *m.recall) > 0.0)
    m.f1 = 2.0 * *m.precision * *m.recall / (*m.precision + *m.recall);
  return m;
}

MentionMetrics micro_average(const std::map<Category, CategoryCounts>& per_category) {
  CategoryCounts pooled;
  for (const auto& [c, counts] : per_category) {
    (void)c;
    pooled += counts;
  }
  return compute_metrics(pooled);
}

std::size_t ConfusionMatrix4::row_total(std::size_t i) const {
  std::size_t s = 0;
  for (std::size_t j = 0; j < 4; ++j) s += cells[i][j];
  return s;
}

std::size_t ConfusionMatrix4::col_total(std::size_t j) const {
  std::size_t s = 0;
  for (std::size_t i = 0; i < 4; ++i) s += cells[i][j];
  return s;
}

std::size_t ConfusionMatrix4::trace() const {
  std::size_t s = 0;
  for (std::size_t i = 0; i < 4; ++i) s += cells[i][i];
  return s;
}

std::size_t ConfusionMatrix4::total() const {
  std::size_t s = 0;
  for (std::size_t i = 0; i < 4; ++i) s += row_total(i);
  return s;
}

ConfusionMatrix4 confusion_matrix(const std::vector<RiskCategory>& gold,
                                  const std::vector<RiskCategory>& pred) {
  if (gold.size() != pred.size())
    throw EvaluationError(EvaluationError::Code::LengthMismatch,
                          "gold and predicted risk lists differ in length (" +
                              std::to_string(gold.size()) + " vs " + std::to_string(pred.size()) +
                              ")");
  ConfusionMatrix4 m;
  for (std::size_t i = 0; i < gold.size(); ++i) ++m.at(gold[i], pred[i]);
  return m;
}

ClassificationMetrics classification_metrics(const ConfusionMatrix4& m) {
  std::size_t total = m.total();
  if (total == 0)
    throw EvaluationError(EvaluationError::Code::EmptyMatrix, "confusion matrix is empty");
  ClassificationMetrics out;
  out.overall_accuracy = static_cast<double>(m.trace()) / static_cast<double>(total);
  for (std::size_t i = 0; i < 4; ++i) {
    std::size_t row = m.row_total(i);
    if (row > 0)
      out.per_class_accuracy[i] = static_cast<double>(m.cells[i][i]) / static_cast<double>(row);
  }
  out.significant_discrepancies =
      m.at(RiskCategory::High, RiskCategory::Low) + m.at(RiskCategory::High, RiskCategory::VeryLow) +
      m.at(RiskCategory::Low, RiskCategory::High) + m.at(RiskCategory::VeryLow, RiskCategory::High);
  return out;
}

double cohen_kappa(const ConfusionMatrix4& m) {
  std::size_t total = m.total();
  if (total == 0)
    throw EvaluationError(EvaluationError::Code::EmptyMatrix, "confusion matrix is empty");
  std::size_t agree = m.trace();
  std::size_t chance = 0;
  for (std::size_t i = 0; i < 4; ++i) chance += m.row_total(i) * m.col_total(i);
  // p_e == 1 exactly when chance == total^2; compare in integers.
  if (chance == total * total)
    throw EvaluationError(EvaluationError::Code::DegenerateMarginals,
                          "both raters use a single category; kappa is undefined");
  double po = static_cast<double>(agree) / static_cast<double>(total);
  double pe = static_cast<double>(chance) / (static_cast<double>(total) * static_cast<double>(total));
  return (po - pe) / (1.0 - pe);
}

double cohen_kappa(const std::vector<RiskCategory>& gold, const std::vector<RiskCategory>& pred) {
  return cohen_kappa(confusion_matrix(gold, pred));
}

}  // namespace thyropath
