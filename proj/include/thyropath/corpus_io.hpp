#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "thyropath/evaluation.hpp"
#include "thyropath/model.hpp"

namespace thyropath {

class IoError : public std::runtime_error {
 public:
  explicit IoError(std::string message) : std::runtime_error(std::move(message)) {}
};

// A malformed line or field; `line` is 1-based, 0 when unknown.
class SchemaError : public std::runtime_error {
 public:
  SchemaError(std::string message, std::size_t line = 0)
      : std::runtime_error(std::move(message)), line_(line) {}

  std::size_t line() const { return line_; }
  SchemaError at_line(std::size_t line) const { return SchemaError(what(), line); }

 private:
  std::size_t line_;
};

// A mention span that does not fit or match its document.
class SpanError : public std::runtime_error {
 public:
  SpanError(std::string message, std::string doc_id)
      : std::runtime_error(std::move(message)), doc_id_(std::move(doc_id)) {}

  const std::string& doc_id() const { return doc_id_; }

 private:
  std::string doc_id_;
};

// --- report documents (JSONL: {"id","text","format"?}) ---

ReportDocument parse_document_line(const std::string& line);
std::string document_to_line(const ReportDocument& doc);
std::vector<ReportDocument> load_documents(const std::string& path);
void save_documents(const std::string& path, const std::vector<ReportDocument>& docs);

// --- mention sets, with or without a risk label ---
// JSONL: {"doc_id","mentions":[{"category","text","start","end","value"}],"risk"?}

GoldAnnotation parse_annotation_line(const std::string& line);
std::string annotation_to_line(const GoldAnnotation& ann);
std::vector<GoldAnnotation> load_annotations(const std::string& path);
void save_annotations(const std::string& path, const std::vector<GoldAnnotation>& anns);

// Checks every span against the document text; throws SpanError.
void validate_annotation(const GoldAnnotation& ann, const ReportDocument& doc);

// --- risk assignments (JSONL: {"doc_id","risk","triggers":[...]}) ---

struct RiskLine {
  std::string doc_id;
  std::optional<RiskCategory> risk;   // nullopt = insufficient data
  std::vector<std::string> triggers;  // rule triggers, or missing-slot reasons

  bool operator==(const RiskLine&) const = default;
};

RiskLine parse_risk_line(const std::string& line);
std::string risk_to_line(const RiskLine& r);
std::vector<RiskLine> load_risks(const std::string& path);
void save_risks(const std::string& path, const std::vector<RiskLine>& risks);

// --- feature table (CSV: doc_id + one column per category) ---

void save_features_csv(const std::string& path,
                       const std::vector<std::pair<std::string, FeatureRecord>>& rows);
std::vector<std::pair<std::string, FeatureRecord>> load_features_csv(const std::string& path);

// --- evaluation outputs ---

struct MetricsRow {
  std::string label;  // category display name or "Overall"
  MatchMode mode = MatchMode::Strict;
  MentionMetrics metrics;
};

// CSV: label,mode,accuracy,precision,recall,f1 with two-decimal cells;
// absent metrics stay blank.
void save_metrics_csv(const std::string& path, const std::vector<MetricsRow>& rows);
std::string metrics_to_json(const std::vector<MetricsRow>& rows);

void save_confusion_csv(const std::string& path, const ConfusionMatrix4& m);

// Off-diagonal cells as ground_truth,predicted,count rows, most
// frequent first.
void save_error_frequency_csv(const std::string& path, const ConfusionMatrix4& m);

struct Discrepancy {
  std::string doc_id;
  RiskCategory gold = RiskCategory::VeryLow;
  RiskCategory predicted = RiskCategory::VeryLow;
  std::vector<std::string> triggers;  // of the predicted assignment
};

void save_discrepancies(const std::string& path, const std::vector<Discrepancy>& rows);

// --- shared plumbing ---

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace thyropath
