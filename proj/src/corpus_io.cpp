#include "thyropath/corpus_io.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace thyropath {

using nlohmann::json;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream out;
  out << in.rdbuf();
  if (in.bad()) throw IoError("read failed on '" + path + "'");
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("write failed on '" + path + "'");
}

namespace {

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) {
      if (pos < text.size()) lines.push_back(text.substr(pos));
      break;
    }
    std::string line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    pos = nl + 1;
  }
  return lines;
}

json parse_json(const std::string& line) {
  try {
    return json::parse(line);
  } catch (const json::exception& e) {
    throw SchemaError(std::string("invalid JSON: ") + e.what());
  }
}

void require_keys(const json& obj, std::initializer_list<const char*> allowed,
                  const char* where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : allowed)
      if (it.key() == k) ok = true;
    if (!ok) throw SchemaError(std::string("unknown key '") + it.key() + "' in " + where);
  }
}

std::string require_string(const json& obj, const char* key, const char* where) {
  if (!obj.contains(key) || !obj[key].is_string())
    throw SchemaError(std::string(where) + " needs a string \"" + key + "\"");
  return obj[key].get<std::string>();
}

json value_to_json(const AttributeValue& v) {
  switch (v.kind()) {
    case ValueKind::Categorical: return v.canonical();
    case ValueKind::Length: return v.cm();
    case ValueKind::Count: return v.n();
    case ValueKind::Tnm: return v.code();
    case ValueKind::Staging: return v.edition();
  }
  return nullptr;
}

AttributeValue value_from_json(Category c, const json& j) {
  try {
    switch (value_kind_of(c)) {
      case ValueKind::Categorical:
        if (!j.is_string()) throw SchemaError("categorical value must be a string");
        return AttributeValue::categorical(j.get<std::string>());
      case ValueKind::Length:
        if (!j.is_number()) throw SchemaError("length value must be a number");
        return AttributeValue::length_cm(j.get<double>());
      case ValueKind::Count:
        if (!j.is_number_integer()) throw SchemaError("count value must be an integer");
        return AttributeValue::count(j.get<long>());
      case ValueKind::Tnm:
        if (!j.is_string()) throw SchemaError("tnm value must be a string");
        return AttributeValue::tnm(j.get<std::string>());
      case ValueKind::Staging:
        if (!j.is_number_integer()) throw SchemaError("staging value must be an integer edition");
        return AttributeValue::staging(j.get<int>());
    }
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("bad value for ") + to_string(c) + ": " + e.what());
  }
  throw SchemaError("unhandled value kind");
}

}  // namespace

ReportDocument parse_document_line(const std::string& line) {
  json j = parse_json(line);
  if (!j.is_object()) throw SchemaError("document line must be a JSON object");
  require_keys(j, {"id", "text", "format"}, "document");
  ReportDocument doc;
  doc.id = require_string(j, "id", "document");
  doc.text = require_string(j, "text", "document");
  if (j.contains("format")) {
    auto f = format_from_string(require_string(j, "format", "document"));
    if (!f) throw SchemaError("unknown format '" + j["format"].get<std::string>() + "'");
    doc.format_hint = *f;
  }
  if (doc.id.empty()) throw SchemaError("document id must not be empty");
  if (doc.text.empty()) throw SchemaError("document '" + doc.id + "' has empty text");
  return doc;
}

std::string document_to_line(const ReportDocument& doc) {
  json j;
  j["id"] = doc.id;
  j["text"] = doc.text;
  j["format"] = to_string(doc.format_hint);
  return j.dump();
}

std::vector<ReportDocument> load_documents(const std::string& path) {
  std::vector<ReportDocument> out;
  auto lines = split_lines(read_file(path));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    try {
      out.push_back(parse_document_line(lines[i]));
    } catch (const SchemaError& e) {
      throw e.at_line(i + 1);
    }
  }
  return out;
}

void save_documents(const std::string& path, const std::vector<ReportDocument>& docs) {
  std::string out;
  for (const auto& d : docs) {
    out += document_to_line(d);
    out += '\n';
  }
  write_file(path, out);
}

GoldAnnotation parse_annotation_line(const std::string& line) {
  json j = parse_json(line);
  if (!j.is_object()) throw SchemaError("annotation line must be a JSON object");
  require_keys(j, {"doc_id", "mentions", "risk"}, "annotation");
  GoldAnnotation ann;
  ann.doc_id = require_string(j, "doc_id", "annotation");
  if (ann.doc_id.empty()) throw SchemaError("annotation doc_id must not be empty");
  if (!j.contains("mentions") || !j["mentions"].is_array())
    throw SchemaError("annotation '" + ann.doc_id + "' needs a \"mentions\" array");
  for (const auto& jm : j["mentions"]) {
    if (!jm.is_object()) throw SchemaError("each mention must be an object");
    require_keys(jm, {"category", "text", "start", "end", "value"}, "mention");
    Mention m;
    auto cat = category_from_string(require_string(jm, "category", "mention"));
    if (!cat)
      throw SchemaError("unknown category '" + jm["category"].get<std::string>() + "' in '" +
                        ann.doc_id + "'");
    m.category = *cat;
    m.surface = require_string(jm, "text", "mention");
    if (!jm.contains("start") || !jm["start"].is_number_unsigned() || !jm.contains("end") ||
        !jm["end"].is_number_unsigned())
      throw SchemaError("mention in '" + ann.doc_id + "' needs unsigned \"start\" and \"end\"");
    m.begin = jm["start"].get<std::size_t>();
    m.end = jm["end"].get<std::size_t>();
    if (m.begin >= m.end)
      throw SchemaError("mention span is empty or inverted in '" + ann.doc_id + "'");
    if (!jm.contains("value")) throw SchemaError("mention in '" + ann.doc_id + "' needs a value");
    m.value = value_from_json(m.category, jm["value"]);
    ann.mentions.push_back(std::move(m));
  }
  if (j.contains("risk")) {
    auto r = risk_from_string(require_string(j, "risk", "annotation"));
    if (!r)
      throw SchemaError("unknown risk '" + j["risk"].get<std::string>() + "' in '" + ann.doc_id +
                        "'");
    ann.risk = *r;
  }
  return ann;
}

std::string annotation_to_line(const GoldAnnotation& ann) {
  json j;
  j["doc_id"] = ann.doc_id;
  j["mentions"] = json::array();
  for (const auto& m : ann.mentions) {
    json jm;
    jm["category"] = to_string(m.category);
    jm["text"] = m.surface;
    jm["start"] = m.begin;
    jm["end"] = m.end;
    jm["value"] = value_to_json(m.value);
    j["mentions"].push_back(std::move(jm));
  }
  if (ann.risk) j["risk"] = to_string(*ann.risk);
  return j.dump();
}

std::vector<GoldAnnotation> load_annotations(const std::string& path) {
  std::vector<GoldAnnotation> out;
  auto lines = split_lines(read_file(path));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    try {
      out.push_back(parse_annotation_line(lines[i]));
    } catch (const SchemaError& e) {
      throw e.at_line(i + 1);
    }
  }
  return out;
}

void save_annotations(const std::string& path, const std::vector<GoldAnnotation>& anns) {
  std::string out;
  for (const auto& a : anns) {
    out += annotation_to_line(a);
    out += '\n';
  }
  write_file(path, out);
}

void validate_annotation(const GoldAnnotation& ann, const ReportDocument& doc) {
  if (ann.doc_id != doc.id)
    throw SpanError("annotation '" + ann.doc_id + "' validated against document '" + doc.id + "'",
                    ann.doc_id);
  for (const auto& m : ann.mentions) {
    try {
      validate_mention(m, doc);
    } catch (const MentionError& e) {
      throw SpanError(e.what(), doc.id);
    }
  }
}

RiskLine parse_risk_line(const std::string& line) {
  json j = parse_json(line);
  if (!j.is_object()) throw SchemaError("risk line must be a JSON object");
  require_keys(j, {"doc_id", "risk", "triggers"}, "risk line");
  RiskLine r;
  r.doc_id = require_string(j, "doc_id", "risk line");
  std::string risk_text = require_string(j, "risk", "risk line");
  if (risk_text != "insufficient_data") {
    auto risk = risk_from_string(risk_text);
    if (!risk) throw SchemaError("unknown risk '" + risk_text + "'");
    r.risk = *risk;
  }
  if (j.contains("triggers")) {
    if (!j["triggers"].is_array()) throw SchemaError("\"triggers\" must be an array");
    for (const auto& t : j["triggers"]) {
      if (!t.is_string()) throw SchemaError("each trigger must be a string");
      r.triggers.push_back(t.get<std::string>());
    }
  }
  return r;
}

std::string risk_to_line(const RiskLine& r) {
  json j;
  j["doc_id"] = r.doc_id;
  j["risk"] = r.risk ? to_string(*r.risk) : "insufficient_data";
  j["triggers"] = r.triggers;
  return j.dump();
}

std::vector<RiskLine> load_risks(const std::string& path) {
  std::vector<RiskLine> out;
  auto lines = split_lines(read_file(path));
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    try {
      out.push_back(parse_risk_line(lines[i]));
    } catch (const SchemaError& e) {
      throw e.at_line(i + 1);
    }
  }
  return out;
}

void save_risks(const std::string& path, const std::vector<RiskLine>& risks) {
  std::string out;
  for (const auto& r : risks) {
    out += risk_to_line(r);
    out += '\n';
  }
  write_file(path, out);
}

namespace {

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> parse_csv_line(const std::string& line, std::size_t line_no) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  std::size_t i = 0;
  while (i < line.size()) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          i += 2;
          continue;
        }
        quoted = false;
        ++i;
        continue;
      }
      cur += c;
      ++i;
      continue;
    }
    if (c == '"' && cur.empty()) {
      quoted = true;
      ++i;
      continue;
    }
    if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
      ++i;
      continue;
    }
    cur += c;
    ++i;
  }
  if (quoted) throw SchemaError("unterminated quote in CSV", line_no);
  fields.push_back(std::move(cur));
  return fields;
}

AttributeValue cell_to_value(Category c, const std::string& cell, std::size_t line_no) {
  try {
    switch (value_kind_of(c)) {
      case ValueKind::Categorical: return AttributeValue::categorical(cell);
      case ValueKind::Tnm: return AttributeValue::tnm(cell);
      case ValueKind::Length: {
        char* end = nullptr;
        double v = std::strtod(cell.c_str(), &end);
        if (end != cell.c_str() + cell.size() || cell.empty())
          throw SchemaError("bad length '" + cell + "'", line_no);
        return AttributeValue::length_cm(v);
      }
      case ValueKind::Count: {
        char* end = nullptr;
        long v = std::strtol(cell.c_str(), &end, 10);
        if (end != cell.c_str() + cell.size() || cell.empty())
          throw SchemaError("bad count '" + cell + "'", line_no);
        return AttributeValue::count(v);
      }
      case ValueKind::Staging: {
        if (cell == "7th edition") return AttributeValue::staging(7);
        if (cell == "8th edition") return AttributeValue::staging(8);
        throw SchemaError("bad staging '" + cell + "'", line_no);
      }
    }
  } catch (const std::invalid_argument& e) {
    throw SchemaError(std::string("bad value for ") + to_string(c) + ": " + e.what(), line_no);
  }
  throw SchemaError("unhandled value kind", line_no);
}

}  // namespace

void save_features_csv(const std::string& path,
                       const std::vector<std::pair<std::string, FeatureRecord>>& rows) {
  std::string out = "doc_id";
  for (Category c : all_categories()) {
    out += ',';
    out += csv_escape(display_name(c));
  }
  out += '\n';
  for (const auto& [id, rec] : rows) {
    out += csv_escape(id);
    for (Category c : all_categories()) {
      out += ',';
      const auto& slot = rec.slot(c);
      if (slot) out += csv_escape(slot->to_text());
    }
    out += '\n';
  }
  write_file(path, out);
}

std::vector<std::pair<std::string, FeatureRecord>> load_features_csv(const std::string& path) {
  auto lines = split_lines(read_file(path));
  if (lines.empty()) throw SchemaError("feature table is empty", 0);
  auto header = parse_csv_line(lines[0], 1);
  if (header.size() != kCategoryCount + 1 || header[0] != "doc_id")
    throw SchemaError("feature table header must be doc_id plus one column per category", 1);
  for (std::size_t i = 0; i < kCategoryCount; ++i)
    if (header[i + 1] != display_name(all_categories()[i]))
      throw SchemaError("unexpected feature column '" + header[i + 1] + "'", 1);

  std::vector<std::pair<std::string, FeatureRecord>> rows;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (lines[li].empty()) continue;
    auto fields = parse_csv_line(lines[li], li + 1);
    if (fields.size() != kCategoryCount + 1)
      throw SchemaError("feature row has " + std::to_string(fields.size()) + " fields, expected " +
                            std::to_string(kCategoryCount + 1),
                        li + 1);
    FeatureRecord rec;
    for (std::size_t i = 0; i < kCategoryCount; ++i) {
      const std::string& cell = fields[i + 1];
      if (cell.empty()) continue;
      Category c = all_categories()[i];
      rec.set_slot(c, cell_to_value(c, cell, li + 1));
    }
    rows.emplace_back(fields[0], std::move(rec));
  }
  return rows;
}

namespace {

std::string fmt2(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", round_half_up_2(v));
  return buf;
}

std::string cell_or_blank(const std::optional<double>& v) { return v ? fmt2(*v) : std::string(); }

}  // namespace

void save_metrics_csv(const std::string& path, const std::vector<MetricsRow>& rows) {
  std::string out = "category,mode,accuracy,precision,recall,f1\n";
  for (const auto& r : rows) {
    out += csv_escape(r.label);
    out += ',';
    out += to_string(r.mode);
    out += ',';
    out += cell_or_blank(r.metrics.accuracy);
    out += ',';
    out += cell_or_blank(r.metrics.precision);
    out += ',';
    out += cell_or_blank(r.metrics.recall);
    out += ',';
    out += cell_or_blank(r.metrics.f1);
    out += '\n';
  }
  write_file(path, out);
}

std::string metrics_to_json(const std::vector<MetricsRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    json j;
    j["category"] = r.label;
    j["mode"] = to_string(r.mode);
    j["tp"] = r.metrics.counts.tp;
    j["fp"] = r.metrics.counts.fp;
    j["fn"] = r.metrics.counts.fn;
    j["accuracy"] = r.metrics.accuracy ? json(*r.metrics.accuracy) : json(nullptr);
    j["precision"] = r.metrics.precision ? json(*r.metrics.precision) : json(nullptr);
    j["recall"] = r.metrics.recall ? json(*r.metrics.recall) : json(nullptr);
    j["f1"] = r.metrics.f1 ? json(*r.metrics.f1) : json(nullptr);
    out.push_back(std::move(j));
  }
  return out.dump(2) + "\n";
}

void save_confusion_csv(const std::string& path, const ConfusionMatrix4& m) {
  std::string out;
  for (std::size_t j = 0; j < 4; ++j) {
    out += ',';
    out += display_name(ConfusionMatrix4::category_at(j));
  }
  out += ",Total\n";
  for (std::size_t i = 0; i < 4; ++i) {
    out += display_name(ConfusionMatrix4::category_at(i));
    for (std::size_t j = 0; j < 4; ++j) {
      out += ',';
      out += std::to_string(m.cells[i][j]);
    }
    out += ',';
    out += std::to_string(m.row_total(i));
    out += '\n';
  }
  out += "Total";
  for (std::size_t j = 0; j < 4; ++j) {
    out += ',';
    out += std::to_string(m.col_total(j));
  }
  out += ',';
  out += std::to_string(m.total());
  out += '\n';
  write_file(path, out);
}

void save_error_frequency_csv(const std::string& path, const ConfusionMatrix4& m) {
  struct Row {
    std::size_t i, j, count;
  };
  std::vector<Row> rows;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      if (i != j && m.cells[i][j] > 0) rows.push_back({i, j, m.cells[i][j]});
  std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    if (a.count != b.count) return a.count > b.count;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });
  std::string out = "ground_truth,predicted,count\n";
  for (const auto& r : rows) {
    out += display_name(ConfusionMatrix4::category_at(r.i));
    out += ',';
    out += display_name(ConfusionMatrix4::category_at(r.j));
    out += ',';
    out += std::to_string(r.count);
    out += '\n';
  }
  write_file(path, out);
}

void save_discrepancies(const std::string& path, const std::vector<Discrepancy>& rows) {
  std::string out;
  for (const auto& d : rows) {
    json j;
    j["doc_id"] = d.doc_id;
    j["gold"] = to_string(d.gold);
    j["predicted"] = to_string(d.predicted);
    j["triggers"] = d.triggers;
    out += j.dump();
    out += '\n';
  }
  write_file(path, out);
}

}  // namespace thyropath
