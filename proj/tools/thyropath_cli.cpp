#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "thyropath/classifier.hpp"
#include "thyropath/corpus_io.hpp"
#include "thyropath/evaluation.hpp"
#include "thyropath/extraction.hpp"
#include "thyropath/generator.hpp"
#include "thyropath/lexicon.hpp"

namespace {

using json = nlohmann::json;
using namespace thyropath;

// Exit codes: 0 success, 1 I/O, 2 schema/config, 3 internal invariant.
constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitSchema = 2;
constexpr int kExitInternal = 3;

std::vector<std::string> split_jsonl(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string::npos) nl = text.size();
    std::string line = text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(std::move(line));
    pos = nl + 1;
  }
  return lines;
}

// Config precedence: explicit flag, then THYROPATH_LEXICON, then the
// built-in default.
std::optional<std::string> config_path(const std::string& flag_value) {
  if (!flag_value.empty()) return flag_value;
  if (const char* env = std::getenv("THYROPATH_LEXICON"); env && *env) return std::string(env);
  return std::nullopt;
}

struct Pipeline {
  ExtractionLexicon lexicon;
  RuleTable rules;
};

Pipeline load_pipeline(const std::string& flag_value) {
  if (auto path = config_path(flag_value)) {
    LoadedConfig cfg = load_config_file(*path);
    auto aggressive = cfg.lexicon.aggressive_histologies();
    return {std::move(cfg.lexicon), rules_from_json(cfg.rules_json, std::move(aggressive))};
  }
  const ExtractionLexicon& lex = default_lexicon();
  return {lex, default_rule_table(lex.aggressive_histologies())};
}

int run_extract(const std::string& input, const std::string& lexicon_flag,
                const std::string& format, const std::string& out,
                const std::string& features_path, const std::string& errors_path) {
  Pipeline pipe = load_pipeline(lexicon_flag);

  std::optional<FormatHint> forced;
  if (format == "structured")
    forced = FormatHint::Structured;
  else if (format == "unstructured")
    forced = FormatHint::Unstructured;
  else if (format != "auto")
    throw SchemaError("--format must be auto, structured or unstructured");

  auto lines = split_jsonl(read_file(input));
  std::string mentions_out, errors_out;
  std::vector<std::pair<std::string, FeatureRecord>> feature_rows;
  std::size_t failures = 0;

  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    ReportDocument doc;
    try {
      doc = parse_document_line(lines[i]);
    } catch (const SchemaError& e) {
      json err{{"line", i + 1}, {"error", e.what()}};
      errors_out += err.dump() + "\n";
      ++failures;
      continue;
    }
    if (forced) doc.format_hint = *forced;
    try {
      GoldAnnotation ann;
      ann.doc_id = doc.id;
      ann.mentions = extract(doc, pipe.lexicon);
      mentions_out += annotation_to_line(ann) + "\n";
      feature_rows.emplace_back(doc.id, to_feature_record(doc, ann.mentions));
    } catch (const ExtractionError& e) {
      json err{{"doc_id", doc.id},
               {"error", e.what()},
               {"start", e.begin},
               {"end", e.end}};
      errors_out += err.dump() + "\n";
      ++failures;
    }
  }

  write_file(out, mentions_out);
  if (!features_path.empty()) {
    save_features_csv(features_path, feature_rows);
  }
  if (!errors_path.empty()) write_file(errors_path, errors_out);
  if (failures > 0)
    std::cerr << "extract: " << failures << " document(s) failed; see "
              << (errors_path.empty() ? "(errors discarded: no --errors path)" : errors_path)
              << "\n";
  return kExitOk;
}

std::string trigger_text(const RuleTable& table, const Trigger& t) {
  if (const RiskRule* rule = table.find(t.rule_id))
    return t.rule_id + ": " + rule->label + " (" + t.value_text + ")";
  return t.rule_id + ": no higher rule fired (tumor size " + t.value_text + ")";
}

int run_classify(const std::string& features_path, const std::string& rules_flag,
                 const std::string& policy_name, const std::string& out) {
  Pipeline pipe = load_pipeline(rules_flag);
  Policy policy = policy_from_string(policy_name);

  auto rows = load_features_csv(features_path);
  std::vector<RiskLine> out_lines;
  out_lines.reserve(rows.size());
  for (const auto& [doc_id, record] : rows) {
    RiskLine line;
    line.doc_id = doc_id;
    try {
      RiskAssignment a = classify(record, pipe.rules, policy);
      line.risk = a.risk;
      for (const auto& t : a.triggers) line.triggers.push_back(trigger_text(pipe.rules, t));
    } catch (const ClassifierError& e) {
      if (e.code() != ClassifierError::Code::InsufficientData) throw;
      for (Category c : e.missing())
        line.triggers.push_back(std::string("missing: ") + display_name(c));
    }
    out_lines.push_back(std::move(line));
  }
  save_risks(out, out_lines);
  return kExitOk;
}

int run_eval_extraction(const std::string& gold_path, const std::string& pred_path,
                        const std::string& mode_name, const std::string& out) {
  auto gold = load_annotations(gold_path);
  auto pred = load_annotations(pred_path);

  std::map<std::string, const GoldAnnotation*> pred_by_id;
  for (const auto& p : pred) pred_by_id[p.doc_id] = &p;

  std::vector<MatchMode> modes;
  if (mode_name == "strict")
    modes = {MatchMode::Strict};
  else if (mode_name == "lenient")
    modes = {MatchMode::Lenient};
  else if (mode_name == "both")
    modes = {MatchMode::Strict, MatchMode::Lenient};
  else
    throw SchemaError("--mode must be strict, lenient or both");

  static const std::vector<Mention> kNoMentions;
  std::vector<MetricsRow> rows;
  for (MatchMode mode : modes) {
    std::map<Category, CategoryCounts> totals;
    for (const auto& g : gold) {
      const std::vector<Mention>* p = &kNoMentions;
      if (auto it = pred_by_id.find(g.doc_id); it != pred_by_id.end()) p = &it->second->mentions;
      add_counts(totals, match_by_category(g.mentions, *p, mode));
    }
    CategoryCounts pooled;
    for (Category c : all_categories()) {
      auto it = totals.find(c);
      CategoryCounts counts = it == totals.end() ? CategoryCounts{} : it->second;
      pooled += counts;
      if (!counts.empty()) rows.push_back({display_name(c), mode, compute_metrics(counts)});
    }
    rows.push_back({"Overall", mode, compute_metrics(pooled)});
  }
  std::size_t known = 0;
  for (const auto& g : gold) known += pred_by_id.count(g.doc_id);
  if (known < pred_by_id.size())
    std::cerr << "evaluate-extraction: predictions contain documents absent from gold\n";

  save_metrics_csv(out, rows);
  std::cout << metrics_to_json(rows) << "\n";
  return kExitOk;
}

const char* risk_json_name(RiskCategory r) { return to_string(r); }

int run_eval_classification(const std::string& gold_path, const std::string& pred_path,
                            const std::string& out, const std::string& errors_path,
                            const std::string& discrepancies_path) {
  auto gold = load_annotations(gold_path);
  auto pred = load_risks(pred_path);

  std::map<std::string, const RiskLine*> pred_by_id;
  for (const auto& p : pred) pred_by_id[p.doc_id] = &p;

  std::vector<RiskCategory> gold_risks, pred_risks;
  std::vector<Discrepancy> discrepancies;
  std::size_t insufficient = 0;
  for (const auto& g : gold) {
    if (!g.risk) throw SchemaError("gold document '" + g.doc_id + "' carries no risk label");
    auto it = pred_by_id.find(g.doc_id);
    if (it == pred_by_id.end())
      throw SchemaError("no prediction for document '" + g.doc_id + "'");
    if (!it->second->risk) {
      ++insufficient;
      continue;
    }
    gold_risks.push_back(*g.risk);
    pred_risks.push_back(*it->second->risk);
    RiskCategory gr = *g.risk, pr = *it->second->risk;
    bool significant = (gr == RiskCategory::High &&
                        (pr == RiskCategory::Low || pr == RiskCategory::VeryLow)) ||
                       (pr == RiskCategory::High &&
                        (gr == RiskCategory::Low || gr == RiskCategory::VeryLow));
    if (significant) discrepancies.push_back({g.doc_id, gr, pr, it->second->triggers});
  }
  if (insufficient > 0)
    std::cerr << "evaluate-classification: " << insufficient
              << " prediction(s) had insufficient data and were excluded\n";

  ConfusionMatrix4 m = confusion_matrix(gold_risks, pred_risks);
  ClassificationMetrics metrics = classification_metrics(m);
  save_confusion_csv(out, m);
  if (!errors_path.empty()) save_error_frequency_csv(errors_path, m);
  if (!discrepancies_path.empty()) save_discrepancies(discrepancies_path, discrepancies);

  json summary;
  summary["total"] = m.total();
  summary["excluded_insufficient_data"] = insufficient;
  summary["overall_accuracy"] = metrics.overall_accuracy;
  json per_class = json::object();
  for (std::size_t i = 0; i < 4; ++i) {
    RiskCategory r = ConfusionMatrix4::category_at(i);
    const auto& acc = metrics.per_class_accuracy[i];
    per_class[risk_json_name(r)] = acc ? json(*acc) : json(nullptr);
  }
  summary["per_class_accuracy"] = per_class;
  summary["significant_discrepancies"] = metrics.significant_discrepancies;
  try {
    summary["kappa"] = cohen_kappa(m);
  } catch (const EvaluationError&) {
    summary["kappa"] = nullptr;
    std::cerr << "evaluate-classification: kappa undefined (degenerate marginals)\n";
  }
  std::cout << summary.dump(2) << "\n";
  return kExitOk;
}

int run_generate(std::uint64_t seed, std::size_t n, double structured_frac,
                 const std::string& noise_name, const std::string& lexicon_flag,
                 const std::string& out_prefix) {
  NoiseProfile noise;
  if (noise_name == "none")
    noise = NoiseProfile::none();
  else if (noise_name == "standard")
    noise = NoiseProfile::standard();
  else
    throw SchemaError("--noise must be none or standard");

  Pipeline pipe = load_pipeline(lexicon_flag);
  GeneratorConfig config;
  config.seed = seed;
  config.n = n;
  config.structured_fraction = structured_frac;
  config.noise = noise;

  std::vector<SyntheticDoc> docs;
  try {
    docs = generate_synthetic(config, pipe.lexicon);
  } catch (const std::invalid_argument& e) {
    throw SchemaError(e.what());
  }

  std::vector<ReportDocument> corpus;
  std::vector<GoldAnnotation> gold;
  std::vector<std::pair<std::string, FeatureRecord>> features;
  for (auto& d : docs) {
    corpus.push_back(d.doc);
    gold.push_back(d.gold);
    features.emplace_back(d.doc.id, d.record);
  }
  save_documents(out_prefix + "corpus.jsonl", corpus);
  save_annotations(out_prefix + "gold.jsonl", gold);
  save_features_csv(out_prefix + "features.csv", features);
  return kExitOk;
}

int run_dump_config(const std::string& out) {
  const ExtractionLexicon& lex = default_lexicon();
  std::string text =
      config_to_json(lex, rules_to_json(default_rule_table(lex.aggressive_histologies())));
  if (out.empty())
    std::cout << text;
  else
    write_file(out, text);
  return kExitOk;
}

int guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const SchemaError& e) {
    if (e.line() > 0)
      std::cerr << "schema error (line " << e.line() << "): " << e.what() << "\n";
    else
      std::cerr << "schema error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const LexiconError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const SpanError& e) {
    std::cerr << "schema error (doc " << e.doc_id() << "): " << e.what() << "\n";
    return kExitSchema;
  } catch (const ValidationError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const MentionError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const ClassifierError& e) {
    std::cerr << (e.code() == ClassifierError::Code::BadRule ? "config error: "
                                                             : "internal error: ")
              << e.what() << "\n";
    return e.code() == ClassifierError::Code::BadRule ? kExitSchema : kExitInternal;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSchema;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pathology-report feature extraction and recurrence-risk classification"};
  app.require_subcommand(1);

  // extract
  std::string ex_input, ex_lexicon, ex_format = "auto", ex_out, ex_features, ex_errors;
  auto* extract_cmd = app.add_subcommand("extract", "Extract mentions from a report corpus");
  extract_cmd->add_option("--input", ex_input, "Corpus JSONL")->required();
  extract_cmd->add_option("--lexicon", ex_lexicon, "Config JSON (default: built-in)");
  extract_cmd->add_option("--format", ex_format, "auto|structured|unstructured");
  extract_cmd->add_option("--out", ex_out, "Mentions JSONL output")->required();
  extract_cmd->add_option("--features", ex_features, "Feature-table CSV output");
  extract_cmd->add_option("--errors", ex_errors, "Per-document failure sidecar JSONL");

  // classify
  std::string cl_features, cl_rules, cl_policy = "permissive", cl_out;
  auto* classify_cmd = app.add_subcommand("classify", "Assign recurrence risk to feature rows");
  classify_cmd->add_option("--features", cl_features, "Feature-table CSV")->required();
  classify_cmd->add_option("--rules", cl_rules, "Config JSON carrying the rule table");
  classify_cmd->add_option("--policy", cl_policy, "strict|permissive");
  classify_cmd->add_option("--out", cl_out, "Risk JSONL output")->required();

  // evaluate-extraction
  std::string ee_gold, ee_pred, ee_mode = "both", ee_out;
  auto* ee_cmd = app.add_subcommand("evaluate-extraction", "Score predicted mentions against gold");
  ee_cmd->add_option("--gold", ee_gold, "Gold annotations JSONL")->required();
  ee_cmd->add_option("--pred", ee_pred, "Predicted mentions JSONL")->required();
  ee_cmd->add_option("--mode", ee_mode, "strict|lenient|both");
  ee_cmd->add_option("--out", ee_out, "Metrics CSV output")->required();

  // evaluate-classification
  std::string ec_gold, ec_pred, ec_out, ec_errors, ec_disc;
  auto* ec_cmd =
      app.add_subcommand("evaluate-classification", "Score predicted risks against gold");
  ec_cmd->add_option("--gold", ec_gold, "Gold annotations JSONL (with risk)")->required();
  ec_cmd->add_option("--pred", ec_pred, "Predicted risks JSONL")->required();
  ec_cmd->add_option("--out", ec_out, "Confusion-matrix CSV output")->required();
  ec_cmd->add_option("--errors", ec_errors, "Error-frequency CSV output");
  ec_cmd->add_option("--discrepancies", ec_disc, "Significant-discrepancy JSONL output");

  // generate
  std::uint64_t g_seed = 1;
  std::size_t g_n = 100;
  double g_frac = 0.5;
  std::string g_noise = "standard", g_lexicon, g_prefix;
  auto* gen_cmd = app.add_subcommand("generate", "Emit a synthetic corpus with gold annotations");
  gen_cmd->add_option("--seed", g_seed, "Generator seed");
  gen_cmd->add_option("--n", g_n, "Number of documents");
  gen_cmd->add_option("--structured-frac", g_frac, "Leading fraction rendered structured");
  gen_cmd->add_option("--noise", g_noise, "none|standard");
  gen_cmd->add_option("--lexicon", g_lexicon, "Config JSON (default: built-in)");
  gen_cmd->add_option("--out-prefix", g_prefix, "Output path prefix")->required();

  // dump-config
  std::string dc_out;
  auto* dc_cmd = app.add_subcommand("dump-config", "Print the built-in config as JSON");
  dc_cmd->add_option("--out", dc_out, "Write to file instead of standard output");

  CLI11_PARSE(app, argc, argv);

  if (extract_cmd->parsed())
    return guarded([&] {
      return run_extract(ex_input, ex_lexicon, ex_format, ex_out, ex_features, ex_errors);
    });
  if (classify_cmd->parsed())
    return guarded([&] { return run_classify(cl_features, cl_rules, cl_policy, cl_out); });
  if (ee_cmd->parsed())
    return guarded([&] { return run_eval_extraction(ee_gold, ee_pred, ee_mode, ee_out); });
  if (ec_cmd->parsed())
    return guarded(
        [&] { return run_eval_classification(ec_gold, ec_pred, ec_out, ec_errors, ec_disc); });
  if (gen_cmd->parsed())
    return guarded(
        [&] { return run_generate(g_seed, g_n, g_frac, g_noise, g_lexicon, g_prefix); });
  if (dc_cmd->parsed()) return guarded([&] { return run_dump_config(dc_out); });
  return kExitSchema;
}
