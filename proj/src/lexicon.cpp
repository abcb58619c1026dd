#include "thyropath/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "thyropath/text_match.hpp"

namespace thyropath {

using nlohmann::json;

std::string KeyString::to_text() const {
  if (!gapped()) return prefix;
  return prefix + " [...] " + suffix;
}

KeyString KeyString::parse(std::string_view text) {
  const std::string marker = "[...]";
  auto pos = text.find(marker);
  KeyString ks;
  if (pos == std::string_view::npos) {
    ks.prefix = normalize_phrase(text);
    return ks;
  }
  ks.prefix = normalize_phrase(text.substr(0, pos));
  ks.suffix = normalize_phrase(text.substr(pos + marker.size()));
  if (ks.prefix.empty() || ks.suffix.empty())
    throw LexiconError(LexiconError::Code::ParseError,
                       "gapped key string needs literal text on both sides: '" +
                           std::string(text) + "'");
  return ks;
}

ExtractionLexicon ExtractionLexicon::build(std::vector<CategoryEntry> entries,
                                           std::vector<KeyStringSet> key_strings,
                                           std::set<std::string> aggressive_histologies,
                                           bool involved_of_examined_extension) {
  ExtractionLexicon lex;
  lex.entries_.resize(kCategoryCount);
  std::vector<bool> seen(kCategoryCount, false);
  for (auto& e : entries) {
    auto idx = static_cast<std::size_t>(e.category);
    if (seen[idx])
      throw LexiconError(LexiconError::Code::ParseError,
                         std::string("duplicate category entry: ") + to_string(e.category));
    if (e.kind != value_kind_of(e.category))
      throw LexiconError(LexiconError::Code::ParseError,
                         std::string("value kind mismatch for ") + to_string(e.category));
    std::set<std::string> canonicals;
    for (auto& a : e.attributes) {
      if (!canonicals.insert(a.canonical).second)
        throw LexiconError(LexiconError::Code::DuplicateCanonical,
                           "duplicate canonical '" + a.canonical + "' in " +
                               to_string(e.category));
      for (auto& s : a.surfaces) s = normalize_phrase(s);
      a.surfaces.erase(std::remove_if(a.surfaces.begin(), a.surfaces.end(),
                                      [](const std::string& s) { return s.empty(); }),
                       a.surfaces.end());
    }
    for (auto& k : e.header_keywords) k = normalize_phrase(k);
    seen[idx] = true;
    lex.entries_[idx] = std::move(e);
  }
  for (std::size_t i = 0; i < kCategoryCount; ++i)
    if (!seen[i])
      throw LexiconError(LexiconError::Code::MissingCategory,
                         std::string("missing category entry: ") +
                             to_string(static_cast<Category>(i)));

  for (auto& ks : key_strings) {
    switch (ks.category) {
      case Category::TumorSize:
      case Category::SizeOfLargestMetastaticDeposit:
      case Category::NumberOfLymphNodesInvolved:
      case Category::NumberOfLymphNodesExamined:
        break;
      default:
        throw LexiconError(LexiconError::Code::BadKeyStringTarget,
                           std::string("key strings not allowed for ") + to_string(ks.category));
    }
  }
  // Canonical set order, so equality is insensitive to construction
  // order (extraction consults sets per category, never by position).
  std::stable_sort(key_strings.begin(), key_strings.end(),
                   [](const KeyStringSet& a, const KeyStringSet& b) {
                     return static_cast<std::size_t>(a.category) <
                            static_cast<std::size_t>(b.category);
                   });
  lex.key_strings_ = std::move(key_strings);

  const auto& subtype = lex.entries_[static_cast<std::size_t>(Category::HistologicSubtype)];
  for (const auto& name : aggressive_histologies) {
    bool known = std::any_of(subtype.attributes.begin(), subtype.attributes.end(),
                             [&](const AttributePattern& a) { return a.canonical == name; });
    if (!known)
      throw LexiconError(LexiconError::Code::ParseError,
                         "aggressive histology '" + name + "' is not a HistologicSubtype value");
  }
  lex.aggressive_ = std::move(aggressive_histologies);
  lex.involved_of_examined_ = involved_of_examined_extension;

  // Ownership census for anchor disambiguation.
  std::map<std::string, std::set<Category>> owners;
  for (const auto& e : lex.entries_)
    for (const auto& a : e.attributes)
      for (const auto& s : a.surfaces) owners[s].insert(e.category);
  for (const auto& [surface, cats] : owners)
    if (cats.size() > 1) lex.shared_surfaces_.insert(surface);
  return lex;
}

const CategoryEntry& ExtractionLexicon::entry(Category c) const {
  return entries_[static_cast<std::size_t>(c)];
}

const KeyStringSet* ExtractionLexicon::key_strings_for(Category c) const {
  for (const auto& ks : key_strings_)
    if (ks.category == c) return &ks;
  return nullptr;
}

AttributeValue ExtractionLexicon::value_for_canonical(Category c,
                                                      const std::string& canonical) const {
  switch (value_kind_of(c)) {
    case ValueKind::Categorical: return AttributeValue::categorical(canonical);
    case ValueKind::Tnm: return AttributeValue::tnm(canonical);
    case ValueKind::Staging:
      if (canonical == "Edition7") return AttributeValue::staging(7);
      if (canonical == "Edition8") return AttributeValue::staging(8);
      throw LexiconError(LexiconError::Code::ParseError,
                         "staging canonical must be Edition7 or Edition8, got '" + canonical +
                             "'");
    default:
      throw LexiconError(LexiconError::Code::ParseError,
                         std::string("numeric category has no canonical values: ") + to_string(c));
  }
}

std::vector<SurfaceHit> ExtractionLexicon::find_attribute_hits(Category c, std::string_view text,
                                                               std::size_t begin,
                                                               std::size_t end) const {
  std::vector<SurfaceHit> hits;
  const auto& e = entry(c);
  if (e.attributes.empty() || begin >= end) return hits;
  end = std::min(end, text.size());
  std::size_t pos = begin;
  while (pos < end) {
    const AttributePattern* best = nullptr;
    std::size_t best_end = 0;
    for (const auto& a : e.attributes) {
      for (const auto& s : a.surfaces) {
        auto m = match_phrase_at(text, pos, s);
        if (m && *m <= end && (best == nullptr || *m > best_end)) {
          best = &a;
          best_end = *m;
        }
      }
    }
    if (best) {
      hits.push_back({pos, best_end, best});
      pos = best_end;
    } else {
      ++pos;
    }
  }
  return hits;
}

std::optional<AttributeValue> ExtractionLexicon::lookup(Category c,
                                                        std::string_view surface) const {
  auto hits = find_attribute_hits(c, surface, 0, surface.size());
  if (hits.empty()) return std::nullopt;
  return value_for_canonical(c, hits.front().pattern->canonical);
}

bool ExtractionLexicon::surface_is_unambiguous(Category c,
                                               const std::string& normalized_surface) const {
  (void)c;
  return shared_surfaces_.count(normalized_surface) == 0;
}

bool ExtractionLexicon::operator==(const ExtractionLexicon& other) const {
  return entries_ == other.entries_ && key_strings_ == other.key_strings_ &&
         aggressive_ == other.aggressive_ &&
         involved_of_examined_ == other.involved_of_examined_;
}

namespace {

const char* kind_name(ValueKind k) {
  switch (k) {
    case ValueKind::Categorical: return "categorical";
    case ValueKind::Length: return "length";
    case ValueKind::Count: return "count";
    case ValueKind::Tnm: return "tnm";
    case ValueKind::Staging: return "staging";
  }
  return "categorical";
}

ValueKind kind_from_name(const std::string& name) {
  if (name == "categorical") return ValueKind::Categorical;
  if (name == "length") return ValueKind::Length;
  if (name == "count") return ValueKind::Count;
  if (name == "tnm") return ValueKind::Tnm;
  if (name == "staging") return ValueKind::Staging;
  throw LexiconError(LexiconError::Code::ParseError, "unknown value_kind '" + name + "'");
}

void require_keys(const json& obj, std::initializer_list<const char*> allowed,
                  const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = std::any_of(allowed.begin(), allowed.end(),
                          [&](const char* k) { return it.key() == k; });
    if (!ok)
      throw LexiconError(LexiconError::Code::ParseError,
                         "unknown key '" + it.key() + "' in " + where);
  }
}

}  // namespace

LoadedConfig load_config(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw LexiconError(LexiconError::Code::ParseError, std::string("config: ") + e.what());
  }
  if (!root.is_object())
    throw LexiconError(LexiconError::Code::ParseError, "config root must be an object");
  require_keys(root,
               {"categories", "key_strings", "aggressive_histologies", "extensions",
                "rules"},
               "config root");
  if (!root.contains("categories"))
    throw LexiconError(LexiconError::Code::ParseError, "config is missing 'categories'");

  std::vector<CategoryEntry> entries;
  for (auto it = root["categories"].begin(); it != root["categories"].end(); ++it) {
    auto cat = category_from_string(it.key());
    if (!cat)
      throw LexiconError(LexiconError::Code::ParseError, "unknown category '" + it.key() + "'");
    const json& je = it.value();
    require_keys(je, {"value_kind", "header_keywords", "attributes"}, "category " + it.key());
    CategoryEntry e;
    e.category = *cat;
    e.kind = kind_from_name(je.value("value_kind", std::string()));
    for (const auto& k : je.value("header_keywords", json::array()))
      e.header_keywords.push_back(k.get<std::string>());
    for (const auto& ja : je.value("attributes", json::array())) {
      require_keys(ja, {"canonical", "surfaces"}, "attribute in " + it.key());
      AttributePattern a;
      a.canonical = ja.value("canonical", std::string());
      if (a.canonical.empty())
        throw LexiconError(LexiconError::Code::ParseError,
                           "attribute with empty canonical in " + it.key());
      for (const auto& s : ja.value("surfaces", json::array()))
        a.surfaces.push_back(s.get<std::string>());
      e.attributes.push_back(std::move(a));
    }
    entries.push_back(std::move(e));
  }

  std::vector<KeyStringSet> key_strings;
  if (root.contains("key_strings")) {
    for (auto it = root["key_strings"].begin(); it != root["key_strings"].end(); ++it) {
      auto cat = category_from_string(it.key());
      if (!cat)
        throw LexiconError(LexiconError::Code::BadKeyStringTarget,
                           "key strings for unknown category '" + it.key() + "'");
      KeyStringSet ks;
      ks.category = *cat;
      for (const auto& t : it.value()) ks.templates.push_back(KeyString::parse(t.get<std::string>()));
      key_strings.push_back(std::move(ks));
    }
  }

  std::set<std::string> aggressive;
  for (const auto& a : root.value("aggressive_histologies", json::array()))
    aggressive.insert(a.get<std::string>());

  bool extension = false;
  for (const auto& x : root.value("extensions", json::array())) {
    auto name = x.get<std::string>();
    if (name == "involved_of_examined")
      extension = true;
    else
      throw LexiconError(LexiconError::Code::ParseError, "unknown extension '" + name + "'");
  }

  LoadedConfig cfg;
  cfg.lexicon =
      ExtractionLexicon::build(std::move(entries), std::move(key_strings), std::move(aggressive),
                               extension);
  if (root.contains("rules")) cfg.rules_json = root["rules"].dump();
  return cfg;
}

LoadedConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LexiconError(LexiconError::Code::ParseError, "cannot open lexicon '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_config(buf.str());
}

ExtractionLexicon load_lexicon(const std::string& json_text) {
  return load_config(json_text).lexicon;
}

std::string config_to_json(const ExtractionLexicon& lex, const std::string& rules_json) {
  json root;
  json cats = json::object();
  for (Category c : all_categories()) {
    const auto& e = lex.entry(c);
    json je;
    je["value_kind"] = kind_name(e.kind);
    je["header_keywords"] = e.header_keywords;
    json attrs = json::array();
    for (const auto& a : e.attributes) {
      json ja;
      ja["canonical"] = a.canonical;
      ja["surfaces"] = a.surfaces;
      attrs.push_back(std::move(ja));
    }
    je["attributes"] = std::move(attrs);
    cats[to_string(c)] = std::move(je);
  }
  root["categories"] = std::move(cats);

  json kss = json::object();
  for (const auto& ks : lex.key_string_sets()) {
    json arr = json::array();
    for (const auto& t : ks.templates) arr.push_back(t.to_text());
    kss[to_string(ks.category)] = std::move(arr);
  }
  root["key_strings"] = std::move(kss);
  root["aggressive_histologies"] = lex.aggressive_histologies();
  if (lex.involved_of_examined_extension())
    root["extensions"] = json::array({"involved_of_examined"});
  if (!rules_json.empty()) root["rules"] = json::parse(rules_json);
  return root.dump(2) + "\n";
}

}  // namespace thyropath
