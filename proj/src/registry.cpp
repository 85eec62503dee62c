#include "sprachbund/registry.hpp"

#include <algorithm>
#include <cmath>

#include "sprachbund/error.hpp"
#include "sprachbund/io.hpp"

namespace sprachbund {

using nlohmann::json;

const std::vector<std::string>& canonical_syntax_features() {
  static const std::vector<std::string> names{
      std::string(kWordOrder), std::string(kAdjectivePosition), std::string(kAdpositionPosition)};
  return names;
}

bool is_valid_code(std::string_view code) {
  if (code.size() < 2 || code.size() > 4) {
    return false;
  }
  return std::all_of(code.begin(), code.end(), [](char c) { return c >= 'a' && c <= 'z'; });
}

void require_valid_code(std::string_view code) {
  if (!is_valid_code(code)) {
    throw DataError("invalid language code \"" + std::string(code) + "\" (expected [a-z]{2,4})");
  }
}

std::optional<std::string> LanguageRecord::feature(std::string_view name) const {
  auto it = syntax.find(std::string(name));
  if (it == syntax.end()) {
    return std::nullopt;
  }
  return it->second;
}

Registry::Registry(std::vector<LanguageRecord> records, std::set<std::string> families)
    : records_(std::move(records)), families_(std::move(families)) {
  const bool declared = !families_.empty();
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto& rec = records_[i];
    require_valid_code(rec.code);
    if (!index_.emplace(rec.code, i).second) {
      throw DataError("duplicate language code \"" + rec.code + "\" in registry");
    }
    if (rec.family) {
      if (declared && !families_.contains(*rec.family)) {
        throw DataError("language \"" + rec.code + "\" has undeclared family \"" + *rec.family + "\"");
      }
      if (!declared) {
        families_.insert(*rec.family);
      }
    }
  }
}

bool Registry::contains(std::string_view code) const { return index_.find(code) != index_.end(); }

const LanguageRecord* Registry::find(std::string_view code) const {
  auto it = index_.find(code);
  return it == index_.end() ? nullptr : &records_[it->second];
}

const LanguageRecord& Registry::lookup(std::string_view code) const {
  require_valid_code(code);
  if (const auto* rec = find(code)) {
    return *rec;
  }
  throw DataError("language \"" + std::string(code) + "\" is not registered");
}

std::vector<std::string> Registry::codes() const {
  std::vector<std::string> out;
  out.reserve(records_.size());
  for (const auto& r : records_) {
    out.push_back(r.code);
  }
  return out;
}

std::set<std::string> Registry::feature_names() const {
  std::set<std::string> names(canonical_syntax_features().begin(), canonical_syntax_features().end());
  for (const auto& r : records_) {
    for (const auto& [name, value] : r.syntax) {
      names.insert(name);
    }
  }
  return names;
}

json Registry::to_json() const {
  json langs = json::array();
  for (const auto& r : records_) {
    json syntax = json::object();
    for (const auto& [name, value] : r.syntax) {
      syntax[name] = value ? json(*value) : json(nullptr);
    }
    langs.push_back({{"code", r.code},
                     {"family", r.family ? json(*r.family) : json(nullptr)},
                     {"syntax", std::move(syntax)}});
  }
  return {{"v", kSchemaVersion}, {"families", families_}, {"languages", std::move(langs)}};
}

Registry Registry::from_json(const json& doc) {
  require_schema_version(doc, "registry");
  auto langs = doc.find("languages");
  if (langs == doc.end() || !langs->is_array()) {
    throw DataError("registry: missing \"languages\" array");
  }
  std::set<std::string> families;
  if (auto fam = doc.find("families"); fam != doc.end()) {
    if (!fam->is_array()) {
      throw DataError("registry: \"families\" must be an array of strings");
    }
    for (const auto& f : *fam) {
      if (!f.is_string()) {
        throw DataError("registry: \"families\" must be an array of strings");
      }
      families.insert(f.get<std::string>());
    }
  }
  std::vector<LanguageRecord> records;
  records.reserve(langs->size());
  for (std::size_t i = 0; i < langs->size(); ++i) {
    const auto& entry = (*langs)[i];
    const std::string where = "registry: languages[" + std::to_string(i) + "]";
    if (!entry.is_object() || !entry.contains("code") || !entry["code"].is_string()) {
      throw DataError(where + ": missing string \"code\"");
    }
    LanguageRecord rec;
    rec.code = entry["code"].get<std::string>();
    if (auto fam = entry.find("family"); fam != entry.end() && !fam->is_null()) {
      if (!fam->is_string()) {
        throw DataError(where + ": \"family\" must be a string or null");
      }
      rec.family = fam->get<std::string>();
    }
    if (auto syn = entry.find("syntax"); syn != entry.end() && !syn->is_null()) {
      if (!syn->is_object()) {
        throw DataError(where + ": \"syntax\" must be an object");
      }
      for (const auto& [name, value] : syn->items()) {
        if (value.is_null()) {
          rec.syntax[name] = std::nullopt;
        } else if (value.is_string()) {
          rec.syntax[name] = value.get<std::string>();
        } else {
          throw DataError(where + ": syntax feature \"" + name + "\" must be a string or null");
        }
      }
    }
    records.push_back(std::move(rec));
  }
  return Registry(std::move(records), std::move(families));
}

Registry load_registry(const std::filesystem::path& path) {
  try {
    return Registry::from_json(read_json_file(path));
  } catch (const DataError& e) {
    const std::string msg = e.what();
    if (msg.rfind(path.string(), 0) == 0) {
      throw;
    }
    throw DataError(path.string() + ": " + msg);
  }
}

void save_registry(const Registry& registry, const std::filesystem::path& path) {
  write_json_file(path, registry.to_json());
}

FeatureReport validate_feature_labels(const Registry& registry) {
  FeatureReport report;
  for (const auto& name : registry.feature_names()) {
    std::vector<std::string> missing;
    for (const auto& rec : registry.records()) {
      if (!rec.feature(name)) {
        missing.push_back(rec.code);
      }
    }
    if (!missing.empty()) {
      report.missing.emplace(name, std::move(missing));
    }
  }
  return report;
}

LexicalSimilarityTable::Key LexicalSimilarityTable::key(std::string_view a, std::string_view b) {
  if (b < a) {
    std::swap(a, b);
  }
  return {std::string(a), std::string(b)};
}

void LexicalSimilarityTable::insert(std::string_view a, std::string_view b, double sim) {
  require_valid_code(a);
  require_valid_code(b);
  const std::string pair = "(" + std::string(a) + ", " + std::string(b) + ")";
  if (!std::isfinite(sim) || sim < 0.0 || sim > 1.0) {
    throw DataError("lexical similarity " + pair + " = " + std::to_string(sim) + " is outside [0,1]");
  }
  if (a == b && sim != 1.0) {
    throw DataError("lexical self-similarity " + pair + " must be 1.0");
  }
  auto [it, inserted] = entries_.emplace(key(a, b), sim);
  if (!inserted && it->second != sim) {
    throw DataError("asymmetric lexical similarity for " + pair + ": " + std::to_string(it->second) +
                    " vs " + std::to_string(sim));
  }
}

std::optional<double> LexicalSimilarityTable::get(std::string_view a, std::string_view b) const {
  auto it = entries_.find(key(a, b));
  if (it == entries_.end()) {
    return std::nullopt;
  }
  return it->second;
}

json LexicalSimilarityTable::to_json() const {
  json pairs = json::array();
  for (const auto& [k, sim] : entries_) {
    pairs.push_back({{"a", k.first}, {"b", k.second}, {"sim", sim}});
  }
  return {{"v", kSchemaVersion}, {"pairs", std::move(pairs)}};
}

LexicalSimilarityTable LexicalSimilarityTable::from_json(const json& doc) {
  require_schema_version(doc, "lexical table");
  auto pairs = doc.find("pairs");
  if (pairs == doc.end() || !pairs->is_array()) {
    throw DataError("lexical table: missing \"pairs\" array");
  }
  LexicalSimilarityTable table;
  for (std::size_t i = 0; i < pairs->size(); ++i) {
    const auto& p = (*pairs)[i];
    if (!p.is_object() || !p.contains("a") || !p.contains("b") || !p.contains("sim") ||
        !p["a"].is_string() || !p["b"].is_string() || !p["sim"].is_number()) {
      throw DataError("lexical table: pairs[" + std::to_string(i) +
                      "] needs string \"a\", \"b\" and numeric \"sim\"");
    }
    table.insert(p["a"].get<std::string>(), p["b"].get<std::string>(), p["sim"].get<double>());
  }
  return table;
}

LexicalSimilarityTable load_lexical_table(const std::filesystem::path& path) {
  return LexicalSimilarityTable::from_json(read_json_file(path));
}

}  // namespace sprachbund
