#include "sprachbund/embedding.hpp"

#include <cmath>
#include <map>
#include <set>
#include <sstream>

#include "sprachbund/error.hpp"
#include "sprachbund/io.hpp"

namespace sprachbund {

using nlohmann::json;

SentenceEmbeddingSet::SentenceEmbeddingSet(std::string language, std::size_t dim)
    : language_(std::move(language)), dim_(dim) {
  if (dim_ == 0) {
    throw DataError("embedding dimension must be positive");
  }
}

void SentenceEmbeddingSet::reserve(std::size_t n) {
  ids_.reserve(n);
  values_.reserve(n * dim_);
}

void SentenceEmbeddingSet::add(std::int64_t id, std::span<const float> vec) {
  if (vec.size() != dim_) {
    throw DataError("embedding " + language_ + "/" + std::to_string(id) + " has dimension " +
                    std::to_string(vec.size()) + ", expected " + std::to_string(dim_));
  }
  for (std::size_t k = 0; k < vec.size(); ++k) {
    if (!std::isfinite(vec[k])) {
      throw DataError("embedding " + language_ + "/" + std::to_string(id) +
                      " has a non-finite component at index " + std::to_string(k));
    }
  }
  ids_.push_back(id);
  values_.insert(values_.end(), vec.begin(), vec.end());
}

LanguageRepresentation centroid(const SentenceEmbeddingSet& set) {
  if (set.empty()) {
    throw DataError("cannot take the centroid of an empty embedding set (" + set.language() + ")");
  }
  const std::size_t dim = set.dim();
  std::vector<double> sum(dim, 0.0);
  std::vector<double> comp(dim, 0.0);
  for (std::size_t i = 0; i < set.size(); ++i) {
    const auto v = set.vector(i);
    for (std::size_t k = 0; k < dim; ++k) {
      const double y = static_cast<double>(v[k]) - comp[k];
      const double t = sum[k] + y;
      comp[k] = (t - sum[k]) - y;
      sum[k] = t;
    }
  }
  LanguageRepresentation rep{set.language(), std::vector<float>(dim), set.size()};
  const double n = static_cast<double>(set.size());
  for (std::size_t k = 0; k < dim; ++k) {
    rep.vector[k] = static_cast<float>(sum[k] / n);
  }
  return rep;
}

std::vector<LanguageRepresentation> centroid_all(const std::vector<SentenceEmbeddingSet>& sets) {
  std::set<std::string> seen;
  std::vector<LanguageRepresentation> reps;
  reps.reserve(sets.size());
  for (const auto& set : sets) {
    if (!seen.insert(set.language()).second) {
      throw DataError("duplicate embedding set for language \"" + set.language() + "\"");
    }
    if (set.dim() != sets.front().dim()) {
      throw DataError("embedding set for \"" + set.language() + "\" has dimension " +
                      std::to_string(set.dim()) + ", expected " + std::to_string(sets.front().dim()));
    }
    reps.push_back(centroid(set));
  }
  return reps;
}

namespace {

// Python's json module writes NaN, Infinity and -Infinity; map them to null
// outside string literals so they surface as non-finite values.
std::string neutralize_non_finite_tokens(std::string_view line) {
  std::string out;
  out.reserve(line.size());
  bool in_string = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (in_string) {
      out += c;
      if (c == '\\' && i + 1 < line.size()) {
        out += line[++i];
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
      out += c;
      continue;
    }
    auto match = [&](std::string_view token) { return line.substr(i, token.size()) == token; };
    if (match("-Infinity")) {
      out += "null";
      i += 8;
    } else if (match("Infinity")) {
      out += "null";
      i += 7;
    } else if (match("NaN")) {
      out += "null";
      i += 2;
    } else {
      out += c;
    }
  }
  return out;
}

}  // namespace

std::vector<SentenceEmbeddingSet> parse_embeddings(std::string_view text, const std::string& source) {
  std::vector<SentenceEmbeddingSet> sets;
  std::map<std::string, std::size_t> by_language;
  std::set<std::pair<std::string, std::int64_t>> seen_ids;
  std::size_t dim = 0;
  bool have_header = false;
  std::vector<float> buf;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) {
      end = text.size();
    }
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) {
      continue;
    }
    const std::string where = source + ":" + std::to_string(line_no);
    json rec;
    try {
      rec = json::parse(neutralize_non_finite_tokens(line));
    } catch (const json::parse_error& e) {
      throw DataError(where + ": " + e.what());
    }
    if (!have_header) {
      require_schema_version(rec, where + ": embedding header");
      if (!rec.contains("dim") || !rec["dim"].is_number_unsigned() || rec["dim"].get<std::size_t>() == 0) {
        throw DataError(where + ": embedding header needs a positive integer \"dim\"");
      }
      dim = rec["dim"].get<std::size_t>();
      have_header = true;
      continue;
    }
    if (!rec.is_object() || !rec.contains("lang") || !rec["lang"].is_string() || !rec.contains("id") ||
        !rec["id"].is_number_integer() || !rec.contains("vec") || !rec["vec"].is_array()) {
      throw DataError(where + ": expected {\"lang\": string, \"id\": int, \"vec\": [floats]}");
    }
    const auto lang = rec["lang"].get<std::string>();
    const auto id = rec["id"].get<std::int64_t>();
    require_valid_code(lang);
    const auto& vec = rec["vec"];
    const std::string who = where + " (" + lang + "/" + std::to_string(id) + ")";
    if (vec.size() != dim) {
      throw DataError("dimension mismatch at " + who + ": got " + std::to_string(vec.size()) +
                      ", header declares " + std::to_string(dim));
    }
    buf.resize(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      if (!vec[k].is_number()) {
        throw DataError("non-finite or non-numeric value at " + who + ", component " + std::to_string(k));
      }
      const double value = vec[k].get<double>();
      buf[k] = static_cast<float>(value);
      if (!std::isfinite(buf[k])) {
        throw DataError("non-finite value at " + who + ", component " + std::to_string(k));
      }
    }
    if (!seen_ids.emplace(lang, id).second) {
      throw DataError("duplicate sentence id at " + who);
    }
    auto [it, inserted] = by_language.emplace(lang, sets.size());
    if (inserted) {
      sets.emplace_back(lang, dim);
    }
    sets[it->second].add(id, buf);
  }
  if (!have_header) {
    throw DataError(source + ": missing embedding header line");
  }
  return sets;
}

std::vector<SentenceEmbeddingSet> load_embeddings(const std::filesystem::path& path) {
  return parse_embeddings(read_text_file(path), path.string());
}

std::string serialize_embeddings(const std::vector<SentenceEmbeddingSet>& sets, std::size_t dim) {
  std::string out = json{{"v", kSchemaVersion}, {"dim", dim}}.dump() + "\n";
  for (const auto& set : sets) {
    if (set.dim() != dim) {
      throw DataError("cannot serialize \"" + set.language() + "\": dimension " +
                      std::to_string(set.dim()) + " differs from " + std::to_string(dim));
    }
    for (std::size_t i = 0; i < set.size(); ++i) {
      const auto v = set.vector(i);
      json rec{{"lang", set.language()}, {"id", set.id(i)}, {"vec", std::vector<float>(v.begin(), v.end())}};
      out += rec.dump();
      out += '\n';
    }
  }
  return out;
}

json representations_to_json(const std::vector<LanguageRepresentation>& reps) {
  json langs = json::array();
  for (const auto& r : reps) {
    langs.push_back({{"code", r.language}, {"sample_count", r.sample_count}, {"vector", r.vector}});
  }
  return {{"v", kSchemaVersion},
          {"dim", reps.empty() ? 0 : reps.front().vector.size()},
          {"languages", std::move(langs)}};
}

std::vector<LanguageRepresentation> representations_from_json(const json& doc) {
  require_schema_version(doc, "representations");
  if (!doc.contains("languages") || !doc["languages"].is_array()) {
    throw DataError("representations: missing \"languages\" array");
  }
  std::vector<LanguageRepresentation> reps;
  std::set<std::string> seen;
  for (const auto& entry : doc["languages"]) {
    LanguageRepresentation r;
    try {
      r.language = entry.at("code").get<std::string>();
      r.sample_count = entry.at("sample_count").get<std::size_t>();
      r.vector = entry.at("vector").get<std::vector<float>>();
    } catch (const json::exception& e) {
      throw DataError(std::string("representations: malformed entry: ") + e.what());
    }
    require_valid_code(r.language);
    if (!seen.insert(r.language).second) {
      throw DataError("representations: duplicate language \"" + r.language + "\"");
    }
    if (r.sample_count == 0) {
      throw DataError("representations: \"" + r.language + "\" has sample_count 0");
    }
    if (!reps.empty() && r.vector.size() != reps.front().vector.size()) {
      throw DataError("representations: \"" + r.language + "\" has a different dimension");
    }
    for (float x : r.vector) {
      if (!std::isfinite(x)) {
        throw DataError("representations: \"" + r.language + "\" has a non-finite component");
      }
    }
    reps.push_back(std::move(r));
  }
  return reps;
}

}  // namespace sprachbund
