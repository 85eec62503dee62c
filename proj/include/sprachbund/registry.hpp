#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

namespace sprachbund {

// Syntactic feature names queried for the typology analyses.
inline constexpr std::string_view kWordOrder = "word_order";
inline constexpr std::string_view kAdjectivePosition = "adjective_position";
inline constexpr std::string_view kAdpositionPosition = "adposition_position";

const std::vector<std::string>& canonical_syntax_features();

// True when `code` matches [a-z]{2,4}.
bool is_valid_code(std::string_view code);

// Throws DataError naming the code when it is malformed.
void require_valid_code(std::string_view code);

struct LanguageRecord {
  std::string code;
  std::optional<std::string> family;
  // Feature name -> categorical value; a null value marks a known-missing label.
  std::map<std::string, std::optional<std::string>> syntax;

  std::optional<std::string> feature(std::string_view name) const;

  bool operator==(const LanguageRecord&) const = default;
};

// Immutable collection of languages keyed by code.
class Registry {
 public:
  Registry() = default;

  // Validates codes, uniqueness and family membership. When `families` is
  // empty the declared set is taken from the records themselves.
  explicit Registry(std::vector<LanguageRecord> records,
                    std::set<std::string> families = {});

  const std::vector<LanguageRecord>& records() const { return records_; }
  const std::set<std::string>& families() const { return families_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  bool contains(std::string_view code) const;

  // Throws DataError for malformed or unknown codes.
  const LanguageRecord& lookup(std::string_view code) const;
  const LanguageRecord* find(std::string_view code) const;

  std::vector<std::string> codes() const;

  // Every feature name used by any record plus the canonical three.
  std::set<std::string> feature_names() const;

  nlohmann::json to_json() const;
  static Registry from_json(const nlohmann::json& doc);

  bool operator==(const Registry& other) const {
    return records_ == other.records_ && families_ == other.families_;
  }

 private:
  std::vector<LanguageRecord> records_;
  std::set<std::string> families_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

Registry load_registry(const std::filesystem::path& path);
void save_registry(const Registry& registry, const std::filesystem::path& path);

struct FeatureReport {
  // Feature name -> codes lacking a label, in registry order.
  std::map<std::string, std::vector<std::string>> missing;

  bool empty() const { return missing.empty(); }
};

// Never fails; features with full coverage are omitted from the report.
FeatureReport validate_feature_labels(const Registry& registry);

// Unordered language pair -> lexical similarity in [0,1]. Absent pairs are
// missing data, not zero.
class LexicalSimilarityTable {
 public:
  using Key = std::pair<std::string, std::string>;

  LexicalSimilarityTable() = default;

  // Throws DataError on out-of-range values, bad self-pairs, or a pair given
  // twice with different values.
  void insert(std::string_view a, std::string_view b, double sim);

  std::optional<double> get(std::string_view a, std::string_view b) const;

  std::size_t size() const { return entries_.size(); }
  const std::map<Key, double>& entries() const { return entries_; }

  nlohmann::json to_json() const;
  static LexicalSimilarityTable from_json(const nlohmann::json& doc);

 private:
  static Key key(std::string_view a, std::string_view b);

  std::map<Key, double> entries_;
};

LexicalSimilarityTable load_lexical_table(const std::filesystem::path& path);

}  // namespace sprachbund
