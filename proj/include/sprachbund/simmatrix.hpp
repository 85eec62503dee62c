#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sprachbund/embedding.hpp"
#include "sprachbund/registry.hpp"

namespace sprachbund {

// cos(a, b) clamped to [-1, 1]; accumulation is in double. Throws DataError on
// length mismatch or when either argument has zero norm.
double cosine(std::span<const float> a, std::span<const float> b);
double cosine(std::span<const double> a, std::span<const double> b);

// Dense symmetric similarity matrix over an ordered language list. The
// diagonal is exactly 1 and (i, j) and (j, i) hold the same double.
class SimilarityMatrix {
 public:
  SimilarityMatrix() = default;

  // Validates symmetry, unit diagonal and the [-1, 1] range (1e-9 slack).
  SimilarityMatrix(std::vector<std::string> languages, std::vector<double> values);

  std::size_t size() const { return languages_.size(); }
  const std::vector<std::string>& languages() const { return languages_; }

  double operator()(std::size_t i, std::size_t j) const { return values_[i * size() + j]; }
  std::span<const double> row(std::size_t i) const {
    return {values_.data() + i * size(), size()};
  }
  const std::vector<double>& values() const { return values_; }

  // Throws DataError when the code is absent.
  std::size_t index_of(std::string_view code) const;
  bool contains(std::string_view code) const;

  // Restriction to `codes`, in the given order.
  SimilarityMatrix subset(const std::vector<std::string>& codes) const;

  nlohmann::json to_json() const;
  static SimilarityMatrix from_json(const nlohmann::json& doc);
  std::string to_csv() const;

  bool operator==(const SimilarityMatrix&) const = default;

 private:
  std::vector<std::string> languages_;
  std::vector<double> values_;
};

// Needs at least two representations of a common dimension, all nonzero.
SimilarityMatrix build_matrix(const std::vector<LanguageRepresentation>& reps);

SimilarityMatrix load_matrix(const std::filesystem::path& path);

// Sample Pearson correlation, two-pass. Requires equal lengths >= 3 and
// non-constant inputs.
double pearson(std::span<const double> xs, std::span<const double> ys);

struct PairedSimilarities {
  std::vector<std::pair<std::string, std::string>> pairs;
  std::vector<double> xs;  // from the matrix
  std::vector<double> ys;  // from the lexical table
};

// Off-diagonal pairs (i < j in matrix order) present in the table. Throws
// DataError when fewer than three pairs are shared.
PairedSimilarities paired_similarity_vectors(const SimilarityMatrix& matrix,
                                             const LexicalSimilarityTable& table);

}  // namespace sprachbund
