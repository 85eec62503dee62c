#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "sprachbund/simmatrix.hpp"

namespace sprachbund {

// One agglomeration step. Leaves are nodes 0..M-1; the t-th merge creates
// node M+t. `left` < `right` always.
struct Merge {
  std::size_t left = 0;
  std::size_t right = 0;
  double distance = 0.0;
  std::size_t node = 0;

  bool operator==(const Merge&) const = default;
};

struct Dendrogram {
  std::vector<std::string> languages;  // leaf labels, node id = index
  std::vector<Merge> merges;

  std::size_t leaf_count() const { return languages.size(); }

  nlohmann::json to_json() const;
  static Dendrogram from_json(const nlohmann::json& doc);

  bool operator==(const Dendrogram&) const = default;
};

// K disjoint, exhaustive, non-empty clusters. Members are sorted.
struct SprachbundAssignment {
  std::size_t k = 0;
  std::vector<std::vector<std::string>> clusters;

  std::vector<std::string> languages() const;

  nlohmann::json to_json() const;
  static SprachbundAssignment from_json(const nlohmann::json& doc);

  bool operator==(const SprachbundAssignment&) const = default;
};

// Average-linkage (UPGMA) agglomeration on d = 1 - similarity. The closest
// pair of active clusters merges first; exact ties go to the smallest
// (min node id, max node id).
Dendrogram agglomerate(const SimilarityMatrix& matrix);

// Replays the first M-k merges. Clusters are ordered by smallest member code.
SprachbundAssignment cut(const Dendrogram& dendrogram, std::size_t k);

// Seeded Fisher-Yates shuffle split into consecutive groups of `sizes`.
// Cluster i has sizes[i] members.
SprachbundAssignment random_baseline(const std::vector<std::string>& languages,
                                     const std::vector<std::size_t>& sizes, std::uint64_t seed);

// Mean silhouette under d = 1 - similarity; singleton clusters score 0 and
// a point with a = b = 0 scores 0.
double silhouette(const SimilarityMatrix& matrix, const SprachbundAssignment& assignment);

// Throws DataError unless the clusters are non-empty, disjoint and cover
// exactly `languages`.
void require_partition(const SprachbundAssignment& assignment, const std::vector<std::string>& languages);

}  // namespace sprachbund
