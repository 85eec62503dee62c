#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "sprachbund/cluster.hpp"
#include "sprachbund/corpus.hpp"
#include "sprachbund/simmatrix.hpp"

namespace sprachbund {

// Member maximizing the summed cosine similarity to every member (itself
// included). Ties go to the lexicographically smallest code.
std::string select_pivot(const std::vector<std::string>& cluster, const SimilarityMatrix& matrix);

struct ManifestCluster {
  std::vector<std::string> members;
  std::string pivot;
  std::vector<std::string> shards;  // relative to the corpus root

  bool operator==(const ManifestCluster&) const = default;
};

struct Provenance {
  std::uint64_t seed = 0;
  std::string embedding_source;
  std::string embedding_digest;
  std::string linkage = "average";
  std::string distance = "1-cosine";
  std::string tool_version;
  std::string config_digest;

  bool operator==(const Provenance&) const = default;
};

struct PartitionManifest {
  std::size_t k = 0;
  std::string corpus_root;
  std::vector<ManifestCluster> clusters;
  Provenance provenance;
  // Reserved for routing unseen languages; carried through untouched.
  std::optional<nlohmann::json> fallback;

  nlohmann::json to_json() const;
  static PartitionManifest from_json(const nlohmann::json& doc);

  bool operator==(const PartitionManifest&) const = default;
};

struct ManifestOptions {
  std::string corpus_root;
  // Languages allowed to have no shards.
  std::set<std::string> allow_missing;
  Provenance provenance;
};

// Throws DataError listing every assigned language without shards (unless
// allow-listed) and every indexed language outside the assignment.
PartitionManifest build_manifest(const SprachbundAssignment& assignment, const SimilarityMatrix& matrix,
                                 const CorpusIndex& shards, const ManifestOptions& options);

// One manifest per k, all cut from the same dendrogram.
std::vector<PartitionManifest> sweep(const SimilarityMatrix& matrix, const std::vector<std::size_t>& ks,
                                     const CorpusIndex& shards, const ManifestOptions& options);

// Checks the manifest invariants against `languages`; throws DataError.
void require_sound_manifest(const PartitionManifest& manifest, const std::vector<std::string>& languages);

}  // namespace sprachbund
