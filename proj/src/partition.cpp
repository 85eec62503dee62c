#include "sprachbund/partition.hpp"

#include <algorithm>
#include <map>

#include "sprachbund/error.hpp"
#include "sprachbund/io.hpp"

namespace sprachbund {

using nlohmann::json;

std::string select_pivot(const std::vector<std::string>& cluster, const SimilarityMatrix& matrix) {
  if (cluster.empty()) {
    throw DataError("cannot select a pivot for an empty cluster");
  }
  std::vector<std::size_t> idx;
  idx.reserve(cluster.size());
  for (const auto& code : cluster) {
    if (!matrix.contains(code)) {
      throw DataError("cluster member \"" + code + "\" is missing from the similarity matrix");
    }
    idx.push_back(matrix.index_of(code));
  }
  // Sum in sorted-member order so the result does not depend on input order.
  std::vector<std::size_t> order(cluster.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    order[i] = i;
  }
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return cluster[a] < cluster[b]; });

  const std::string* best = nullptr;
  double best_sum = 0.0;
  for (std::size_t a : order) {
    double sum = 0.0;
    for (std::size_t b : order) {
      sum += matrix(idx[a], idx[b]);
    }
    if (best == nullptr || sum > best_sum || (sum == best_sum && cluster[a] < *best)) {
      best = &cluster[a];
      best_sum = sum;
    }
  }
  return *best;
}

PartitionManifest build_manifest(const SprachbundAssignment& assignment, const SimilarityMatrix& matrix,
                                 const CorpusIndex& shards, const ManifestOptions& options) {
  const auto languages = assignment.languages();
  require_partition(assignment, languages);

  std::vector<std::string> missing;
  for (const auto& code : languages) {
    auto it = shards.find(code);
    if ((it == shards.end() || it->second.empty()) && !options.allow_missing.contains(code)) {
      missing.push_back(code);
    }
  }
  if (!missing.empty()) {
    std::string list;
    for (const auto& c : missing) {
      list += (list.empty() ? "" : ", ") + c;
    }
    throw DataError("no corpus shards for assigned language(s): " + list);
  }
  std::vector<std::string> outside;
  for (const auto& [code, paths] : shards) {
    if (!std::binary_search(languages.begin(), languages.end(), code)) {
      outside.push_back(code);
    }
  }
  if (!outside.empty()) {
    std::string list;
    for (const auto& c : outside) {
      list += (list.empty() ? "" : ", ") + c;
    }
    throw DataError("corpus shards for language(s) outside the assignment: " + list);
  }

  PartitionManifest manifest;
  manifest.k = assignment.k;
  manifest.corpus_root = options.corpus_root;
  manifest.provenance = options.provenance;
  for (const auto& members : assignment.clusters) {
    ManifestCluster entry{members, select_pivot(members, matrix), {}};
    for (const auto& code : members) {
      if (auto it = shards.find(code); it != shards.end()) {
        entry.shards.insert(entry.shards.end(), it->second.begin(), it->second.end());
      }
    }
    manifest.clusters.push_back(std::move(entry));
  }
  require_sound_manifest(manifest, languages);
  return manifest;
}

std::vector<PartitionManifest> sweep(const SimilarityMatrix& matrix, const std::vector<std::size_t>& ks,
                                     const CorpusIndex& shards, const ManifestOptions& options) {
  if (ks.empty()) {
    throw UsageError("sweep needs at least one cluster count");
  }
  for (std::size_t k : ks) {
    if (k < 1 || k > matrix.size()) {
      throw DataError("cluster count k=" + std::to_string(k) + " is outside [1, " +
                      std::to_string(matrix.size()) + "]");
    }
  }
  const Dendrogram tree = agglomerate(matrix);
  std::vector<PartitionManifest> out;
  out.reserve(ks.size());
  for (std::size_t k : ks) {
    out.push_back(build_manifest(cut(tree, k), matrix, shards, options));
  }
  return out;
}

namespace {

// Shard file names start with "<code>." by convention.
std::string shard_language(const std::string& path) {
  const auto slash = path.find_last_of('/');
  const std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
  return name.substr(0, name.find('.'));
}

}  // namespace

void require_sound_manifest(const PartitionManifest& manifest, const std::vector<std::string>& languages) {
  SprachbundAssignment assignment{manifest.k, {}};
  for (const auto& c : manifest.clusters) {
    assignment.clusters.push_back(c.members);
  }
  require_partition(assignment, languages);
  std::map<std::string, std::size_t> owner;
  for (std::size_t i = 0; i < manifest.clusters.size(); ++i) {
    for (const auto& code : manifest.clusters[i].members) {
      owner[code] = i;
    }
  }
  for (std::size_t i = 0; i < manifest.clusters.size(); ++i) {
    const auto& c = manifest.clusters[i];
    if (std::find(c.members.begin(), c.members.end(), c.pivot) == c.members.end()) {
      throw DataError("pivot \"" + c.pivot + "\" is not a member of its cluster");
    }
    for (const auto& path : c.shards) {
      auto it = owner.find(shard_language(path));
      if (it == owner.end() || it->second != i) {
        throw DataError("shard " + path + " does not belong to a member of its cluster");
      }
    }
  }
}

json PartitionManifest::to_json() const {
  json list = json::array();
  for (const auto& c : clusters) {
    list.push_back({{"members", c.members}, {"pivot", c.pivot}, {"shards", c.shards}});
  }
  json doc{{"v", kSchemaVersion},
           {"k", k},
           {"corpus_root", corpus_root},
           {"clusters", std::move(list)},
           {"provenance",
            {{"seed", provenance.seed},
             {"embedding_source", provenance.embedding_source},
             {"embedding_digest", provenance.embedding_digest},
             {"linkage", provenance.linkage},
             {"distance", provenance.distance},
             {"tool_version", provenance.tool_version},
             {"config_digest", provenance.config_digest}}}};
  if (fallback) {
    doc["fallback"] = *fallback;
  }
  return doc;
}

PartitionManifest PartitionManifest::from_json(const json& doc) {
  require_schema_version(doc, "manifest");
  PartitionManifest m;
  try {
    m.k = doc.at("k").get<std::size_t>();
    m.corpus_root = doc.at("corpus_root").get<std::string>();
    for (const auto& c : doc.at("clusters")) {
      m.clusters.push_back({c.at("members").get<std::vector<std::string>>(), c.at("pivot").get<std::string>(),
                            c.at("shards").get<std::vector<std::string>>()});
    }
    const auto& p = doc.at("provenance");
    m.provenance.seed = p.at("seed").get<std::uint64_t>();
    m.provenance.embedding_source = p.at("embedding_source").get<std::string>();
    m.provenance.embedding_digest = p.at("embedding_digest").get<std::string>();
    m.provenance.linkage = p.at("linkage").get<std::string>();
    m.provenance.distance = p.at("distance").get<std::string>();
    m.provenance.tool_version = p.at("tool_version").get<std::string>();
    m.provenance.config_digest = p.at("config_digest").get<std::string>();
    if (auto fb = doc.find("fallback"); fb != doc.end()) {
      m.fallback = *fb;
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("manifest: ") + e.what());
  }
  std::vector<std::string> languages;
  for (const auto& c : m.clusters) {
    languages.insert(languages.end(), c.members.begin(), c.members.end());
  }
  require_sound_manifest(m, languages);
  return m;
}

}  // namespace sprachbund
