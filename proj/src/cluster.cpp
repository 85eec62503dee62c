#include "sprachbund/cluster.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "sprachbund/corpus.hpp"
#include "sprachbund/error.hpp"
#include "sprachbund/io.hpp"

namespace sprachbund {

using nlohmann::json;

Dendrogram agglomerate(const SimilarityMatrix& matrix) {
  const std::size_t m = matrix.size();
  if (m < 2) {
    throw DataError("clustering needs at least 2 languages, got " + std::to_string(m));
  }
  // Slot s holds the active cluster currently stored at row s; distances
  // between slots follow the Lance-Williams update for average linkage.
  std::vector<double> dist(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      dist[i * m + j] = i == j ? 0.0 : 1.0 - matrix(i, j);
    }
  }
  std::vector<std::size_t> node(m);
  std::vector<std::size_t> count(m, 1);
  std::vector<bool> active(m, true);
  std::iota(node.begin(), node.end(), std::size_t{0});

  Dendrogram out{matrix.languages(), {}};
  out.merges.reserve(m - 1);
  for (std::size_t step = 0; step + 1 < m; ++step) {
    double best = std::numeric_limits<double>::infinity();
    std::size_t bi = 0, bj = 0;
    std::pair<std::size_t, std::size_t> best_ids{SIZE_MAX, SIZE_MAX};
    for (std::size_t i = 0; i < m; ++i) {
      if (!active[i]) {
        continue;
      }
      for (std::size_t j = i + 1; j < m; ++j) {
        if (!active[j]) {
          continue;
        }
        const double d = dist[i * m + j];
        const std::pair<std::size_t, std::size_t> ids{std::min(node[i], node[j]), std::max(node[i], node[j])};
        if (d < best || (d == best && ids < best_ids)) {
          best = d;
          bi = i;
          bj = j;
          best_ids = ids;
        }
      }
    }
    const std::size_t new_node = m + step;
    out.merges.push_back({best_ids.first, best_ids.second, std::max(0.0, best), new_node});

    // Merged cluster lives in slot bi; slot bj retires.
    const double ni = static_cast<double>(count[bi]);
    const double nj = static_cast<double>(count[bj]);
    for (std::size_t k = 0; k < m; ++k) {
      if (!active[k] || k == bi || k == bj) {
        continue;
      }
      const double d = (ni * dist[bi * m + k] + nj * dist[bj * m + k]) / (ni + nj);
      dist[bi * m + k] = d;
      dist[k * m + bi] = d;
    }
    active[bj] = false;
    count[bi] += count[bj];
    node[bi] = new_node;
  }
  return out;
}

SprachbundAssignment cut(const Dendrogram& dendrogram, std::size_t k) {
  const std::size_t m = dendrogram.leaf_count();
  if (k < 1 || k > m) {
    throw DataError("cluster count k=" + std::to_string(k) + " is outside [1, " + std::to_string(m) + "]");
  }
  if (dendrogram.merges.size() + 1 != m) {
    throw DataError("dendrogram has " + std::to_string(dendrogram.merges.size()) + " merges for " +
                    std::to_string(m) + " leaves");
  }
  // Union-find over node ids; merges are replayed in order.
  std::vector<std::size_t> parent(2 * m - 1);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (std::size_t t = 0; t < m - k; ++t) {
    const auto& mg = dendrogram.merges[t];
    parent[find(mg.left)] = mg.node;
    parent[find(mg.right)] = mg.node;
  }
  std::map<std::size_t, std::vector<std::string>> groups;
  for (std::size_t leaf = 0; leaf < m; ++leaf) {
    groups[find(leaf)].push_back(dendrogram.languages[leaf]);
  }
  SprachbundAssignment out{k, {}};
  for (auto& [root, members] : groups) {
    std::sort(members.begin(), members.end());
    out.clusters.push_back(std::move(members));
  }
  std::sort(out.clusters.begin(), out.clusters.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  return out;
}

SprachbundAssignment random_baseline(const std::vector<std::string>& languages,
                                     const std::vector<std::size_t>& sizes, std::uint64_t seed) {
  const std::size_t total = std::accumulate(sizes.begin(), sizes.end(), std::size_t{0});
  if (total != languages.size()) {
    throw DataError("random baseline: cluster sizes sum to " + std::to_string(total) + " but there are " +
                    std::to_string(languages.size()) + " languages");
  }
  if (std::find(sizes.begin(), sizes.end(), std::size_t{0}) != sizes.end()) {
    throw DataError("random baseline: cluster sizes must be positive");
  }
  std::vector<std::string> shuffled = languages;
  std::mt19937_64 engine(sampling_stream_seed(seed, "baseline"));
  for (std::size_t i = shuffled.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniform_below(engine, i));
    std::swap(shuffled[i - 1], shuffled[j]);
  }
  SprachbundAssignment out{sizes.size(), {}};
  std::size_t pos = 0;
  for (std::size_t s : sizes) {
    std::vector<std::string> members(shuffled.begin() + static_cast<std::ptrdiff_t>(pos),
                                     shuffled.begin() + static_cast<std::ptrdiff_t>(pos + s));
    std::sort(members.begin(), members.end());
    out.clusters.push_back(std::move(members));
    pos += s;
  }
  require_partition(out, languages);
  return out;
}

double silhouette(const SimilarityMatrix& matrix, const SprachbundAssignment& assignment) {
  if (assignment.clusters.size() < 2) {
    throw DataError("silhouette needs at least 2 clusters");
  }
  require_partition(assignment, matrix.languages());
  std::vector<std::vector<std::size_t>> idx;
  for (const auto& c : assignment.clusters) {
    auto& v = idx.emplace_back();
    for (const auto& code : c) {
      v.push_back(matrix.index_of(code));
    }
  }
  double total = 0.0;
  std::size_t points = 0;
  for (std::size_t ci = 0; ci < idx.size(); ++ci) {
    for (std::size_t p : idx[ci]) {
      ++points;
      if (idx[ci].size() == 1) {
        continue;
      }
      double a = 0.0;
      for (std::size_t q : idx[ci]) {
        if (q != p) {
          a += 1.0 - matrix(p, q);
        }
      }
      a /= static_cast<double>(idx[ci].size() - 1);
      double b = std::numeric_limits<double>::infinity();
      for (std::size_t cj = 0; cj < idx.size(); ++cj) {
        if (cj == ci) {
          continue;
        }
        double d = 0.0;
        for (std::size_t q : idx[cj]) {
          d += 1.0 - matrix(p, q);
        }
        b = std::min(b, d / static_cast<double>(idx[cj].size()));
      }
      const double denom = std::max(a, b);
      if (denom > 0.0) {
        total += (b - a) / denom;
      }
    }
  }
  return total / static_cast<double>(points);
}

std::vector<std::string> SprachbundAssignment::languages() const {
  std::vector<std::string> out;
  for (const auto& c : clusters) {
    out.insert(out.end(), c.begin(), c.end());
  }
  std::sort(out.begin(), out.end());
  return out;
}

void require_partition(const SprachbundAssignment& assignment, const std::vector<std::string>& languages) {
  if (assignment.k != assignment.clusters.size()) {
    throw DataError("assignment declares k=" + std::to_string(assignment.k) + " but has " +
                    std::to_string(assignment.clusters.size()) + " clusters");
  }
  std::set<std::string> expected(languages.begin(), languages.end());
  std::set<std::string> seen;
  for (const auto& c : assignment.clusters) {
    if (c.empty()) {
      throw DataError("assignment contains an empty cluster");
    }
    for (const auto& code : c) {
      if (!seen.insert(code).second) {
        throw DataError("language \"" + code + "\" appears in more than one cluster");
      }
      if (!expected.contains(code)) {
        throw DataError("language \"" + code + "\" is outside the clustered language set");
      }
    }
  }
  for (const auto& code : expected) {
    if (!seen.contains(code)) {
      throw DataError("language \"" + code + "\" is not assigned to any cluster");
    }
  }
}

json Dendrogram::to_json() const {
  json merge_list = json::array();
  for (const auto& mg : merges) {
    merge_list.push_back({{"left", mg.left}, {"right", mg.right}, {"distance", mg.distance}, {"node", mg.node}});
  }
  return {{"v", kSchemaVersion},
          {"linkage", "average"},
          {"distance", "1-cosine"},
          {"languages", languages},
          {"merges", std::move(merge_list)}};
}

Dendrogram Dendrogram::from_json(const json& doc) {
  require_schema_version(doc, "dendrogram");
  Dendrogram d;
  try {
    d.languages = doc.at("languages").get<std::vector<std::string>>();
    for (const auto& mg : doc.at("merges")) {
      d.merges.push_back({mg.at("left").get<std::size_t>(), mg.at("right").get<std::size_t>(),
                          mg.at("distance").get<double>(), mg.at("node").get<std::size_t>()});
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("dendrogram: ") + e.what());
  }
  const std::size_t m = d.languages.size();
  if (m < 2 || d.merges.size() + 1 != m) {
    throw DataError("dendrogram: expected " + std::to_string(m ? m - 1 : 0) + " merges");
  }
  for (std::size_t t = 0; t < d.merges.size(); ++t) {
    const auto& mg = d.merges[t];
    if (mg.node != m + t || mg.left >= mg.right || mg.right >= mg.node || mg.distance < 0.0) {
      throw DataError("dendrogram: malformed merge " + std::to_string(t));
    }
  }
  return d;
}

json SprachbundAssignment::to_json() const {
  json list = json::array();
  for (const auto& c : clusters) {
    list.push_back({{"pivot", nullptr}, {"members", c}});
  }
  return {{"v", kSchemaVersion}, {"k", k}, {"clusters", std::move(list)}};
}

SprachbundAssignment SprachbundAssignment::from_json(const json& doc) {
  require_schema_version(doc, "assignment");
  SprachbundAssignment a;
  try {
    a.k = doc.at("k").get<std::size_t>();
    for (const auto& c : doc.at("clusters")) {
      auto members = c.at("members").get<std::vector<std::string>>();
      std::sort(members.begin(), members.end());
      a.clusters.push_back(std::move(members));
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("assignment: ") + e.what());
  }
  require_partition(a, a.languages());
  return a;
}

}  // namespace sprachbund
