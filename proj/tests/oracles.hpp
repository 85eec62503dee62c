#pragma once

// Reference implementations used only by the tests. Each one takes the most
// direct route to its answer and shares no code with the library path it
// checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sprachbund/cluster.hpp"
#include "sprachbund/simmatrix.hpp"

namespace oracle {

// Plain double accumulation then one division.
inline std::vector<double> mean(const std::vector<std::vector<float>>& rows) {
  std::vector<double> sum(rows.front().size(), 0.0);
  for (const auto& r : rows) {
    for (std::size_t k = 0; k < r.size(); ++k) {
      sum[k] += r[k];
    }
  }
  for (auto& s : sum) {
    s /= static_cast<double>(rows.size());
  }
  return sum;
}

inline double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0, na = 0, nb = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  return dot / std::sqrt(na * nb);
}

// r = cov / (sd_x sd_y) from the textbook sums-of-squares definition.
inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double cov = 0, vx = 0, vy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    cov += (x[i] - mx) * (y[i] - my);
    vx += (x[i] - mx) * (x[i] - mx);
    vy += (y[i] - my) * (y[i] - my);
  }
  return cov / std::sqrt(vx) / std::sqrt(vy);
}

struct NaiveMerge {
  std::size_t left, right;
  double distance;
};

// Average linkage recomputed from scratch at every step: for each pair of
// live clusters, the mean of all member-to-member distances.
inline std::vector<NaiveMerge> naive_average_linkage(const sprachbund::SimilarityMatrix& m) {
  const std::size_t n = m.size();
  struct Live {
    std::size_t id;
    std::vector<std::size_t> leaves;
  };
  std::vector<Live> live;
  for (std::size_t i = 0; i < n; ++i) {
    live.push_back({i, {i}});
  }
  std::vector<NaiveMerge> merges;
  std::size_t next_id = n;
  while (live.size() > 1) {
    double best = std::numeric_limits<double>::infinity();
    std::pair<std::size_t, std::size_t> best_ids{SIZE_MAX, SIZE_MAX};
    std::size_t ba = 0, bb = 0;
    for (std::size_t a = 0; a < live.size(); ++a) {
      for (std::size_t b = a + 1; b < live.size(); ++b) {
        double total = 0;
        for (auto p : live[a].leaves) {
          for (auto q : live[b].leaves) {
            total += 1.0 - m(p, q);
          }
        }
        const double d = total / static_cast<double>(live[a].leaves.size() * live[b].leaves.size());
        const std::pair<std::size_t, std::size_t> ids{std::min(live[a].id, live[b].id),
                                                      std::max(live[a].id, live[b].id)};
        if (d < best || (d == best && ids < best_ids)) {
          best = d;
          best_ids = ids;
          ba = a;
          bb = b;
        }
      }
    }
    merges.push_back({best_ids.first, best_ids.second, best});
    Live merged{next_id++, live[ba].leaves};
    merged.leaves.insert(merged.leaves.end(), live[bb].leaves.begin(), live[bb].leaves.end());
    live.erase(live.begin() + static_cast<std::ptrdiff_t>(bb));
    live.erase(live.begin() + static_cast<std::ptrdiff_t>(ba));
    live.push_back(std::move(merged));
  }
  return merges;
}

// Flat clusters after applying the first n-k naive merges, as sets of codes.
inline std::set<std::set<std::string>> naive_cut(const sprachbund::SimilarityMatrix& m,
                                                 const std::vector<NaiveMerge>& merges, std::size_t k) {
  const std::size_t n = m.size();
  std::vector<std::set<std::string>> nodes;
  for (const auto& code : m.languages()) {
    nodes.push_back({code});
  }
  std::set<std::size_t> roots;
  for (std::size_t i = 0; i < n; ++i) {
    roots.insert(i);
  }
  for (std::size_t t = 0; t < n - k; ++t) {
    auto merged = nodes[merges[t].left];
    merged.insert(nodes[merges[t].right].begin(), nodes[merges[t].right].end());
    nodes.push_back(std::move(merged));
    roots.erase(merges[t].left);
    roots.erase(merges[t].right);
    roots.insert(n + t);
  }
  std::set<std::set<std::string>> out;
  for (auto r : roots) {
    out.insert(nodes[r]);
  }
  return out;
}

// Silhouette from a per-point label vector.
inline double silhouette(const sprachbund::SimilarityMatrix& m, const std::vector<int>& label) {
  const std::size_t n = m.size();
  double total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> sum(64, 0.0);
    std::vector<int> cnt(64, 0);
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      sum[label[j]] += 1.0 - m(i, j);
      cnt[label[j]] += 1;
    }
    if (cnt[label[i]] == 0) continue;
    const double a = sum[label[i]] / cnt[label[i]];
    double b = std::numeric_limits<double>::infinity();
    for (int c = 0; c < 64; ++c) {
      if (c != label[i] && cnt[c] > 0) b = std::min(b, sum[c] / cnt[c]);
    }
    const double s = std::max(a, b) > 0 ? (b - a) / std::max(a, b) : 0.0;
    total += s;
  }
  return total / static_cast<double>(n);
}

// Shannon entropy in bits.
inline double entropy_bits(const std::vector<double>& p) {
  double h = 0;
  for (double v : p) {
    if (v > 0) h -= v * std::log2(v);
  }
  return h;
}

// Unit vectors in `dim` dimensions with a few shared directions so random
// instances contain both near and far pairs.
inline std::vector<std::vector<double>> random_unit_vectors(std::mt19937_64& rng, std::size_t n, std::size_t dim) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<std::vector<double>> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> v(dim);
    double norm = 0;
    for (auto& x : v) {
      x = g(rng);
      norm += x * x;
    }
    for (auto& x : v) x /= std::sqrt(norm);
    out.push_back(std::move(v));
  }
  return out;
}

inline std::vector<std::string> codes(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::string c = "l";
    c += static_cast<char>('a' + (i / 26) % 26);
    c += static_cast<char>('a' + i % 26);
    out.push_back(c);
  }
  return out;
}

// Similarity matrix of pairwise cosines of the given vectors.
inline sprachbund::SimilarityMatrix matrix_of(const std::vector<std::vector<double>>& vecs,
                                              std::vector<std::string> names) {
  const std::size_t n = vecs.size();
  std::vector<double> values(n * n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double c = std::clamp(cosine(vecs[i], vecs[j]), -1.0, 1.0);
      values[i * n + j] = values[j * n + i] = c;
    }
  }
  return sprachbund::SimilarityMatrix(std::move(names), std::move(values));
}

// Random symmetric similarity matrix with entries drawn directly.
inline sprachbund::SimilarityMatrix random_matrix(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> values(n * n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      values[i * n + j] = values[j * n + i] = u(rng);
    }
  }
  return sprachbund::SimilarityMatrix(codes(n), std::move(values));
}

// argmax of row sums over the members, smallest code on ties.
inline std::string brute_pivot(const sprachbund::SimilarityMatrix& m, std::vector<std::string> members) {
  std::vector<std::pair<double, std::string>> scored;
  for (const auto& a : members) {
    double s = 0;
    for (const auto& b : members) s += m(m.index_of(a), m.index_of(b));
    scored.emplace_back(s, a);
  }
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& [s, c] : scored) best = std::max(best, s);
  std::string pick;
  for (const auto& [s, c] : scored) {
    if (s == best && (pick.empty() || c < pick)) pick = c;
  }
  return pick;
}

}  // namespace oracle
