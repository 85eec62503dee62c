// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "sprachbund/cli.hpp"
#include "sprachbund/cluster.hpp"
#include "sprachbund/corpus.hpp"
#include "sprachbund/embedding.hpp"
#include "sprachbund/fixtures.hpp"
#include "sprachbund/io.hpp"
#include "sprachbund/partition.hpp"
#include "sprachbund/projection.hpp"

using namespace sprachbund;
namespace fs = std::filesystem;

namespace {

// Tolerances and budgets.
constexpr double kPearsonTarget = 0.83;
constexpr double kPearsonTol = 0.03;
constexpr std::size_t kPearsonPairs = 15;
constexpr double kPearsonSeconds = 1.0;

constexpr int kClusterInstances = 100;
constexpr std::size_t kClusterMaxM = 12;
constexpr double kMergeDistanceTol = 1e-12;
constexpr double kClusterSeconds = 10.0;

constexpr int kPartitionSeeds = 10;
const std::vector<std::size_t> kSweep{1, 2, 4, 8};

constexpr int kPivotInstances = 1000;
constexpr std::size_t kPivotMaxM = 10;
constexpr double kPivotSeconds = 5.0;

constexpr int kCentroidSets = 1000;
constexpr std::size_t kCentroidMaxVectors = 10000;
constexpr std::size_t kCentroidDim = 768;
constexpr double kCentroidTol = 1e-6;

constexpr std::size_t kTsnePoints = 50;
constexpr double kEntropyTol = 1e-4;
constexpr double kJointSumTol = 1e-9;
const std::vector<double> kPerplexities{5.0, 10.0, 15.0, 30.0};

const std::vector<std::size_t> kBaselineSizes{36, 22, 30, 20};
constexpr int kBaselineSeeds = 100;

// Per-sentence frequency over 10^4 seeds has sd sqrt(p(1-p)/10^4). At
// n=200, cap=10 the band is 4.6 sd and an exactly uniform sampler keeps every
// sentence inside it with probability 0.999; at n=1000, cap=100 it is 3.3 sd
// and that probability drops to 0.44, so that shape is reported alongside a
// chi-square uniformity statistic instead of being held to the band.
constexpr int kSamplingSeeds = 10000;
constexpr std::size_t kSamplingN = 200;
constexpr std::size_t kSamplingCap = 10;
constexpr std::size_t kSamplingWideN = 1000;
constexpr std::size_t kSamplingWideCap = 100;
constexpr double kSamplingTol = 0.01;
constexpr double kChiSquareMaxZ = 4.0;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void report(const std::string& name, const std::function<Outcome()>& check) {
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  std::printf("%s  %-28s %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
  std::fflush(stdout);
  if (!o.pass) ++failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome lexical_correlation_check() {
  const fs::path data = SPRACHBUND_DATA_DIR;
  const auto ws = fs::temp_directory_path() / "sprachbund_acceptance_analyze";
  fs::remove_all(ws);
  std::ostringstream out, err;
  const auto t0 = Clock::now();
  const int code = cli::run({"analyze", "--similarity", (data / "appendix/embedding_similarity.json").string(),
                             "--lexical", (data / "appendix/lexical_similarity.json").string(), "--out", ws.string()},
                            out, err);
  const double secs = seconds_since(t0);
  if (code != 0) return {false, "analyze exited " + std::to_string(code) + ": " + err.str()};
  const auto report = read_json_file(ws / "analysis.json");
  const double r = report.at("pearson_lexical").at("r").get<double>();
  const auto pairs = report.at("pearson_lexical").at("pairs").get<std::size_t>();
  const bool ok = std::abs(r - kPearsonTarget) <= kPearsonTol && pairs == kPearsonPairs && secs < kPearsonSeconds;
  return {ok, fmt("r=%.4f (target %.2f +/- %.2f) pairs=%zu time=%.3fs", r, kPearsonTarget, kPearsonTol, pairs, secs)};
}

Outcome clustering_oracle_check() {
  std::mt19937_64 rng(1001);
  std::size_t merge_mismatches = 0, cut_mismatches = 0, cuts = 0;
  double worst = 0;
  const auto t0 = Clock::now();
  for (int t = 0; t < kClusterInstances; ++t) {
    const std::size_t m = 2 + rng() % (kClusterMaxM - 1);
    // Alternate between cosine matrices of random vectors and raw random matrices.
    const auto matrix = t % 2 == 0
                            ? oracle::matrix_of(oracle::random_unit_vectors(rng, m, 1 + rng() % 8), oracle::codes(m))
                            : oracle::random_matrix(rng, m);
    const auto d = agglomerate(matrix);
    const auto naive = oracle::naive_average_linkage(matrix);
    for (std::size_t s = 0; s < naive.size(); ++s) {
      const auto& mg = d.merges[s];
      worst = std::max(worst, std::abs(mg.distance - naive[s].distance));
      if (mg.left != naive[s].left || mg.right != naive[s].right || mg.node != m + s ||
          std::abs(mg.distance - naive[s].distance) > kMergeDistanceTol) {
        ++merge_mismatches;
      }
    }
    for (std::size_t k = 1; k <= m; ++k) {
      ++cuts;
      std::set<std::set<std::string>> got;
      for (const auto& c : cut(d, k).clusters) got.insert({c.begin(), c.end()});
      if (got != oracle::naive_cut(matrix, naive, k)) ++cut_mismatches;
    }
  }
  const double secs = seconds_since(t0);
  const bool ok = merge_mismatches == 0 && cut_mismatches == 0 && secs < kClusterSeconds;
  return {ok, fmt("%d instances, M<=%zu: merge mismatches=%zu, cut mismatches=%zu/%zu, max |dd|=%.1e, time=%.2fs",
                  kClusterInstances, kClusterMaxM, merge_mismatches, cut_mismatches, cuts, worst, secs)};
}

Outcome partition_soundness_check() {
  const auto codes = fixtures::languages().codes();
  CorpusIndex index;
  for (const auto& c : codes) index[c] = {c + ".txt"};
  std::size_t violations = 0, manifests = 0;
  std::mt19937_64 rng(2002);
  for (int seed = 0; seed < kPartitionSeeds; ++seed) {
    std::vector<LanguageRepresentation> reps;
    for (const auto& v : oracle::random_unit_vectors(rng, codes.size(), 32)) {
      reps.push_back({codes[reps.size()], std::vector<float>(v.begin(), v.end()), 1});
    }
    const auto matrix = build_matrix(reps);
    const auto list = sweep(matrix, kSweep, index, {"corpus", {}, {}});
    std::vector<std::vector<std::set<std::string>>> per_k;
    for (const auto& m : list) {
      ++manifests;
      std::set<std::string> seen;
      std::set<std::string> shards;
      std::vector<std::set<std::string>> clusters;
      for (const auto& c : m.clusters) {
        if (c.members.empty()) ++violations;
        for (const auto& code : c.members) {
          if (!seen.insert(code).second) ++violations;  // overlap
        }
        if (std::find(c.members.begin(), c.members.end(), c.pivot) == c.members.end()) ++violations;
        if (c.pivot != oracle::brute_pivot(matrix, c.members)) ++violations;
        for (const auto& s : c.shards) {
          if (!shards.insert(s).second) ++violations;
          const auto lang = s.substr(0, s.find('.'));
          if (std::find(c.members.begin(), c.members.end(), lang) == c.members.end()) ++violations;
        }
        clusters.emplace_back(c.members.begin(), c.members.end());
      }
      if (seen != std::set<std::string>(codes.begin(), codes.end())) ++violations;  // exhaustive
      if (shards.size() != codes.size()) ++violations;
      if (m.clusters.size() != m.k) ++violations;
      per_k.push_back(std::move(clusters));
    }
    // Each finer partition refines the coarser one.
    for (std::size_t i = 1; i < per_k.size(); ++i) {
      for (const auto& fine : per_k[i]) {
        int parents = 0;
        for (const auto& coarse : per_k[i - 1]) {
          if (std::includes(coarse.begin(), coarse.end(), fine.begin(), fine.end())) ++parents;
        }
        if (parents != 1) ++violations;
      }
    }
  }
  return {violations == 0, fmt("%zu manifests over %zu languages, K in {1,2,4,8}: %zu violations", manifests,
                               codes.size(), violations)};
}

Outcome pivot_check() {
  std::mt19937_64 rng(3003);
  std::size_t mismatches = 0, tied = 0;
  const auto t0 = Clock::now();
  for (int t = 0; t < kPivotInstances; ++t) {
    const std::size_t m = 1 + rng() % kPivotMaxM;
    // Entries on a 1/8 grid so exact row-sum ties occur; every fourth instance
    // is continuous.
    std::vector<double> v(m * m, 1.0);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        v[i * m + j] = v[j * m + i] = t % 4 == 3 ? u(rng) : static_cast<double>(static_cast<int>(rng() % 17) - 8) / 8.0;
      }
    }
    const SimilarityMatrix matrix(oracle::codes(m), v);
    auto members = matrix.languages();
    std::shuffle(members.begin(), members.end(), rng);
    if (t % 2 == 1) members.resize(1 + rng() % m);
    const auto expected = oracle::brute_pivot(matrix, members);
    if (select_pivot(members, matrix) != expected) ++mismatches;

    std::vector<double> sums;
    for (const auto& a : members) {
      double s = 0;
      for (const auto& b : members) s += matrix(matrix.index_of(a), matrix.index_of(b));
      sums.push_back(s);
    }
    const double best = *std::max_element(sums.begin(), sums.end());
    if (std::count(sums.begin(), sums.end(), best) > 1) ++tied;
  }
  const double secs = seconds_since(t0);
  return {mismatches == 0 && secs < kPivotSeconds,
          fmt("%d matrices, M<=%zu: mismatches=%zu, instances with tied maxima=%zu, time=%.2fs", kPivotInstances,
              kPivotMaxM, mismatches, tied, secs)};
}

Outcome centroid_check() {
  std::mt19937_64 rng(4004);
  std::uniform_real_distribution<float> u(-1.0f, 1.0f);
  // Set sizes are log-uniform on [1, 10^4]; the first set has the maximum size.
  std::uniform_real_distribution<double> log_size(0.0, std::log(static_cast<double>(kCentroidMaxVectors)));
  const float a = 2.5f, b = -0.75f;
  double worst = 0, worst_linear = 0;
  std::size_t total_vectors = 0;
  const auto t0 = Clock::now();
  std::vector<float> row(kCentroidDim), scaled_row(kCentroidDim);
  for (int s = 0; s < kCentroidSets; ++s) {
    const std::size_t n = s == 0 ? kCentroidMaxVectors
                                 : std::min(kCentroidMaxVectors, static_cast<std::size_t>(std::exp(log_size(rng))));
    total_vectors += n;
    SentenceEmbeddingSet set("aa", kCentroidDim), scaled("aa", kCentroidDim);
    set.reserve(n);
    scaled.reserve(n);
    std::vector<double> sum(kCentroidDim, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < kCentroidDim; ++k) {
        row[k] = u(rng);
        scaled_row[k] = a * row[k] + b;
        sum[k] += row[k];
      }
      set.add(static_cast<std::int64_t>(i), row);
      scaled.add(static_cast<std::int64_t>(i), scaled_row);
    }
    const auto c = centroid(set).vector;
    const auto cs = centroid(scaled).vector;
    for (std::size_t k = 0; k < kCentroidDim; ++k) {
      const double expected = sum[k] / static_cast<double>(n);
      worst = std::max(worst, std::abs(c[k] - expected));
      worst_linear = std::max(worst_linear, std::abs(cs[k] - (a * static_cast<double>(c[k]) + b)));
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= kCentroidTol && worst_linear <= kCentroidTol,
          fmt("%d sets (%zu vectors, dim %zu): max |err|=%.2e, linearity max |err|=%.2e, time=%.1fs", kCentroidSets,
              total_vectors, kCentroidDim, worst, worst_linear, secs)};
}

Outcome tsne_check() {
  std::mt19937_64 rng(5005);
  std::normal_distribution<double> g;
  std::vector<std::vector<double>> pts(kTsnePoints, std::vector<double>(10));
  for (auto& p : pts) {
    for (auto& x : p) x = g(rng);
  }
  const std::size_t m = kTsnePoints;
  std::vector<double> d(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      double s = 0;
      for (std::size_t k = 0; k < 10; ++k) s += (pts[i][k] - pts[j][k]) * (pts[i][k] - pts[j][k]);
      d[i * m + j] = std::sqrt(s);
    }
  }
  double worst_entropy = 0;
  for (double perp : kPerplexities) {
    for (std::size_t i = 0; i < m; ++i) {
      const auto row = conditional_affinities(std::span<const double>(d).subspan(i * m, m), i, perp);
      worst_entropy = std::max(worst_entropy, std::abs(oracle::entropy_bits(row.probabilities) - std::log2(perp)));
    }
  }
  TsneParams params;
  params.perplexity = 15.0;
  params.seed = 17;
  const auto p = joint_affinities(d, m, params.perplexity);
  double total = 0, asym = 0, min_entry = 0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      total += p[i * m + j];
      asym = std::max(asym, std::abs(p[i * m + j] - p[j * m + i]));
      min_entry = std::min(min_entry, p[i * m + j]);
    }
  }
  const auto first = tsne_distances(d, m, params);
  const auto second = tsne_distances(d, m, params);
  const bool identical = first.points == second.points && first.kl_history == second.kl_history;
  const bool ok = worst_entropy <= kEntropyTol && asym == 0.0 && min_entry >= 0.0 &&
                  std::abs(total - 1.0) <= kJointSumTol && identical;
  return {ok, fmt("max |H - log2 perp|=%.1e bits, max |P-P^T|=%.1e, min P=%.1e, |sum P - 1|=%.1e, "
                  "bitwise repeat=%s",
                  worst_entropy, asym, min_entry, std::abs(total - 1.0), identical ? "yes" : "no")};
}

Outcome baseline_check() {
  const auto codes = fixtures::languages().codes();
  std::size_t bad = 0;
  for (int seed = 0; seed < kBaselineSeeds; ++seed) {
    const auto a = random_baseline(codes, kBaselineSizes, static_cast<std::uint64_t>(seed));
    if (a.clusters.size() != kBaselineSizes.size()) {
      ++bad;
      continue;
    }
    for (std::size_t i = 0; i < kBaselineSizes.size(); ++i) {
      if (a.clusters[i].size() != kBaselineSizes[i]) ++bad;
    }
    try {
      require_partition(a, codes);
    } catch (const std::exception&) {
      ++bad;
    }
    if (!(random_baseline(codes, kBaselineSizes, static_cast<std::uint64_t>(seed)) == a)) ++bad;
  }
  return {bad == 0 && codes.size() == 108,
          fmt("%zu codes, sizes 36/22/30/20, %d seeds: %zu violations", codes.size(), kBaselineSeeds, bad)};
}

struct InclusionStats {
  double worst = 0;        // max |freq - cap/n|
  std::size_t outside = 0;  // sentences beyond the band
  double chi_z = 0;        // Wilson-Hilferty z of the chi-square statistic
};

InclusionStats inclusion(std::size_t n, std::size_t cap, bool& sizes_ok) {
  CorpusShard shard{"en", {}, "acceptance"};
  for (std::size_t i = 0; i < n; ++i) {
    shard.sentences.push_back({static_cast<std::int64_t>(i), "s" + std::to_string(i)});
  }
  std::vector<int> hits(n, 0);
  for (int s = 0; s < kSamplingSeeds; ++s) {
    const auto out = sample(shard, {cap, static_cast<std::uint64_t>(s)});
    if (out.size() != cap) sizes_ok = false;
    for (const auto& sent : out.sentences) ++hits[static_cast<std::size_t>(sent.id)];
  }
  const double p = static_cast<double>(cap) / static_cast<double>(n);
  const double expected = p * kSamplingSeeds;
  InclusionStats st;
  double chi = 0;
  for (int h : hits) {
    const double dev = std::abs(h / static_cast<double>(kSamplingSeeds) - p);
    st.worst = std::max(st.worst, dev);
    if (dev > kSamplingTol) ++st.outside;
    chi += (h - expected) * (h - expected) / (expected * (1.0 - p));
  }
  const double k = static_cast<double>(n - 1);
  st.chi_z = (std::cbrt(chi / k) - (1.0 - 2.0 / (9.0 * k))) / std::sqrt(2.0 / (9.0 * k));
  return st;
}

Outcome sampling_check() {
  bool sizes_ok = true;
  const auto main = inclusion(kSamplingN, kSamplingCap, sizes_ok);
  const auto wide = inclusion(kSamplingWideN, kSamplingWideCap, sizes_ok);
  bool passthrough = true;
  for (std::size_t n : {0u, 1u, 5u, 10u}) {
    CorpusShard small{"de", {}, "acceptance"};
    for (std::size_t i = 0; i < n; ++i) small.sentences.push_back({static_cast<std::int64_t>(i), "t"});
    passthrough = passthrough && sample(small, {kSamplingCap, 3}) == small;
  }
  const bool ok = sizes_ok && passthrough && main.outside == 0 && std::abs(main.chi_z) < kChiSquareMaxZ &&
                  std::abs(wide.chi_z) < kChiSquareMaxZ;
  return {ok, fmt("%d seeds; n=%zu cap=%zu: max |freq-p|=%.4f, outside +/-%.2f: %zu, chi2 z=%.2f; "
                  "n=%zu cap=%zu: max |freq-p|=%.4f, outside: %zu, chi2 z=%.2f; under-cap pass-through=%s",
                  kSamplingSeeds, kSamplingN, kSamplingCap, main.worst, kSamplingTol, main.outside, main.chi_z,
                  kSamplingWideN, kSamplingWideCap, wide.worst, wide.outside, wide.chi_z,
                  passthrough ? "yes" : "no")};
}

}  // namespace

int main() {
  report("lexical-correlation", lexical_correlation_check);
  report("clustering-oracle", clustering_oracle_check);
  report("partition-soundness", partition_soundness_check);
  report("pivot-correctness", pivot_check);
  report("centroid-numerics", centroid_check);
  report("tsne-calibration", tsne_check);
  report("random-baseline", baseline_check);
  report("sampling", sampling_check);
  std::printf("%d of 8 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
