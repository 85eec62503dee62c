#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "sprachbund/registry.hpp"

namespace sprachbund {

struct Sentence {
  std::int64_t id = 0;
  std::string text;

  bool operator==(const Sentence&) const = default;
};

struct CorpusShard {
  std::string language;
  std::vector<Sentence> sentences;
  std::string source_tag;

  std::size_t size() const { return sentences.size(); }
  bool operator==(const CorpusShard&) const = default;
};

inline constexpr std::size_t kDefaultSampleCap = 10000;

struct SamplingPolicy {
  std::size_t cap = kDefaultSampleCap;
  std::uint64_t seed = 0;
};

// Byte offset of the first invalid UTF-8 sequence, or nullopt when valid.
std::optional<std::size_t> find_invalid_utf8(std::string_view bytes);

// Splits text into one sentence per non-blank line; ids count from 0.
CorpusShard parse_shard(std::string_view text, std::string language, std::string source_tag);

// One sentence per line, blank lines skipped. Throws DataError for an
// unregistered language or invalid UTF-8 (with byte offset).
CorpusShard ingest_shard(const std::filesystem::path& path, std::string_view language,
                         const Registry& registry);

void write_shard(const CorpusShard& shard, const std::filesystem::path& path);

// Generator used for reservoir sampling: mt19937_64 seeded through
// SplitMix64 from (seed, FNV-1a of the language code).
std::uint64_t sampling_stream_seed(std::uint64_t seed, std::string_view language);

// Uniform integer in [0, bound) by rejection; identical on every platform.
template <class Engine>
std::uint64_t uniform_below(Engine& engine, std::uint64_t bound) {
  const std::uint64_t limit = bound * (UINT64_MAX / bound);
  std::uint64_t x;
  do {
    x = engine();
  } while (x >= limit);
  return x % bound;
}

// Algorithm R. Shards at or under the cap pass through unchanged; larger ones
// keep exactly `cap` sentences in their original order.
CorpusShard sample(const CorpusShard& shard, const SamplingPolicy& policy);

struct CorpusStatsRow {
  std::string language;
  std::size_t sentences = 0;
  std::size_t bytes = 0;
};

struct CorpusStats {
  std::vector<CorpusStatsRow> rows;
  std::size_t total_sentences = 0;
  std::size_t total_bytes = 0;
};

// Bytes count UTF-8 text bytes, excluding line terminators.
CorpusStats corpus_stats(const std::vector<CorpusShard>& shards);

// Language code -> shard paths relative to the corpus root, sorted.
using CorpusIndex = std::map<std::string, std::vector<std::string>>;

// Files named <code>.txt or <code>.<part>.txt directly under `root`.
CorpusIndex scan_corpus(const std::filesystem::path& root);

}  // namespace sprachbund
