#include "sprachbund/corpus.hpp"

#include <algorithm>
#include <random>

#include "sprachbund/error.hpp"
#include "sprachbund/io.hpp"

namespace sprachbund {

namespace {

bool is_blank(std::string_view line) {
  return std::all_of(line.begin(), line.end(),
                     [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\f' || c == '\v'; });
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace

std::optional<std::size_t> find_invalid_utf8(std::string_view bytes) {
  const auto* s = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::size_t n = bytes.size();
  std::size_t i = 0;
  while (i < n) {
    const unsigned char c = s[i];
    if (c < 0x80) {
      ++i;
      continue;
    }
    std::size_t len = 0;
    std::uint32_t cp = 0;
    if ((c & 0xE0) == 0xC0) {
      len = 2;
      cp = c & 0x1F;
    } else if ((c & 0xF0) == 0xE0) {
      len = 3;
      cp = c & 0x0F;
    } else if ((c & 0xF8) == 0xF0) {
      len = 4;
      cp = c & 0x07;
    } else {
      return i;
    }
    if (i + len > n) {
      return i;
    }
    for (std::size_t k = 1; k < len; ++k) {
      if ((s[i + k] & 0xC0) != 0x80) {
        return i;
      }
      cp = (cp << 6) | (s[i + k] & 0x3F);
    }
    // Overlong forms, surrogates and out-of-range code points.
    if ((len == 2 && cp < 0x80) || (len == 3 && cp < 0x800) || (len == 4 && cp < 0x10000) ||
        (cp >= 0xD800 && cp <= 0xDFFF) || cp > 0x10FFFF) {
      return i;
    }
    i += len;
  }
  return std::nullopt;
}

CorpusShard parse_shard(std::string_view text, std::string language, std::string source_tag) {
  CorpusShard shard{std::move(language), {}, std::move(source_tag)};
  std::int64_t next_id = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) {
      end = text.size();
    }
    std::string_view line = text.substr(pos, end - pos);
    if (!line.empty() && line.back() == '\r') {
      line.remove_suffix(1);
    }
    if (!is_blank(line)) {
      shard.sentences.push_back({next_id++, std::string(line)});
    }
    pos = end + 1;
  }
  return shard;
}

CorpusShard ingest_shard(const std::filesystem::path& path, std::string_view language,
                         const Registry& registry) {
  require_valid_code(language);
  if (!registry.contains(language)) {
    throw DataError("language \"" + std::string(language) + "\" is not registered (shard " +
                    path.string() + ")");
  }
  const std::string text = read_text_file(path);
  if (auto bad = find_invalid_utf8(text)) {
    throw DataError(path.string() + ": invalid UTF-8 at byte offset " + std::to_string(*bad));
  }
  return parse_shard(text, std::string(language), path.filename().string());
}

void write_shard(const CorpusShard& shard, const std::filesystem::path& path) {
  std::string out;
  for (const auto& s : shard.sentences) {
    out += s.text;
    out += '\n';
  }
  write_text_file(path, out);
}

std::uint64_t sampling_stream_seed(std::uint64_t seed, std::string_view language) {
  std::uint64_t state = seed ^ fnv1a64(language);
  return splitmix64(state);
}

CorpusShard sample(const CorpusShard& shard, const SamplingPolicy& policy) {
  if (policy.cap == 0) {
    throw UsageError("sampling cap must be at least 1");
  }
  const std::size_t n = shard.sentences.size();
  if (n <= policy.cap) {
    return shard;
  }
  std::mt19937_64 engine(sampling_stream_seed(policy.seed, shard.language));
  std::vector<std::size_t> reservoir(policy.cap);
  for (std::size_t i = 0; i < policy.cap; ++i) {
    reservoir[i] = i;
  }
  for (std::size_t i = policy.cap; i < n; ++i) {
    const std::uint64_t j = uniform_below(engine, i + 1);
    if (j < policy.cap) {
      reservoir[j] = i;
    }
  }
  std::sort(reservoir.begin(), reservoir.end());

  CorpusShard out{shard.language, {}, shard.source_tag};
  out.sentences.reserve(policy.cap);
  for (std::size_t idx : reservoir) {
    out.sentences.push_back(shard.sentences[idx]);
  }
  return out;
}

CorpusStats corpus_stats(const std::vector<CorpusShard>& shards) {
  std::map<std::string, CorpusStatsRow> by_language;
  for (const auto& shard : shards) {
    auto& row = by_language[shard.language];
    row.language = shard.language;
    row.sentences += shard.sentences.size();
    for (const auto& s : shard.sentences) {
      row.bytes += s.text.size();
    }
  }
  CorpusStats stats;
  for (auto& [code, row] : by_language) {
    stats.total_sentences += row.sentences;
    stats.total_bytes += row.bytes;
    stats.rows.push_back(std::move(row));
  }
  return stats;
}

CorpusIndex scan_corpus(const std::filesystem::path& root) {
  if (!std::filesystem::is_directory(root)) {
    throw DataError("corpus root " + root.string() + " is not a directory");
  }
  CorpusIndex index;
  for (const auto& entry : std::filesystem::directory_iterator(root)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".txt") {
      continue;
    }
    const std::string stem = entry.path().stem().string();
    const std::string code = stem.substr(0, stem.find('.'));
    if (!is_valid_code(code)) {
      continue;
    }
    index[code].push_back(entry.path().filename().string());
  }
  for (auto& [code, paths] : index) {
    std::sort(paths.begin(), paths.end());
  }
  return index;
}

}  // namespace sprachbund
