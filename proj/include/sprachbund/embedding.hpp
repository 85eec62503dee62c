#pragma once

#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "sprachbund/corpus.hpp"

namespace sprachbund {

// Sentence embeddings for one language, stored row-major in 32-bit floats.
class SentenceEmbeddingSet {
 public:
  SentenceEmbeddingSet() = default;
  SentenceEmbeddingSet(std::string language, std::size_t dim);

  const std::string& language() const { return language_; }
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }

  // Throws DataError on a length mismatch or a non-finite component.
  void add(std::int64_t id, std::span<const float> vec);

  std::int64_t id(std::size_t i) const { return ids_[i]; }
  const std::vector<std::int64_t>& ids() const { return ids_; }
  std::span<const float> vector(std::size_t i) const { return {values_.data() + i * dim_, dim_}; }
  std::span<const float> data() const { return values_; }

  void reserve(std::size_t n);

 private:
  std::string language_;
  std::size_t dim_ = 0;
  std::vector<std::int64_t> ids_;
  std::vector<float> values_;
};

// Per-language centroid of sentence-initial-token embeddings.
struct LanguageRepresentation {
  std::string language;
  std::vector<float> vector;
  std::size_t sample_count = 0;
};

// Componentwise mean, Kahan-compensated in double. Throws DataError when empty.
LanguageRepresentation centroid(const SentenceEmbeddingSet& set);

// One representation per set, input order. Rejects duplicate languages and
// mixed dimensions.
std::vector<LanguageRepresentation> centroid_all(const std::vector<SentenceEmbeddingSet>& sets);

// JSON Lines: header {"v":1,"dim":D}, then {"lang","id","vec"} per line.
// Sets come back in order of first appearance.
std::vector<SentenceEmbeddingSet> parse_embeddings(std::string_view text,
                                                   const std::string& source = "<memory>");
std::vector<SentenceEmbeddingSet> load_embeddings(const std::filesystem::path& path);
std::string serialize_embeddings(const std::vector<SentenceEmbeddingSet>& sets, std::size_t dim);

nlohmann::json representations_to_json(const std::vector<LanguageRepresentation>& reps);
std::vector<LanguageRepresentation> representations_from_json(const nlohmann::json& doc);

struct EmbeddingClientOptions {
  std::size_t batch = 32;
  std::size_t max_in_flight = 4;
  // Attempts after the first one for a batch that failed transiently.
  std::size_t max_retries = 3;
  std::chrono::milliseconds retry_backoff{50};
  std::chrono::seconds timeout{30};
  // Sent as "Authorization: Bearer <token>" when non-empty.
  std::string auth_token;
};

// HTTP client for an embedding service exposing GET /info and POST /embed.
class EmbeddingClient {
 public:
  // `endpoint` is "http://host:port" with an optional path prefix.
  EmbeddingClient(std::string endpoint, EmbeddingClientOptions options = {});

  // GET /info -> {"dim": int}.
  std::size_t dimension() const;

  // Embeds every sentence of the shard; output order follows the shard even
  // when batches complete out of order. Empty shards issue no requests.
  SentenceEmbeddingSet fetch(const CorpusShard& shard) const;

  // Requests issued so far, retries included.
  std::size_t requests_issued() const { return *requests_; }

 private:
  std::string scheme_host_;
  std::string path_prefix_;
  EmbeddingClientOptions options_;
  std::shared_ptr<std::atomic<std::size_t>> requests_;
};

SentenceEmbeddingSet fetch_embeddings(const std::string& endpoint, const CorpusShard& shard,
                                      std::size_t batch);

}  // namespace sprachbund
