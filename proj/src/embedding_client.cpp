#include <algorithm>
#include <cmath>
#include <future>
#include <mutex>
#include <optional>
#include <thread>

#include <httplib.h>

#include "sprachbund/embedding.hpp"
#include "sprachbund/error.hpp"

namespace sprachbund {

using nlohmann::json;

namespace {

// Failures worth retrying: transport errors, 429 and 5xx.
struct TransientFailure {
  std::string message;
};

struct BatchResult {
  std::vector<std::vector<float>> vectors;
};

std::unique_ptr<httplib::Client> make_client(const std::string& scheme_host,
                                             const EmbeddingClientOptions& options) {
  auto client = std::make_unique<httplib::Client>(scheme_host);
  client->set_connection_timeout(options.timeout);
  client->set_read_timeout(options.timeout);
  client->set_write_timeout(options.timeout);
  if (!options.auth_token.empty()) {
    client->set_bearer_token_auth(options.auth_token);
  }
  return client;
}

bool transient_status(int status) { return status == 429 || status >= 500; }

}  // namespace

EmbeddingClient::EmbeddingClient(std::string endpoint, EmbeddingClientOptions options)
    : options_(std::move(options)), requests_(std::make_shared<std::atomic<std::size_t>>(0)) {
  if (options_.batch == 0) {
    throw UsageError("embedding batch size must be at least 1");
  }
  if (options_.max_in_flight == 0) {
    options_.max_in_flight = 1;
  }
  const auto scheme_end = endpoint.find("://");
  if (scheme_end == std::string::npos || endpoint.compare(0, scheme_end, "http") != 0) {
    throw UsageError("embedding endpoint must look like http://host:port, got \"" + endpoint + "\"");
  }
  const auto path_start = endpoint.find('/', scheme_end + 3);
  if (path_start == std::string::npos) {
    scheme_host_ = endpoint;
  } else {
    scheme_host_ = endpoint.substr(0, path_start);
    path_prefix_ = endpoint.substr(path_start);
    while (!path_prefix_.empty() && path_prefix_.back() == '/') {
      path_prefix_.pop_back();
    }
  }
}

std::size_t EmbeddingClient::dimension() const {
  std::string last_error;
  for (std::size_t attempt = 0; attempt <= options_.max_retries; ++attempt) {
    if (attempt > 0) {
      std::this_thread::sleep_for(options_.retry_backoff * attempt);
    }
    auto client = make_client(scheme_host_, options_);
    auto res = client->Get(path_prefix_ + "/info");
    if (!res) {
      last_error = "connection to " + scheme_host_ + " failed: " + httplib::to_string(res.error());
      continue;
    }
    if (transient_status(res->status)) {
      last_error = "GET /info returned HTTP " + std::to_string(res->status);
      continue;
    }
    if (res->status != 200) {
      throw ServiceError("GET /info returned HTTP " + std::to_string(res->status));
    }
    try {
      const auto doc = json::parse(res->body);
      const auto dim = doc.at("dim").get<std::int64_t>();
      if (dim <= 0) {
        throw ServiceError("GET /info declared a non-positive dimension");
      }
      return static_cast<std::size_t>(dim);
    } catch (const json::exception& e) {
      throw ServiceError(std::string("protocol error: malformed /info response: ") + e.what());
    }
  }
  throw ServiceError(last_error);
}

SentenceEmbeddingSet EmbeddingClient::fetch(const CorpusShard& shard) const {
  const std::size_t dim = dimension();
  SentenceEmbeddingSet out(shard.language, dim);
  const std::size_t n = shard.sentences.size();
  if (n == 0) {
    return out;
  }
  const std::size_t batches = (n + options_.batch - 1) / options_.batch;
  std::vector<std::optional<BatchResult>> results(batches);
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::optional<ServiceError> fatal;

  auto run_batch = [&](httplib::Client& client, std::size_t b) -> BatchResult {
    const std::size_t begin = b * options_.batch;
    const std::size_t end = std::min(n, begin + options_.batch);
    json texts = json::array();
    for (std::size_t i = begin; i < end; ++i) {
      texts.push_back(shard.sentences[i].text);
    }
    const std::string body = json{{"texts", std::move(texts)}}.dump();
    ++*requests_;
    auto res = client.Post(path_prefix_ + "/embed", body, "application/json");
    if (!res) {
      throw TransientFailure{"connection to " + scheme_host_ + " failed: " + httplib::to_string(res.error())};
    }
    if (transient_status(res->status)) {
      throw TransientFailure{"POST /embed returned HTTP " + std::to_string(res->status)};
    }
    if (res->status != 200) {
      throw ServiceError("POST /embed returned HTTP " + std::to_string(res->status));
    }
    BatchResult result;
    try {
      const auto doc = json::parse(res->body);
      const auto& vectors = doc.at("vectors");
      if (!vectors.is_array()) {
        throw ServiceError("protocol error: \"vectors\" is not an array");
      }
      for (const auto& v : vectors) {
        auto vec = v.get<std::vector<float>>();
        if (vec.size() != dim) {
          throw ServiceError("protocol error: vector of dimension " + std::to_string(vec.size()) +
                             ", service declared " + std::to_string(dim));
        }
        if (!std::all_of(vec.begin(), vec.end(), [](float x) { return std::isfinite(x); })) {
          throw ServiceError("protocol error: non-finite vector component");
        }
        result.vectors.push_back(std::move(vec));
      }
    } catch (const json::exception& e) {
      throw ServiceError(std::string("protocol error: malformed /embed response: ") + e.what());
    }
    if (result.vectors.size() > end - begin) {
      throw ServiceError("protocol error: /embed returned more vectors than texts");
    }
    return result;
  };

  auto worker = [&] {
    auto client = make_client(scheme_host_, options_);
    for (;;) {
      {
        std::lock_guard lock(error_mutex);
        if (fatal) {
          return;
        }
      }
      const std::size_t b = next++;
      if (b >= batches) {
        return;
      }
      std::string last_error;
      for (std::size_t attempt = 0; attempt <= options_.max_retries; ++attempt) {
        if (attempt > 0) {
          std::this_thread::sleep_for(options_.retry_backoff * attempt);
          client = make_client(scheme_host_, options_);
        }
        try {
          results[b] = run_batch(*client, b);
          break;
        } catch (const TransientFailure& f) {
          last_error = f.message;
        } catch (const ServiceError& e) {
          std::lock_guard lock(error_mutex);
          if (!fatal) {
            fatal = e;
          }
          return;
        }
      }
      if (!results[b]) {
        std::lock_guard lock(error_mutex);
        if (!fatal) {
          fatal = ServiceError(last_error + " (after " + std::to_string(options_.max_retries + 1) +
                               " attempts)");
        }
        return;
      }
    }
  };

  const std::size_t workers = std::min(options_.max_in_flight, batches);
  std::vector<std::future<void>> running;
  running.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    running.push_back(std::async(std::launch::async, worker));
  }
  for (auto& f : running) {
    f.get();
  }
  if (fatal) {
    throw *fatal;
  }

  std::vector<std::int64_t> missing;
  out.reserve(n);
  for (std::size_t b = 0; b < batches; ++b) {
    const std::size_t begin = b * options_.batch;
    const std::size_t end = std::min(n, begin + options_.batch);
    const auto& vectors = results[b]->vectors;
    for (std::size_t i = begin; i < end; ++i) {
      const std::size_t k = i - begin;
      if (k < vectors.size()) {
        out.add(shard.sentences[i].id, vectors[k]);
      } else {
        missing.push_back(shard.sentences[i].id);
      }
    }
  }
  if (!missing.empty()) {
    std::string ids;
    for (auto id : missing) {
      ids += (ids.empty() ? "" : ", ") + std::to_string(id);
    }
    throw ServiceError("partial failure for \"" + shard.language + "\": " + std::to_string(missing.size()) +
                       " sentence(s) without vectors: ids " + ids);
  }
  return out;
}

SentenceEmbeddingSet fetch_embeddings(const std::string& endpoint, const CorpusShard& shard,
                                      std::size_t batch) {
  EmbeddingClientOptions options;
  options.batch = batch;
  return EmbeddingClient(endpoint, options).fetch(shard);
}

}  // namespace sprachbund
