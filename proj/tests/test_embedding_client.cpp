#include <doctest.h>

#include <atomic>
#include <functional>
#include <thread>

#include <httplib.h>

#include "sprachbund/corpus.hpp"
#include "sprachbund/embedding.hpp"
#include "sprachbund/error.hpp"

using namespace sprachbund;
using nlohmann::json;

namespace {

// Local embedding service. Each text maps to [len, first byte, 1, ...].
class FakeService {
 public:
  using Hook = std::function<bool(const json& texts, httplib::Response& res)>;

  explicit FakeService(std::size_t dim = 4) : dim_(dim) {
    server_.Get("/info", [this](const httplib::Request&, httplib::Response& res) {
      res.set_content(json{{"dim", dim_}}.dump(), "application/json");
    });
    server_.Post("/embed", [this](const httplib::Request& req, httplib::Response& res) {
      ++embed_calls;
      last_auth = req.get_header_value("Authorization");
      const auto texts = json::parse(req.body).at("texts");
      if (hook && hook(texts, res)) {
        return;
      }
      json vectors = json::array();
      for (const auto& t : texts) {
        vectors.push_back(embed(t.get<std::string>()));
      }
      res.set_content(json{{"vectors", vectors}}.dump(), "application/json");
    });
    port_ = server_.bind_to_any_port("127.0.0.1");
    thread_ = std::thread([this] { server_.listen_after_bind(); });
    server_.wait_until_ready();
  }

  ~FakeService() {
    server_.stop();
    thread_.join();
  }

  std::string endpoint() const { return "http://127.0.0.1:" + std::to_string(port_); }

  std::vector<float> embed(const std::string& text) const {
    std::vector<float> v(dim_, 1.0f);
    v[0] = static_cast<float>(text.size());
    if (dim_ > 1) v[1] = text.empty() ? 0.0f : static_cast<float>(static_cast<unsigned char>(text[0]));
    return v;
  }

  std::atomic<int> embed_calls{0};
  std::string last_auth;
  Hook hook;

 private:
  std::size_t dim_;
  httplib::Server server_;
  int port_ = 0;
  std::thread thread_;
};

CorpusShard shard_of(std::size_t n) {
  CorpusShard s{"en", {}, "test"};
  for (std::size_t i = 0; i < n; ++i) {
    s.sentences.push_back({static_cast<std::int64_t>(i), std::string(i + 1, static_cast<char>('a' + i % 26))});
  }
  return s;
}

EmbeddingClientOptions fast(std::size_t batch) {
  EmbeddingClientOptions o;
  o.batch = batch;
  o.retry_backoff = std::chrono::milliseconds(1);
  o.timeout = std::chrono::seconds(5);
  return o;
}

}  // namespace

TEST_CASE("batches cover the shard in order") {
  FakeService service;
  const auto shard = shard_of(10);
  EmbeddingClient client(service.endpoint(), fast(4));
  const auto set = client.fetch(shard);
  CHECK(client.requests_issued() == 3);
  CHECK(service.embed_calls == 3);
  REQUIRE(set.size() == 10);
  CHECK(set.dim() == 4);
  for (std::size_t i = 0; i < 10; ++i) {
    CHECK(set.id(i) == static_cast<std::int64_t>(i));
    const auto expected = service.embed(shard.sentences[i].text);
    CHECK(std::equal(expected.begin(), expected.end(), set.vector(i).begin()));
  }
}

TEST_CASE("single-sentence batches and the convenience wrapper") {
  FakeService service;
  const auto set = fetch_embeddings(service.endpoint(), shard_of(5), 1);
  CHECK(set.size() == 5);
  CHECK(service.embed_calls == 5);
}

TEST_CASE("an empty shard issues no embed requests") {
  FakeService service;
  EmbeddingClient client(service.endpoint(), fast(4));
  const auto set = client.fetch(shard_of(0));
  CHECK(set.empty());
  CHECK(client.requests_issued() == 0);
  CHECK(service.embed_calls == 0);
}

TEST_CASE("a short response is a partial failure listing the missing ids") {
  FakeService service;
  service.hook = [&](const json& texts, httplib::Response& res) {
    json vectors = json::array();
    for (std::size_t i = 0; i + 1 < texts.size(); ++i) vectors.push_back(service.embed(texts[i]));
    res.set_content(json{{"vectors", vectors}}.dump(), "application/json");
    return true;
  };
  EmbeddingClient client(service.endpoint(), fast(10));
  CHECK_THROWS_WITH_AS(client.fetch(shard_of(10)), doctest::Contains("1 sentence(s) without vectors: ids 9"),
                       ServiceError);
}

TEST_CASE("transient failures are retried") {
  FakeService service;
  std::atomic<int> failures{2};
  service.hook = [&](const json&, httplib::Response& res) {
    if (failures-- > 0) {
      res.status = 503;
      return true;
    }
    return false;
  };
  EmbeddingClient client(service.endpoint(), fast(16));
  const auto set = client.fetch(shard_of(3));
  CHECK(set.size() == 3);
  CHECK(client.requests_issued() == 3);
}

TEST_CASE("persistent 429 exhausts the retry budget") {
  FakeService service;
  service.hook = [](const json&, httplib::Response& res) {
    res.status = 429;
    return true;
  };
  auto options = fast(16);
  options.max_retries = 2;
  EmbeddingClient client(service.endpoint(), options);
  CHECK_THROWS_WITH_AS(client.fetch(shard_of(3)), doctest::Contains("after 3 attempts"), ServiceError);
  CHECK(service.embed_calls == 3);
}

TEST_CASE("client errors are not retried") {
  FakeService service;
  service.hook = [](const json&, httplib::Response& res) {
    res.status = 400;
    return true;
  };
  EmbeddingClient client(service.endpoint(), fast(16));
  CHECK_THROWS_WITH_AS(client.fetch(shard_of(3)), doctest::Contains("HTTP 400"), ServiceError);
  CHECK(service.embed_calls == 1);
}

TEST_CASE("protocol errors") {
  FakeService service;
  SUBCASE("malformed body") {
    service.hook = [](const json&, httplib::Response& res) {
      res.set_content("not json", "text/plain");
      return true;
    };
    CHECK_THROWS_WITH_AS(EmbeddingClient(service.endpoint(), fast(4)).fetch(shard_of(2)),
                         doctest::Contains("protocol error"), ServiceError);
  }
  SUBCASE("wrong dimension") {
    service.hook = [](const json& texts, httplib::Response& res) {
      json vectors = json::array();
      for (std::size_t i = 0; i < texts.size(); ++i) vectors.push_back({1.0, 2.0});
      res.set_content(json{{"vectors", vectors}}.dump(), "application/json");
      return true;
    };
    CHECK_THROWS_WITH_AS(EmbeddingClient(service.endpoint(), fast(4)).fetch(shard_of(2)),
                         doctest::Contains("dimension 2"), ServiceError);
  }
  SUBCASE("too many vectors") {
    service.hook = [&](const json& texts, httplib::Response& res) {
      json vectors = json::array();
      for (std::size_t i = 0; i <= texts.size(); ++i) vectors.push_back(service.embed("x"));
      res.set_content(json{{"vectors", vectors}}.dump(), "application/json");
      return true;
    };
    CHECK_THROWS_AS(EmbeddingClient(service.endpoint(), fast(4)).fetch(shard_of(2)), ServiceError);
  }
}

TEST_CASE("bearer token is forwarded") {
  FakeService service;
  auto options = fast(4);
  options.auth_token = "s3cret";
  EmbeddingClient(service.endpoint(), options).fetch(shard_of(1));
  CHECK(service.last_auth == "Bearer s3cret");
}

TEST_CASE("endpoint validation and unreachable services") {
  CHECK_THROWS_AS(EmbeddingClient("localhost:8080"), UsageError);
  CHECK_THROWS_AS(EmbeddingClient("ftp://x"), UsageError);
  CHECK_THROWS_AS(EmbeddingClient("http://x", fast(0)), UsageError);

  std::string endpoint;
  {
    FakeService stopped;
    endpoint = stopped.endpoint();
  }
  auto options = fast(4);
  options.max_retries = 1;
  EmbeddingClient client(endpoint, options);
  CHECK_THROWS_AS(client.fetch(shard_of(2)), ServiceError);
}
