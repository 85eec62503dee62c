#include "sprachbund/cli.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <set>

#include <CLI11.hpp>

#include "sprachbund/analysis.hpp"
#include "sprachbund/cluster.hpp"
#include "sprachbund/corpus.hpp"
#include "sprachbund/embedding.hpp"
#include "sprachbund/error.hpp"
#include "sprachbund/fixtures.hpp"
#include "sprachbund/io.hpp"
#include "sprachbund/partition.hpp"
#include "sprachbund/projection.hpp"
#include "sprachbund/registry.hpp"
#include "sprachbund/simmatrix.hpp"

namespace sprachbund::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kTokenEnv = "SPRACHBUND_API_TOKEN";

// Workspace file names.
constexpr const char* kSampleFile = "sample.json";
constexpr const char* kSampledDir = "sampled";
constexpr const char* kEmbeddingsFile = "embeddings.jsonl";
constexpr const char* kEmbedMetaFile = "embed.json";
constexpr const char* kRepresentationsFile = "representations.json";
constexpr const char* kMatrixFile = "simmatrix.json";
constexpr const char* kMatrixCsvFile = "simmatrix.csv";
constexpr const char* kDendrogramFile = "dendrogram.json";
constexpr const char* kBaselineFile = "baseline.json";
constexpr const char* kAnalysisFile = "analysis.json";
constexpr const char* kProjectionFile = "projection.json";
constexpr const char* kRunLog = "run.log";
constexpr const char* kLockFile = ".sprachbund.lock";

json path_json(const std::optional<fs::path>& p) { return p ? json(p->generic_string()) : json(nullptr); }

// Exclusive advisory lock on the workspace for the lifetime of the object.
class WorkspaceLock {
 public:
  explicit WorkspaceLock(const fs::path& dir) {
    fs::create_directories(dir);
    const auto path = dir / kLockFile;
    fd_ = ::open(path.c_str(), O_CREAT | O_RDWR, 0644);
    if (fd_ < 0) {
      throw DataError("cannot create lock file " + path.string());
    }
    if (::flock(fd_, LOCK_EX | LOCK_NB) != 0) {
      ::close(fd_);
      throw DataError("workspace " + dir.string() + " is locked by another sprachbund process");
    }
  }
  ~WorkspaceLock() {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
  WorkspaceLock(const WorkspaceLock&) = delete;
  WorkspaceLock& operator=(const WorkspaceLock&) = delete;

 private:
  int fd_ = -1;
};

class Workspace {
 public:
  Workspace(PipelineConfig config, std::ostream& out)
      : config_(std::move(config)), digest_(config_.digest()), out_(out) {}

  const PipelineConfig& config() const { return config_; }
  fs::path dir() const { return config_.out; }
  fs::path file(const std::string& name) const { return config_.out / name; }
  std::ostream& out() { return out_; }

  fs::path require(const std::string& name, const std::string& producer) const {
    const auto p = file(name);
    if (!fs::exists(p)) {
      throw DataError("missing input " + p.string() + " (run `sprachbund " + producer + "` first)");
    }
    return p;
  }

  void write(const std::string& name, json doc) const {
    doc["config_digest"] = digest_;
    write_json_file(file(name), doc);
  }

  void log(const std::string& stage, const std::string& message) const {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    std::ofstream log(file(kRunLog), std::ios::app);
    log << stamp << ' ' << stage << ": " << message << '\n';
  }

  const Registry& registry() {
    if (!registry_) {
      registry_ = config_.registry ? load_registry(*config_.registry) : fixtures::languages();
    }
    return *registry_;
  }

  std::vector<std::size_t> ks() const {
    return config_.sweep.empty() ? std::vector<std::size_t>{config_.k} : config_.sweep;
  }

  // Primary assignment file for a given k.
  std::string assignment_name(std::size_t k) const {
    return config_.sweep.empty() ? "assignment.json" : "assignment_k" + std::to_string(k) + ".json";
  }
  std::string manifest_name(std::size_t k) const {
    return config_.sweep.empty() ? "manifest.json" : "manifest_k" + std::to_string(k) + ".json";
  }

  const std::string& digest() const { return digest_; }

 private:
  PipelineConfig config_;
  std::string digest_;
  std::ostream& out_;
  std::optional<Registry> registry_;
};

std::string join(const std::vector<std::string>& items, const char* sep = ", ") {
  std::string out;
  for (const auto& s : items) {
    out += (out.empty() ? "" : sep) + s;
  }
  return out;
}

// ---- stages ----

void stage_sample(Workspace& ws) {
  const auto& cfg = ws.config();
  if (!cfg.corpus) {
    throw UsageError("sample needs --corpus (directory of <code>.txt shards)");
  }
  const auto index = scan_corpus(*cfg.corpus);
  if (index.empty()) {
    throw DataError("no <code>.txt shards found under " + cfg.corpus->string());
  }
  const SamplingPolicy policy{cfg.cap, cfg.seed};
  json langs = json::array();
  for (const auto& [code, files] : index) {
    CorpusShard merged{code, {}, join(files, "+")};
    for (const auto& f : files) {
      auto shard = ingest_shard(*cfg.corpus / f, code, ws.registry());
      for (auto& s : shard.sentences) {
        s.id = static_cast<std::int64_t>(merged.sentences.size());
        merged.sentences.push_back(std::move(s));
      }
    }
    const auto sampled = sample(merged, policy);
    write_shard(sampled, ws.file(std::string(kSampledDir) + "/" + code + ".txt"));
    const auto stats = corpus_stats({sampled});
    langs.push_back({{"code", code},
                     {"shards", files},
                     {"input_sentences", merged.size()},
                     {"sampled_sentences", sampled.size()},
                     {"sampled_bytes", stats.total_bytes}});
  }
  ws.write(kSampleFile, {{"v", kSchemaVersion},
                         {"cap", cfg.cap},
                         {"seed", cfg.seed},
                         {"generator", "mt19937_64/splitmix64(seed ^ fnv1a64(code))"},
                         {"languages", std::move(langs)}});
  ws.log("sample", "sampled " + std::to_string(index.size()) + " language(s)");
  ws.out() << "sample: " << index.size() << " language(s) -> " << ws.file(kSampleFile).string() << '\n';
}

void stage_embed(Workspace& ws) {
  const auto& cfg = ws.config();
  std::vector<SentenceEmbeddingSet> sets;
  std::string source;
  if (cfg.embeddings) {
    sets = load_embeddings(*cfg.embeddings);
    source = "file:" + cfg.embeddings->generic_string();
  } else if (cfg.endpoint) {
    const auto sample_doc = read_json_file(ws.require(kSampleFile, "sample"));
    EmbeddingClientOptions options;
    options.batch = cfg.batch;
    if (const char* token = std::getenv(kTokenEnv)) {
      options.auth_token = token;
    }
    EmbeddingClient client(*cfg.endpoint, options);
    for (const auto& entry : sample_doc.at("languages")) {
      const auto code = entry.at("code").get<std::string>();
      const auto path = ws.file(std::string(kSampledDir) + "/" + code + ".txt");
      auto shard = parse_shard(read_text_file(path), code, path.filename().string());
      sets.push_back(client.fetch(shard));
    }
    source = "endpoint:" + *cfg.endpoint;
  } else {
    throw UsageError("embed needs exactly one of --embeddings or --endpoint");
  }
  if (sets.empty()) {
    throw DataError("no embeddings to store");
  }
  for (const auto& s : sets) {
    if (!ws.registry().contains(s.language())) {
      throw DataError("embeddings for unregistered language \"" + s.language() + "\"");
    }
  }
  const std::size_t dim = sets.front().dim();
  const std::string text = serialize_embeddings(sets, dim);
  write_text_file(ws.file(kEmbeddingsFile), text);
  json counts = json::object();
  for (const auto& s : sets) {
    counts[s.language()] = s.size();
  }
  ws.write(kEmbedMetaFile, {{"v", kSchemaVersion},
                            {"source", source},
                            {"digest", hex_digest(text)},
                            {"dim", dim},
                            {"vectors", std::move(counts)}});
  ws.log("embed", "stored " + std::to_string(sets.size()) + " language(s) from " + source);
  ws.out() << "embed: " << sets.size() << " language(s), dim " << dim << '\n';
}

void stage_repr(Workspace& ws) {
  const auto sets = load_embeddings(ws.require(kEmbeddingsFile, "embed"));
  const auto reps = centroid_all(sets);
  ws.write(kRepresentationsFile, representations_to_json(reps));
  ws.log("repr", std::to_string(reps.size()) + " representation(s)");
  ws.out() << "repr: " << reps.size() << " representation(s)\n";
}

void stage_simmat(Workspace& ws) {
  const auto reps = representations_from_json(read_json_file(ws.require(kRepresentationsFile, "repr")));
  const auto matrix = build_matrix(reps);
  ws.write(kMatrixFile, matrix.to_json());
  write_text_file(ws.file(kMatrixCsvFile), matrix.to_csv());
  ws.log("simmat", std::to_string(matrix.size()) + "x" + std::to_string(matrix.size()));
  ws.out() << "simmat: " << matrix.size() << " languages\n";
}

json assignment_doc(const SprachbundAssignment& a, const SimilarityMatrix& matrix) {
  json doc = a.to_json();
  for (std::size_t i = 0; i < a.clusters.size(); ++i) {
    doc["clusters"][i]["pivot"] = select_pivot(a.clusters[i], matrix);
  }
  doc["silhouette"] = a.k >= 2 && a.k < matrix.size() ? json(silhouette(matrix, a)) : json(nullptr);
  return doc;
}

void stage_cluster(Workspace& ws) {
  const auto matrix = load_matrix(ws.require(kMatrixFile, "simmat"));
  const auto tree = agglomerate(matrix);
  ws.write(kDendrogramFile, tree.to_json());
  for (std::size_t k : ws.ks()) {
    const auto a = cut(tree, k);
    ws.write(ws.assignment_name(k), assignment_doc(a, matrix));
    ws.out() << "cluster: k=" << k;
    for (const auto& c : a.clusters) {
      ws.out() << " [" << join(c, " ") << "]";
    }
    ws.out() << '\n';
  }
  // Random clusters with the sizes of the first requested cut.
  const auto primary = cut(tree, ws.ks().front());
  std::vector<std::size_t> sizes;
  for (const auto& c : primary.clusters) {
    sizes.push_back(c.size());
  }
  auto baseline = random_baseline(matrix.languages(), sizes, ws.config().seed);
  json bdoc = assignment_doc(baseline, matrix);
  bdoc["seed"] = ws.config().seed;
  ws.write(kBaselineFile, bdoc);
  ws.log("cluster", "average linkage over " + std::to_string(matrix.size()) + " languages");
}

void stage_partition(Workspace& ws) {
  const auto& cfg = ws.config();
  if (!cfg.corpus) {
    throw UsageError("partition needs --corpus (root of the pretraining shards)");
  }
  const auto matrix = load_matrix(ws.require(kMatrixFile, "simmat"));
  const auto index = scan_corpus(*cfg.corpus);
  ManifestOptions options;
  options.corpus_root = cfg.corpus->generic_string();
  options.allow_missing.insert(cfg.allow_missing.begin(), cfg.allow_missing.end());
  options.provenance.seed = cfg.seed;
  options.provenance.tool_version = std::string(kToolVersion);
  options.provenance.config_digest = ws.digest();
  if (fs::exists(ws.file(kEmbedMetaFile))) {
    const auto meta = read_json_file(ws.file(kEmbedMetaFile));
    options.provenance.embedding_source = meta.value("source", "");
    options.provenance.embedding_digest = meta.value("digest", "");
  }
  for (std::size_t k : ws.ks()) {
    const auto a = SprachbundAssignment::from_json(read_json_file(ws.require(ws.assignment_name(k), "cluster")));
    const auto manifest = build_manifest(a, matrix, index, options);
    ws.write(ws.manifest_name(k), manifest.to_json());
    ws.out() << "partition: k=" << k << " -> " << ws.file(ws.manifest_name(k)).string() << '\n';
  }
  ws.log("partition", std::to_string(ws.ks().size()) + " manifest(s)");
}

void stage_analyze(Workspace& ws) {
  const auto& cfg = ws.config();
  const SimilarityMatrix matrix =
      cfg.similarity ? load_matrix(*cfg.similarity) : load_matrix(ws.require(kMatrixFile, "simmat"));
  const LexicalSimilarityTable lexical = cfg.lexical ? load_lexical_table(*cfg.lexical) : fixtures::lexical_similarity();

  AnalysisReport report;
  try {
    report.pearson_lexical = lexical_correlation(matrix, lexical);
  } catch (const DataError& e) {
    if (cfg.lexical || cfg.similarity) {
      throw;
    }
    report.pearson_note = e.what();
  }
  const auto assignment_path = ws.file(ws.assignment_name(ws.ks().front()));
  if (!cfg.similarity && fs::exists(assignment_path)) {
    const auto a = SprachbundAssignment::from_json(read_json_file(assignment_path));
    report.family_purity = family_purity(a, ws.registry());
    for (const auto& feature : canonical_syntax_features()) {
      report.syntax_agreement.push_back(syntax_agreement(a, ws.registry(), feature));
    }
  }
  ws.write(kAnalysisFile, report.to_json());
  ws.out() << report.to_table();
  ws.log("analyze", report.pearson_lexical ? "r=" + std::to_string(report.pearson_lexical->r) : "no correlation");
}

void stage_project(Workspace& ws) {
  const auto& cfg = ws.config();
  const auto reps = representations_from_json(read_json_file(ws.require(kRepresentationsFile, "repr")));
  TsneParams params;
  params.perplexity = cfg.perplexity;
  params.iterations = cfg.iterations;
  params.seed = cfg.seed;
  const double limit = (static_cast<double>(reps.size()) - 1.0) / 3.0;
  if (params.perplexity >= limit) {
    // Small language sets cannot support the default perplexity.
    params.perplexity = std::max(1.0, (static_cast<double>(reps.size()) - 1.0) / 4.0);
    ws.log("project", "perplexity lowered to " + std::to_string(params.perplexity) + " for " +
                          std::to_string(reps.size()) + " languages");
  }
  const auto raw = tsne(reps, params);
  std::vector<std::string> langs;
  for (const auto& r : reps) {
    langs.push_back(r.language);
  }
  const auto projection = minmax_normalize(langs, raw.points, params.to_json());
  ws.write(kProjectionFile, projection.to_json());
  PlotStyle style{cfg.point_radius, cfg.font_size};
  for (const auto& attr : cfg.color_by) {
    const auto plot = emit_plot(projection, ws.registry(), attr, style);
    write_text_file(ws.file("plot_" + attr + ".svg"), plot.svg);
    ws.write("plot_" + attr + ".json", plot.data);
    ws.out() << "project: plot_" << attr << ".svg (" << plot.legend.size() << " legend entries)\n";
  }
  ws.log("project", "t-SNE over " + std::to_string(reps.size()) + " languages");
}

void stage_all(Workspace& ws) {
  const auto& cfg = ws.config();
  if (cfg.corpus) {
    stage_sample(ws);
  }
  stage_embed(ws);
  stage_repr(ws);
  stage_simmat(ws);
  stage_cluster(ws);
  if (cfg.corpus) {
    stage_partition(ws);
  }
  stage_analyze(ws);
  stage_project(ws);
}

// ---- configuration ----

std::optional<fs::path> resolve(const json& doc, const char* key, const fs::path& base) {
  if (!doc.contains(key) || doc[key].is_null()) {
    return std::nullopt;
  }
  fs::path p = doc[key].get<std::string>();
  return p.is_absolute() ? p : base / p;
}

PipelineConfig load_config_file(const fs::path& path) {
  const json doc = read_json_file(path);
  if (!doc.is_object()) {
    throw UsageError("config " + path.string() + " must be a JSON object");
  }
  static const std::set<std::string> known{"corpus",     "embeddings",  "endpoint",     "registry",  "lexical",
                                           "similarity", "out",         "cap",          "seed",      "k",
                                           "sweep",      "allow_missing", "batch",      "perplexity", "iterations",
                                           "color_by",   "point_radius", "font_size",   "v"};
  for (const auto& [key, value] : doc.items()) {
    if (!known.contains(key)) {
      throw UsageError("config " + path.string() + ": unknown key \"" + key + "\"");
    }
  }
  const fs::path base = path.parent_path();
  PipelineConfig cfg;
  try {
    cfg.corpus = resolve(doc, "corpus", base);
    cfg.embeddings = resolve(doc, "embeddings", base);
    cfg.registry = resolve(doc, "registry", base);
    cfg.lexical = resolve(doc, "lexical", base);
    cfg.similarity = resolve(doc, "similarity", base);
    if (auto out = resolve(doc, "out", base)) {
      cfg.out = *out;
    }
    if (doc.contains("endpoint") && !doc["endpoint"].is_null()) {
      cfg.endpoint = doc["endpoint"].get<std::string>();
    }
    cfg.cap = doc.value("cap", cfg.cap);
    cfg.seed = doc.value("seed", cfg.seed);
    cfg.k = doc.value("k", cfg.k);
    cfg.sweep = doc.value("sweep", cfg.sweep);
    cfg.allow_missing = doc.value("allow_missing", cfg.allow_missing);
    cfg.batch = doc.value("batch", cfg.batch);
    cfg.perplexity = doc.value("perplexity", cfg.perplexity);
    cfg.iterations = doc.value("iterations", cfg.iterations);
    if (doc.contains("color_by")) {
      cfg.color_by = doc["color_by"].is_string() ? std::vector<std::string>{doc["color_by"].get<std::string>()}
                                                 : doc["color_by"].get<std::vector<std::string>>();
    }
    cfg.point_radius = doc.value("point_radius", cfg.point_radius);
    cfg.font_size = doc.value("font_size", cfg.font_size);
  } catch (const json::exception& e) {
    throw UsageError("config " + path.string() + ": " + e.what());
  }
  return cfg;
}

void validate(const PipelineConfig& cfg) {
  if (cfg.embeddings && cfg.endpoint) {
    throw UsageError("give exactly one embedding source: --embeddings or --endpoint, not both");
  }
  if (cfg.cap == 0) {
    throw UsageError("--cap must be at least 1");
  }
  if (cfg.k == 0) {
    throw UsageError("--k must be at least 1");
  }
  for (auto k : cfg.sweep) {
    if (k == 0) {
      throw UsageError("--sweep values must be at least 1");
    }
  }
  if (cfg.batch == 0) {
    throw UsageError("--batch must be at least 1");
  }
  for (const auto& code : cfg.allow_missing) {
    if (!is_valid_code(code)) {
      throw UsageError("--allow-missing: invalid language code \"" + code + "\"");
    }
  }
}

void report_error(std::ostream& err, bool json_errors, ErrorKind kind, int code, const std::string& message) {
  if (json_errors) {
    err << json{{"error", {{"kind", to_string(kind)}, {"message", message}, {"exit_code", code}}}}.dump() << '\n';
  } else {
    err << "sprachbund: " << message << '\n';
  }
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Usage:
      return kUsage;
    case ErrorKind::Data:
      return kDataError;
    case ErrorKind::Service:
      return kServiceError;
  }
  return kDataError;
}

}  // namespace

json PipelineConfig::to_json() const {
  return {{"corpus", path_json(corpus)},
          {"embeddings", path_json(embeddings)},
          {"endpoint", endpoint ? json(*endpoint) : json(nullptr)},
          {"registry", path_json(registry)},
          {"lexical", path_json(lexical)},
          {"similarity", path_json(similarity)},
          {"cap", cap},
          {"seed", seed},
          {"k", k},
          {"sweep", sweep},
          {"allow_missing", allow_missing},
          {"batch", batch},
          {"perplexity", perplexity},
          {"iterations", iterations},
          {"color_by", color_by},
          {"point_radius", point_radius},
          {"font_size", font_size}};
}

std::string PipelineConfig::digest() const { return hex_digest(to_json().dump()); }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Representation sprachbund toolkit: cluster languages by embedding similarity"};
  app.name("sprachbund");
  app.require_subcommand(1, 1);

  std::optional<std::string> config_path, corpus, embeddings, endpoint, registry, lexical, similarity, out_dir;
  std::optional<std::size_t> cap, k, batch, iterations;
  std::optional<std::uint64_t> seed;
  std::optional<double> perplexity, point_radius, font_size;
  std::vector<std::size_t> sweep_list;
  std::vector<std::string> allow_missing, color_by;
  bool json_errors = false;

  app.add_option("--config", config_path, "JSON config file; flags override its values");
  app.add_option("--corpus", corpus, "Directory of <code>.txt corpus shards");
  app.add_option("--embeddings", embeddings, "Embedding file (JSON Lines)");
  app.add_option("--endpoint", endpoint, "Embedding service base URL (token from $SPRACHBUND_API_TOKEN)");
  app.add_option("--registry", registry, "Language registry file (default: bundled 108 languages)");
  app.add_option("--lexical", lexical, "Lexical similarity table (default: bundled)");
  app.add_option("--similarity", similarity, "Similarity matrix to analyze instead of the workspace one");
  app.add_option("--out", out_dir, "Workspace directory");
  app.add_option("--cap", cap, "Max sentences sampled per language");
  app.add_option("--seed", seed, "Seed for sampling, baseline and t-SNE");
  auto* k_opt = app.add_option("--k", k, "Number of sprachbunds");
  auto* sweep_opt = app.add_option("--sweep", sweep_list, "Comma-separated cluster counts, e.g. 1,2,4,8")
                        ->delimiter(',');
  k_opt->excludes(sweep_opt);
  app.add_option("--allow-missing", allow_missing, "Languages allowed to lack shards")->delimiter(',');
  app.add_option("--batch", batch, "Sentences per embedding request");
  app.add_option("--perplexity", perplexity, "t-SNE perplexity");
  app.add_option("--iterations", iterations, "t-SNE iterations");
  app.add_option("--color-by", color_by, "Plot coloring: family or a syntax feature")->delimiter(',');
  app.add_option("--point-radius", point_radius, "Plot point radius");
  app.add_option("--font-size", font_size, "Plot label font size");
  app.add_flag("--json-errors", json_errors, "Report errors as JSON on stderr");

  using Stage = std::function<void(Workspace&)>;
  const std::vector<std::tuple<const char*, const char*, Stage>> stages = {
      {"sample", "Sample each language's corpus shards", stage_sample},
      {"embed", "Collect sentence embeddings from a file or a service", stage_embed},
      {"repr", "Average embeddings into language representations", stage_repr},
      {"simmat", "Build the cosine similarity matrix", stage_simmat},
      {"cluster", "Hierarchical clustering into k sprachbunds", stage_cluster},
      {"partition", "Pivot languages and corpus partition manifests", stage_partition},
      {"analyze", "Lexical correlation, family purity, syntax agreement", stage_analyze},
      {"project", "t-SNE projection and SVG plots", stage_project},
      {"all", "Run every stage in order", stage_all},
  };
  std::map<CLI::App*, Stage> dispatch;
  for (const auto& [name, help, fn] : stages) {
    auto* sub = app.add_subcommand(name, help);
    sub->fallthrough();
    dispatch.emplace(sub, fn);
  }

  // CLI11 wants argv order with the program name stripped, reversed.
  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    report_error(err, json_errors, ErrorKind::Usage, kUsage, e.what());
    return kUsage;
  }

  try {
    PipelineConfig cfg = config_path ? load_config_file(*config_path) : PipelineConfig{};
    if (corpus) cfg.corpus = *corpus;
    if (embeddings) cfg.embeddings = *embeddings;
    if (endpoint) cfg.endpoint = *endpoint;
    if (registry) cfg.registry = *registry;
    if (lexical) cfg.lexical = *lexical;
    if (similarity) cfg.similarity = *similarity;
    if (out_dir) cfg.out = *out_dir;
    if (cap) cfg.cap = *cap;
    if (seed) cfg.seed = *seed;
    if (k) {
      cfg.k = *k;
      cfg.sweep.clear();
    }
    if (!sweep_list.empty()) cfg.sweep = sweep_list;
    if (!allow_missing.empty()) cfg.allow_missing = allow_missing;
    if (batch) cfg.batch = *batch;
    if (perplexity) cfg.perplexity = *perplexity;
    if (iterations) cfg.iterations = *iterations;
    if (!color_by.empty()) cfg.color_by = color_by;
    if (point_radius) cfg.point_radius = *point_radius;
    if (font_size) cfg.font_size = *font_size;
    validate(cfg);

    CLI::App* chosen = app.get_subcommands().front();
    Workspace ws(std::move(cfg), out);
    WorkspaceLock lock(ws.dir());
    dispatch.at(chosen)(ws);
    return kSuccess;
  } catch (const Error& e) {
    const int code = exit_code(e.kind());
    report_error(err, json_errors, e.kind(), code, e.what());
    return code;
  } catch (const fs::filesystem_error& e) {
    report_error(err, json_errors, ErrorKind::Data, kDataError, e.what());
    return kDataError;
  } catch (const json::exception& e) {
    report_error(err, json_errors, ErrorKind::Data, kDataError, std::string("malformed artifact: ") + e.what());
    return kDataError;
  } catch (const std::exception& e) {
    report_error(err, json_errors, ErrorKind::Data, kDataError, e.what());
    return kDataError;
  }
}

}  // namespace sprachbund::cli
