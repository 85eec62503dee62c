#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sprachbund/analysis.hpp"
#include "sprachbund/cluster.hpp"
#include "sprachbund/corpus.hpp"
#include "sprachbund/embedding.hpp"
#include "sprachbund/error.hpp"
#include "sprachbund/fixtures.hpp"
#include "sprachbund/partition.hpp"
#include "sprachbund/projection.hpp"
#include "sprachbund/registry.hpp"
#include "sprachbund/simmatrix.hpp"

namespace py = pybind11;
using namespace sprachbund;
using nlohmann::json;

namespace {

using Clusters = std::vector<std::vector<std::string>>;
using PairTable = std::map<std::pair<std::string, std::string>, double>;

py::object to_python(const json& doc) { return py::module_::import("json").attr("loads")(doc.dump()); }

json from_python(const py::object& obj) {
  return json::parse(py::module_::import("json").attr("dumps")(obj).cast<std::string>());
}

LexicalSimilarityTable make_table(const PairTable& pairs) {
  LexicalSimilarityTable table;
  for (const auto& [key, value] : pairs) table.insert(key.first, key.second, value);
  return table;
}

PairTable table_pairs(const LexicalSimilarityTable& table) {
  return {table.entries().begin(), table.entries().end()};
}

SprachbundAssignment make_assignment(const Clusters& clusters) {
  SprachbundAssignment a{clusters.size(), clusters};
  for (auto& c : a.clusters) std::sort(c.begin(), c.end());
  return a;
}

std::vector<LanguageRepresentation> make_reps(const std::vector<std::pair<std::string, std::vector<float>>>& reps) {
  std::vector<LanguageRepresentation> out;
  for (const auto& [code, vec] : reps) out.push_back({code, vec, 1});
  return out;
}

const Registry& registry_or_bundled(const std::optional<py::object>& doc, Registry& storage) {
  if (!doc) return fixtures::languages();
  storage = Registry::from_json(from_python(*doc));
  return storage;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sprachbund discovery core";

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<UsageError>(m, "UsageError", base.ptr());
  py::register_exception<DataError>(m, "DataError", base.ptr());
  py::register_exception<ServiceError>(m, "ServiceError", base.ptr());

  m.def("languages", [] { return to_python(fixtures::languages().to_json()); },
        "Bundled language registry as a JSON document.");
  m.def("lexical_similarity", [] { return table_pairs(fixtures::lexical_similarity()); });
  m.def("published_sprachbunds", [] { return fixtures::published_sprachbunds(); });
  m.def("is_valid_code", [](const std::string& code) { return is_valid_code(code); });

  py::class_<SimilarityMatrix>(m, "SimilarityMatrix")
      .def(py::init([](std::vector<std::string> languages, const std::vector<std::vector<double>>& rows) {
             std::vector<double> flat;
             for (const auto& r : rows) flat.insert(flat.end(), r.begin(), r.end());
             return SimilarityMatrix(std::move(languages), std::move(flat));
           }),
           py::arg("languages"), py::arg("rows"))
      .def_property_readonly("languages", &SimilarityMatrix::languages)
      .def("__len__", &SimilarityMatrix::size)
      .def("__getitem__", [](const SimilarityMatrix& s, std::pair<std::string, std::string> key) {
        return s(s.index_of(key.first), s.index_of(key.second));
      })
      .def("rows", [](const SimilarityMatrix& s) {
        std::vector<std::vector<double>> rows;
        for (std::size_t i = 0; i < s.size(); ++i) rows.emplace_back(s.row(i).begin(), s.row(i).end());
        return rows;
      })
      .def("subset", &SimilarityMatrix::subset)
      .def("to_json", [](const SimilarityMatrix& s) { return to_python(s.to_json()); })
      .def_static("from_json", [](const py::object& doc) { return SimilarityMatrix::from_json(from_python(doc)); })
      .def("to_csv", &SimilarityMatrix::to_csv);

  m.def("embedding_similarity", [] { return fixtures::embedding_similarity(); });
  m.def("cosine", [](const std::vector<double>& a, const std::vector<double>& b) {
    return cosine(std::span<const double>(a), std::span<const double>(b));
  });
  m.def("build_matrix", [](const std::vector<std::pair<std::string, std::vector<float>>>& reps) {
    return build_matrix(make_reps(reps));
  }, py::arg("representations"), "Cosine matrix from (code, vector) pairs.");
  m.def("load_matrix", [](const std::string& path) { return load_matrix(path); });
  m.def("pearson", [](const std::vector<double>& xs, const std::vector<double>& ys) { return pearson(xs, ys); });
  m.def("lexical_correlation", [](const SimilarityMatrix& matrix, const std::optional<PairTable>& table) {
    const auto r = lexical_correlation(matrix, table ? make_table(*table) : fixtures::lexical_similarity());
    return std::make_pair(r.r, r.pairs);
  }, py::arg("matrix"), py::arg("table") = py::none());

  m.def("centroid", [](const std::vector<std::vector<float>>& vectors) {
    SentenceEmbeddingSet set("xx", vectors.empty() ? 0 : vectors.front().size());
    for (std::size_t i = 0; i < vectors.size(); ++i) set.add(static_cast<std::int64_t>(i), vectors[i]);
    return centroid(set).vector;
  });
  m.def("sample", [](const std::vector<std::string>& lines, const std::string& language, std::size_t cap,
                     std::uint64_t seed) {
    CorpusShard shard{language, {}, "python"};
    for (std::size_t i = 0; i < lines.size(); ++i) shard.sentences.push_back({static_cast<std::int64_t>(i), lines[i]});
    std::vector<std::pair<std::int64_t, std::string>> out;
    for (auto& s : sample(shard, {cap, seed}).sentences) out.emplace_back(s.id, std::move(s.text));
    return out;
  }, py::arg("lines"), py::arg("language"), py::arg("cap") = kDefaultSampleCap, py::arg("seed") = 0);

  py::class_<Dendrogram>(m, "Dendrogram")
      .def_readonly("languages", &Dendrogram::languages)
      .def_property_readonly("merges", [](const Dendrogram& d) {
        std::vector<std::tuple<std::size_t, std::size_t, double, std::size_t>> out;
        for (const auto& mg : d.merges) out.emplace_back(mg.left, mg.right, mg.distance, mg.node);
        return out;
      })
      .def("to_json", [](const Dendrogram& d) { return to_python(d.to_json()); });

  m.def("agglomerate", &agglomerate);
  m.def("cut", [](const Dendrogram& d, std::size_t k) { return cut(d, k).clusters; });
  m.def("random_baseline", [](const std::vector<std::string>& languages, const std::vector<std::size_t>& sizes,
                              std::uint64_t seed) { return random_baseline(languages, sizes, seed).clusters; });
  m.def("silhouette", [](const SimilarityMatrix& matrix, const Clusters& clusters) {
    return silhouette(matrix, make_assignment(clusters));
  });
  m.def("select_pivot", &select_pivot, py::arg("cluster"), py::arg("matrix"));

  m.def("tsne", [](const std::vector<std::pair<std::string, std::vector<float>>>& reps, double perplexity,
                   std::uint64_t seed, std::size_t iterations) {
    TsneParams params;
    params.perplexity = perplexity;
    params.seed = seed;
    params.iterations = iterations;
    params.exaggeration_iterations = std::min(params.exaggeration_iterations, iterations);
    auto result = tsne(make_reps(reps), params);
    return std::make_pair(minmax_normalize(result.points), result.kl_history);
  }, py::arg("representations"), py::arg("perplexity") = 30.0, py::arg("seed") = 0, py::arg("iterations") = 1000,
     "Normalized 2-D points and the KL history.");

  m.def("family_purity", [](const Clusters& clusters, const std::optional<py::object>& registry) {
    Registry storage;
    return to_python(family_purity(make_assignment(clusters), registry_or_bundled(registry, storage)).to_json());
  }, py::arg("clusters"), py::arg("registry") = py::none());
  m.def("syntax_agreement", [](const Clusters& clusters, const std::string& feature, const py::object& registry) {
    const auto reg = Registry::from_json(from_python(registry));
    return to_python(syntax_agreement(make_assignment(clusters), reg, feature).to_json());
  }, py::arg("clusters"), py::arg("feature"), py::arg("registry"));
}
