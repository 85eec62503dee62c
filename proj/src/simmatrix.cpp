#include "sprachbund/simmatrix.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "sprachbund/error.hpp"
#include "sprachbund/io.hpp"

namespace sprachbund {

using nlohmann::json;

namespace {

template <class T>
double cosine_impl(std::span<const T> a, std::span<const T> b) {
  if (a.size() != b.size()) {
    throw DataError("cosine: length mismatch (" + std::to_string(a.size()) + " vs " +
                    std::to_string(b.size()) + ")");
  }
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double x = a[k], y = b[k];
    dot += x * y;
    na += x * x;
    nb += y * y;
  }
  if (na == 0.0) {
    throw DataError("cosine: argument a has zero norm");
  }
  if (nb == 0.0) {
    throw DataError("cosine: argument b has zero norm");
  }
  // sqrt(na * nb) keeps cos(v, v) at exactly 1; the split form covers
  // products that over- or underflow.
  const double prod = na * nb;
  const double denom = std::isfinite(prod) && prod > 0.0 ? std::sqrt(prod) : std::sqrt(na) * std::sqrt(nb);
  return std::clamp(dot / denom, -1.0, 1.0);
}

constexpr double kRangeSlack = 1e-9;

}  // namespace

double cosine(std::span<const float> a, std::span<const float> b) { return cosine_impl(a, b); }
double cosine(std::span<const double> a, std::span<const double> b) { return cosine_impl(a, b); }

SimilarityMatrix::SimilarityMatrix(std::vector<std::string> languages, std::vector<double> values)
    : languages_(std::move(languages)), values_(std::move(values)) {
  const std::size_t m = languages_.size();
  if (values_.size() != m * m) {
    throw DataError("similarity matrix: expected " + std::to_string(m) + "x" + std::to_string(m) + " values");
  }
  std::set<std::string> seen;
  for (const auto& code : languages_) {
    require_valid_code(code);
    if (!seen.insert(code).second) {
      throw DataError("similarity matrix: duplicate language \"" + code + "\"");
    }
  }
  for (std::size_t i = 0; i < m; ++i) {
    if ((*this)(i, i) != 1.0) {
      throw DataError("similarity matrix: diagonal entry for \"" + languages_[i] + "\" is not 1");
    }
    for (std::size_t j = 0; j < m; ++j) {
      const double v = (*this)(i, j);
      if (!std::isfinite(v) || v < -1.0 - kRangeSlack || v > 1.0 + kRangeSlack) {
        throw DataError("similarity matrix: entry (" + languages_[i] + ", " + languages_[j] +
                        ") is outside [-1, 1]");
      }
      if (v != (*this)(j, i)) {
        throw DataError("similarity matrix: asymmetric entry (" + languages_[i] + ", " + languages_[j] + ")");
      }
    }
  }
}

bool SimilarityMatrix::contains(std::string_view code) const {
  return std::find(languages_.begin(), languages_.end(), code) != languages_.end();
}

std::size_t SimilarityMatrix::index_of(std::string_view code) const {
  auto it = std::find(languages_.begin(), languages_.end(), code);
  if (it == languages_.end()) {
    throw DataError("language \"" + std::string(code) + "\" is not in the similarity matrix");
  }
  return static_cast<std::size_t>(it - languages_.begin());
}

SimilarityMatrix SimilarityMatrix::subset(const std::vector<std::string>& codes) const {
  std::vector<std::size_t> idx;
  idx.reserve(codes.size());
  for (const auto& c : codes) {
    idx.push_back(index_of(c));
  }
  std::vector<double> values(codes.size() * codes.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    for (std::size_t j = 0; j < idx.size(); ++j) {
      values[i * idx.size() + j] = (*this)(idx[i], idx[j]);
    }
  }
  return SimilarityMatrix(codes, std::move(values));
}

json SimilarityMatrix::to_json() const {
  json rows = json::array();
  for (std::size_t i = 0; i < size(); ++i) {
    auto r = row(i);
    rows.push_back(std::vector<double>(r.begin(), r.end()));
  }
  return {{"v", kSchemaVersion}, {"languages", languages_}, {"values", std::move(rows)}};
}

SimilarityMatrix SimilarityMatrix::from_json(const json& doc) {
  require_schema_version(doc, "similarity matrix");
  std::vector<std::string> languages;
  std::vector<double> values;
  try {
    languages = doc.at("languages").get<std::vector<std::string>>();
    const auto& rows = doc.at("values");
    if (!rows.is_array() || rows.size() != languages.size()) {
      throw DataError("similarity matrix: \"values\" must have one row per language");
    }
    for (const auto& r : rows) {
      auto row = r.get<std::vector<double>>();
      if (row.size() != languages.size()) {
        throw DataError("similarity matrix: ragged row in \"values\"");
      }
      values.insert(values.end(), row.begin(), row.end());
    }
  } catch (const json::exception& e) {
    throw DataError(std::string("similarity matrix: ") + e.what());
  }
  return SimilarityMatrix(std::move(languages), std::move(values));
}

std::string SimilarityMatrix::to_csv() const {
  std::ostringstream out;
  out.precision(17);
  out << "lang";
  for (const auto& c : languages_) {
    out << ',' << c;
  }
  out << '\n';
  for (std::size_t i = 0; i < size(); ++i) {
    out << languages_[i];
    for (std::size_t j = 0; j < size(); ++j) {
      out << ',' << (*this)(i, j);
    }
    out << '\n';
  }
  return out.str();
}

SimilarityMatrix build_matrix(const std::vector<LanguageRepresentation>& reps) {
  if (reps.size() < 2) {
    throw DataError("similarity matrix needs at least 2 representations, got " + std::to_string(reps.size()));
  }
  const std::size_t m = reps.size();
  const std::size_t dim = reps.front().vector.size();
  std::vector<std::string> languages;
  languages.reserve(m);
  for (const auto& r : reps) {
    if (r.vector.size() != dim) {
      throw DataError("representation \"" + r.language + "\" has dimension " + std::to_string(r.vector.size()) +
                      ", expected " + std::to_string(dim));
    }
    if (std::all_of(r.vector.begin(), r.vector.end(), [](float x) { return x == 0.0f; })) {
      throw DataError("representation \"" + r.language + "\" has zero norm");
    }
    languages.push_back(r.language);
  }
  std::vector<double> values(m * m, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    values[i * m + i] = 1.0;
    for (std::size_t j = i + 1; j < m; ++j) {
      const double c = cosine(std::span<const float>(reps[i].vector), std::span<const float>(reps[j].vector));
      values[i * m + j] = c;
      values[j * m + i] = c;
    }
  }
  return SimilarityMatrix(std::move(languages), std::move(values));
}

SimilarityMatrix load_matrix(const std::filesystem::path& path) {
  return SimilarityMatrix::from_json(read_json_file(path));
}

double pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) {
    throw DataError("pearson: length mismatch (" + std::to_string(xs.size()) + " vs " +
                    std::to_string(ys.size()) + ")");
  }
  if (xs.size() < 3) {
    throw DataError("pearson: need at least 3 points, got " + std::to_string(xs.size()));
  }
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (sxx == 0.0) {
    throw DataError("pearson: first sequence is constant");
  }
  if (syy == 0.0) {
    throw DataError("pearson: second sequence is constant");
  }
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

PairedSimilarities paired_similarity_vectors(const SimilarityMatrix& matrix,
                                             const LexicalSimilarityTable& table) {
  PairedSimilarities out;
  const auto& langs = matrix.languages();
  for (std::size_t i = 0; i < langs.size(); ++i) {
    for (std::size_t j = i + 1; j < langs.size(); ++j) {
      if (auto lex = table.get(langs[i], langs[j])) {
        out.pairs.emplace_back(langs[i], langs[j]);
        out.xs.push_back(matrix(i, j));
        out.ys.push_back(*lex);
      }
    }
  }
  if (out.pairs.size() < 3) {
    throw DataError("only " + std::to_string(out.pairs.size()) +
                    " language pair(s) shared by the similarity matrix and the lexical table; need at least 3");
  }
  return out;
}

}  // namespace sprachbund
