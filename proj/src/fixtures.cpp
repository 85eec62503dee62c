#include "sprachbund/fixtures.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace sprachbund::fixtures {

namespace {

std::vector<std::string> split(const std::string& words) {
  std::istringstream in(words);
  std::vector<std::string> out;
  for (std::string w; in >> w;) {
    out.push_back(w);
  }
  return out;
}

struct FamilyRow {
  const char* family;
  const char* codes;
};

constexpr FamilyRow kFamilies[] = {
    {"Germanic", "af als bar cy da de en fy gd is lb nds nl nn no sco sv yi"},
    {"Greek", "el"},
    {"Japonic", "ja"},
    {"Sino-Tibetan", "my wuu zh"},
    {"Turkic", "az kk ky tr tt ug uz"},
    {"Uralic", "et fi hu"},
    {"Austroasiatic", "km vi war"},
    {"Dravidian", "kn ml ta te"},
    {"Slavic", "be bg bs cs hr lt lv mk pl ru sh sk sl sr uk"},
    {"Kartvelian", "ka"},
    {"Niger-Congo", "sw"},
    {"Austronesian", "ceb id jv mg ms su tl"},
    {"Armenian", "hy"},
    {"Koreanic", "ko"},
    {"Albanian", "sq"},
    {"Tai-Kadai", "lo th"},
    {"Romance", "an ast br ca es fr gl it la oc pt ro scn eu"},
    {"Constructed", "eo ia"},
    {"Afro-Asiatic", "am ar arz he so"},
    {"Celtic", "ga"},
    {"Indo-Aryan", "as bn ckb fa gu hi ku mr ne or pa ps"},
    {"Mongolic", "mn sa sd si ur"},
};

const char* const kLexicalLanguages[] = {"ca", "en", "fr", "de", "pt", "ro", "ru", "es"};

// Row-major over kLexicalLanguages; negative entries are missing data.
constexpr double kLexical[8][8] = {
    {1.00, -1, 0.85, -1, 0.85, 0.73, -1, 0.85},
    {-1, 1.00, 0.27, 0.60, -1, -1, 0.24, -1},
    {0.85, 0.27, 1.00, 0.28, 0.75, 0.75, -1, 0.75},
    {-1, 0.60, 0.28, 1.00, -1, -1, -1, -1},
    {0.85, -1, 0.75, -1, 1.00, 0.72, -1, 0.88},
    {0.73, -1, 0.75, -1, 0.72, 1.00, 0.72, 0.71},
    {-1, 0.24, -1, -1, -1, 0.72, 1.00, -1},
    {0.85, -1, 0.75, -1, 0.88, 0.71, -1, 1.00},
};

constexpr double kEmbedding[8][8] = {
    {1.00, 0.08, 0.76, 0.22, 0.63, 0.56, 0.23, 0.81},
    {0.08, 1.00, 0.26, 0.38, 0.28, 0.17, 0.31, 0.00},
    {0.76, 0.26, 1.00, 0.49, 0.63, 0.65, 0.47, 0.68},
    {0.22, 0.38, 0.49, 1.00, 0.47, 0.49, 0.59, 0.26},
    {0.63, 0.28, 0.63, 0.47, 1.00, 0.61, 0.45, 0.64},
    {0.56, 0.17, 0.65, 0.49, 0.61, 1.00, 0.48, 0.56},
    {0.23, 0.31, 0.47, 0.59, 0.45, 0.48, 1.00, 0.24},
    {0.81, 0.00, 0.68, 0.26, 0.64, 0.56, 0.24, 1.00},
};

}  // namespace

const Registry& languages() {
  static const Registry registry = [] {
    std::vector<LanguageRecord> records;
    std::set<std::string> families;
    for (const auto& row : kFamilies) {
      families.insert(row.family);
      for (auto& code : split(row.codes)) {
        records.push_back({std::move(code), std::string(row.family), {}});
      }
    }
    std::sort(records.begin(), records.end(), [](const auto& a, const auto& b) { return a.code < b.code; });
    return Registry(std::move(records), std::move(families));
  }();
  return registry;
}

const LexicalSimilarityTable& lexical_similarity() {
  static const LexicalSimilarityTable table = [] {
    LexicalSimilarityTable t;
    for (std::size_t i = 0; i < 8; ++i) {
      for (std::size_t j = i + 1; j < 8; ++j) {
        if (kLexical[i][j] >= 0.0) {
          t.insert(kLexicalLanguages[i], kLexicalLanguages[j], kLexical[i][j]);
        }
      }
    }
    return t;
  }();
  return table;
}

const SimilarityMatrix& embedding_similarity() {
  static const SimilarityMatrix matrix = [] {
    std::vector<std::string> langs(std::begin(kLexicalLanguages), std::end(kLexicalLanguages));
    std::vector<double> values;
    for (const auto& row : kEmbedding) {
      values.insert(values.end(), std::begin(row), std::end(row));
    }
    return SimilarityMatrix(std::move(langs), std::move(values));
  }();
  return matrix;
}

const std::vector<std::vector<std::string>>& published_sprachbunds() {
  static const std::vector<std::vector<std::string>> clusters = {
      split("af als an ast bar br ca ceb da de en eo es el fr fy ga gd gl ia it ku lb nds nl nn no oc pt ro scn "
            "sco sq sv tl ur war"),
      split("ar arz bg bs cy fa hi hr id is mg mk ms ps ru sh sl so sr su sw yi"),
      split("am as be ckb cs et eu fi he hu ja jv km la lo lt lv mr my ne or pa pl sa sd sk th uk wuu zh"),
      split("az bn gu hy ka kk kn ko ky ml mn si ta te tt ug uz vi tr"),
  };
  return clusters;
}

}  // namespace sprachbund::fixtures
