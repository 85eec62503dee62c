#include "sprachbund/analysis.hpp"

#include <cstdio>

#include "sprachbund/error.hpp"
#include "sprachbund/io.hpp"

namespace sprachbund {

using nlohmann::json;

LexicalCorrelation lexical_correlation(const SimilarityMatrix& matrix, const LexicalSimilarityTable& table) {
  const auto paired = paired_similarity_vectors(matrix, table);
  return {pearson(paired.xs, paired.ys), paired.pairs.size()};
}

namespace {

template <class LabelOf>
AgreementSummary majority_agreement(const SprachbundAssignment& assignment, const Registry& registry,
                                    std::string attribute, LabelOf label_of) {
  AgreementSummary summary{std::move(attribute), {}, std::nullopt};
  double sum = 0.0;
  std::size_t counted = 0;
  for (const auto& members : assignment.clusters) {
    ClusterAgreement c;
    c.members = members;
    std::map<std::string, std::size_t> counts;
    for (const auto& code : members) {
      const auto label = label_of(registry.lookup(code));
      if (label) {
        ++counts[*label];
        ++c.labeled;
      } else {
        ++c.unlabeled;
      }
    }
    for (const auto& [label, n] : counts) {
      if (n > c.majority_count) {
        c.majority = label;
        c.majority_count = n;
      }
    }
    if (c.labeled > 0) {
      c.fraction = static_cast<double>(c.majority_count) / static_cast<double>(c.labeled);
      sum += *c.fraction;
      ++counted;
    }
    summary.clusters.push_back(std::move(c));
  }
  if (counted > 0) {
    summary.macro_average = sum / static_cast<double>(counted);
  }
  return summary;
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }
json optional_json(const std::optional<std::string>& v) { return v ? json(*v) : json(nullptr); }

std::string fixed(double v, int digits) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

AgreementSummary family_purity(const SprachbundAssignment& assignment, const Registry& registry) {
  return majority_agreement(assignment, registry, "family",
                            [](const LanguageRecord& r) { return r.family; });
}

AgreementSummary syntax_agreement(const SprachbundAssignment& assignment, const Registry& registry,
                                  const std::string& feature) {
  if (!registry.feature_names().contains(feature)) {
    throw UsageError("unknown syntax feature \"" + feature + "\"");
  }
  return majority_agreement(assignment, registry, feature,
                            [&](const LanguageRecord& r) { return r.feature(feature); });
}

json AgreementSummary::to_json() const {
  json list = json::array();
  for (const auto& c : clusters) {
    list.push_back({{"members", c.members},
                    {"majority", optional_json(c.majority)},
                    {"majority_count", c.majority_count},
                    {"labeled", c.labeled},
                    {"excluded", c.unlabeled},
                    {"fraction", optional_json(c.fraction)}});
  }
  return {{"attribute", attribute}, {"clusters", std::move(list)}, {"macro_average", optional_json(macro_average)}};
}

json AnalysisReport::to_json() const {
  json doc{{"v", kSchemaVersion}};
  if (pearson_lexical) {
    doc["pearson_lexical"] = {{"r", pearson_lexical->r}, {"pairs", pearson_lexical->pairs}};
  } else {
    doc["pearson_lexical"] = nullptr;
  }
  if (pearson_note) {
    doc["pearson_note"] = *pearson_note;
  }
  doc["family_purity"] = family_purity ? family_purity->to_json() : json(nullptr);
  json syntax = json::array();
  for (const auto& s : syntax_agreement) {
    syntax.push_back(s.to_json());
  }
  doc["syntax_agreement"] = std::move(syntax);
  return doc;
}

std::string AnalysisReport::to_table() const {
  std::string out;
  out += "lexical correlation: ";
  if (pearson_lexical) {
    out += "r = " + fixed(pearson_lexical->r, 4) + " over " + std::to_string(pearson_lexical->pairs) + " pairs\n";
  } else {
    out += "n/a" + (pearson_note ? " (" + *pearson_note + ")" : std::string()) + "\n";
  }
  auto section = [&](const AgreementSummary& s) {
    out += "\n" + s.attribute + " agreement (majority fraction over labeled members)\n";
    out += "  cluster  size  labeled  majority              fraction\n";
    for (std::size_t i = 0; i < s.clusters.size(); ++i) {
      const auto& c = s.clusters[i];
      char line[160];
      std::snprintf(line, sizeof line, "  #%-7zu %-5zu %-8zu %-21s %s\n", i + 1, c.members.size(), c.labeled,
                    c.majority ? c.majority->c_str() : "-", c.fraction ? fixed(*c.fraction, 3).c_str() : "n/a");
      out += line;
    }
    out += "  macro average: " + (s.macro_average ? fixed(*s.macro_average, 3) : std::string("n/a")) + "\n";
  };
  if (family_purity) {
    section(*family_purity);
  }
  for (const auto& s : syntax_agreement) {
    section(s);
  }
  return out;
}

}  // namespace sprachbund
