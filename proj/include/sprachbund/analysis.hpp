#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sprachbund/cluster.hpp"
#include "sprachbund/registry.hpp"
#include "sprachbund/simmatrix.hpp"

namespace sprachbund {

struct LexicalCorrelation {
  double r = 0.0;
  std::size_t pairs = 0;
};

// Pearson r between matrix and table over their shared off-diagonal pairs.
LexicalCorrelation lexical_correlation(const SimilarityMatrix& matrix, const LexicalSimilarityTable& table);

struct ClusterAgreement {
  std::vector<std::string> members;
  std::optional<std::string> majority;  // smallest label among ties
  std::size_t majority_count = 0;
  std::size_t labeled = 0;
  std::size_t unlabeled = 0;            // excluded from the fraction
  std::optional<double> fraction;       // null when nothing is labeled
};

struct AgreementSummary {
  std::string attribute;  // "family" or the feature name
  std::vector<ClusterAgreement> clusters;
  // Mean over clusters with a non-null fraction.
  std::optional<double> macro_average;

  nlohmann::json to_json() const;
};

// Majority-family fraction per cluster, over members with a family label.
AgreementSummary family_purity(const SprachbundAssignment& assignment, const Registry& registry);

// Majority-value fraction per cluster for one syntax feature. Throws
// UsageError for a feature name the registry does not know.
AgreementSummary syntax_agreement(const SprachbundAssignment& assignment, const Registry& registry,
                                  const std::string& feature);

struct AnalysisReport {
  std::optional<LexicalCorrelation> pearson_lexical;
  std::optional<std::string> pearson_note;  // why the correlation is absent
  std::optional<AgreementSummary> family_purity;
  std::vector<AgreementSummary> syntax_agreement;

  nlohmann::json to_json() const;
  std::string to_table() const;
};

}  // namespace sprachbund
