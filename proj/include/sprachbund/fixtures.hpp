#pragma once

#include <array>
#include <string>
#include <vector>

#include "sprachbund/registry.hpp"
#include "sprachbund/simmatrix.hpp"

namespace sprachbund::fixtures {

// The 108 pretraining languages with their 22 family labels. Syntax labels
// are not bundled; supply them through a registry file.
const Registry& languages();

// Ethnologue lexical similarities among ca, en, fr, de, pt, ro, ru, es.
// Pairs without published data are absent.
const LexicalSimilarityTable& lexical_similarity();

// Embedding cosine similarities among the same eight languages.
const SimilarityMatrix& embedding_similarity();

// The four sprachbunds found over the 108 languages, as published.
const std::vector<std::vector<std::string>>& published_sprachbunds();

}  // namespace sprachbund::fixtures
