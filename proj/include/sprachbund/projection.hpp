#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "sprachbund/embedding.hpp"
#include "sprachbund/registry.hpp"

namespace sprachbund {

struct TsneParams {
  double perplexity = 30.0;
  std::size_t iterations = 1000;
  double learning_rate = 200.0;
  double exaggeration = 12.0;
  std::size_t exaggeration_iterations = 250;
  double initial_momentum = 0.5;
  double final_momentum = 0.8;
  double init_stddev = 1e-4;
  double min_gain = 0.01;
  std::uint64_t seed = 0;

  nlohmann::json to_json() const;
};

using Point2 = std::array<double, 2>;

struct ConditionalAffinities {
  std::vector<double> probabilities;  // p_{j|i}; the self entry is 0
  double beta = 1.0;                  // precision of the Gaussian kernel
  double entropy_bits = 0.0;
};

// Binary search on the kernel precision so the conditional distribution over
// the other points has entropy log2(perplexity). `distances` is one row of
// the distance matrix; `self` indexes the point itself.
ConditionalAffinities conditional_affinities(std::span<const double> distances, std::size_t self,
                                             double perplexity);

// Symmetrized joint affinities P = (P_cond + P_cond^T) / 2M, row-major M x M.
std::vector<double> joint_affinities(std::span<const double> distances, std::size_t m, double perplexity);

// Pairwise 1 - cos distances between representations, row-major.
std::vector<double> cosine_distances(const std::vector<LanguageRepresentation>& reps);

struct TsneResult {
  std::vector<Point2> points;
  // KL(P || Q) after every iteration (computed with the unexaggerated P).
  std::vector<double> kl_history;
};

// Exact t-SNE on a precomputed distance matrix. Requires M >= 4 and
// perplexity < (M - 1) / 3; throws DataError for identical inputs.
TsneResult tsne_distances(std::span<const double> distances, std::size_t m, const TsneParams& params);

// t-SNE on cosine distances between representations.
TsneResult tsne(const std::vector<LanguageRepresentation>& reps, const TsneParams& params);

struct Projection2D {
  std::vector<std::string> languages;
  std::vector<Point2> points;
  nlohmann::json params = nlohmann::json::object();

  nlohmann::json to_json() const;
  static Projection2D from_json(const nlohmann::json& doc);
};

// Per-axis (x - min) / (max - min); a constant axis maps to 0.5.
std::vector<Point2> minmax_normalize(std::span<const Point2> points);
Projection2D minmax_normalize(std::vector<std::string> languages, std::span<const Point2> points,
                              nlohmann::json params = nlohmann::json::object());

struct PlotStyle {
  double point_radius = 6.0;
  double font_size = 12.0;
};

struct PlotOutput {
  std::string svg;
  nlohmann::json data;
  std::vector<std::string> legend;  // categories in legend order
};

// Labeled scatter plot colored by "family" or a syntax feature name.
// Unlabeled languages are drawn gray and left out of the legend.
PlotOutput emit_plot(const Projection2D& projection, const Registry& registry, const std::string& color_by,
                     const PlotStyle& style = {});

}  // namespace sprachbund
