#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace sprachbund::cli {

enum ExitCode : int {
  kSuccess = 0,
  kUsage = 1,
  kDataError = 2,
  kServiceError = 3,
};

// Effective settings after merging the config file with flag overrides.
struct PipelineConfig {
  std::optional<std::filesystem::path> corpus;
  std::optional<std::filesystem::path> embeddings;
  std::optional<std::string> endpoint;
  std::optional<std::filesystem::path> registry;
  std::optional<std::filesystem::path> lexical;
  std::optional<std::filesystem::path> similarity;
  std::filesystem::path out = "workspace";
  std::size_t cap = 10000;
  std::uint64_t seed = 0;
  std::size_t k = 4;
  std::vector<std::size_t> sweep;
  std::vector<std::string> allow_missing;
  std::size_t batch = 32;
  double perplexity = 30.0;
  std::size_t iterations = 1000;
  std::vector<std::string> color_by{"family"};
  double point_radius = 6.0;
  double font_size = 12.0;

  // Settings that influence artifact contents; excludes the output directory.
  nlohmann::json to_json() const;
  std::string digest() const;
};

// Entry point shared by the executable and the tests. Never throws.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace sprachbund::cli
