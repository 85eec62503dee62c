#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

namespace sprachbund {

inline constexpr int kSchemaVersion = 1;
inline constexpr std::string_view kToolVersion = "0.3.0";

// Reads and parses a JSON document, throwing DataError with the parser's
// position on failure.
nlohmann::json read_json_file(const std::filesystem::path& path);

// Pretty-printed with a trailing newline; output bytes depend only on `doc`.
void write_json_file(const std::filesystem::path& path, const nlohmann::json& doc);

void write_text_file(const std::filesystem::path& path, std::string_view text);
std::string read_text_file(const std::filesystem::path& path);

// Throws DataError unless doc["v"] == 1.
void require_schema_version(const nlohmann::json& doc, std::string_view what);

// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex_digest(std::string_view bytes);

}  // namespace sprachbund
