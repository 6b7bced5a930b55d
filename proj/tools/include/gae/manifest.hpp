#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

namespace gae {

struct RunManifest {
  std::string subcommand;
  std::uint64_t seed = 0;
  /// Resolved configuration, one entry per key.
  std::map<std::string, std::string> config;
  std::map<std::string, std::string> inputs;
  std::map<std::string, std::string> outputs;
  /// UTC, ISO 8601. Taken from SOURCE_DATE_EPOCH when that is set.
  std::string started_at;
};

std::string current_timestamp();

std::string manifest_json(const RunManifest& manifest);
void write_manifest(const RunManifest& manifest, const std::filesystem::path& path);

/// Splits `key = value` lines as produced by config_text.
std::map<std::string, std::string> config_entries(const std::string& text);

}  // namespace gae
