#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

namespace cergm {

inline constexpr int kSchemaVersion = 1;

/// Everything needed to reproduce a CLI run.
struct RunConfig {
  std::string command;
  nlohmann::json parameters = nlohmann::json::object();
  std::uint64_t seed = 1;
  std::string output_dir = ".";
  int schema_version = kSchemaVersion;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

void to_json(nlohmann::json& j, const RunConfig& c);
void from_json(const nlohmann::json& j, RunConfig& c);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(const std::string& bytes);

/// {schema_version, config, result, content_hash, timestamp}; the hash covers
/// the serialized config and result only.
nlohmann::json make_output(const RunConfig& config, const nlohmann::json& result);

/// Current UTC time as 2024-01-31T12:00:00Z.
std::string utc_timestamp();

}  // namespace cergm
