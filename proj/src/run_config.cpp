#include "cergm/run_config.hpp"

#include <chrono>
#include <cstdio>
#include <ctime>

namespace cergm {

void to_json(nlohmann::json& j, const RunConfig& c) {
  j = {{"command", c.command},
       {"parameters", c.parameters},
       {"seed", c.seed},
       {"output_dir", c.output_dir},
       {"schema_version", c.schema_version}};
}

void from_json(const nlohmann::json& j, RunConfig& c) {
  j.at("command").get_to(c.command);
  c.parameters = j.at("parameters");
  j.at("seed").get_to(c.seed);
  j.at("output_dir").get_to(c.output_dir);
  j.at("schema_version").get_to(c.schema_version);
}

std::uint64_t fnv1a64(const std::string& bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

nlohmann::json make_output(const RunConfig& config, const nlohmann::json& result) {
  const nlohmann::json hashed = {{"config", config}, {"result", result}};
  char hex[17];
  std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a64(hashed.dump())));
  return {{"schema_version", kSchemaVersion},
          {"config", config},
          {"result", result},
          {"content_hash", hex},
          {"timestamp", utc_timestamp()}};
}

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace cergm
