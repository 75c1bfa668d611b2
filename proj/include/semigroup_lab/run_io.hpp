#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace semigroup_lab {

// Canonical serialization: object keys sorted, floats printed with 17
// significant digits so the digest is a fixed point of parse + dump.
std::string canonical_dump(const nlohmann::json& j);
std::string config_digest(const nlohmann::json& config);

enum class RunStatus { ok = 0, claim_fail = 1, usage_error = 2, numerical_abort = 3 };
int exit_code(RunStatus status);

struct RunManifest {
  std::string command;
  std::string config_digest;
  std::uint64_t seed = 0;
  std::string tool_version;
  double wall_time_seconds = 0.0;
  std::vector<std::string> outputs;
  std::string error;  // empty on success

  nlohmann::json to_json() const;
};

// Atomic write (temp file + rename).
void write_text_atomic(const std::string& path, const std::string& text);
void write_json_atomic(const std::string& path, const nlohmann::json& j);

inline const char* tool_version() { return "0.1.0"; }

}  // namespace semigroup_lab
