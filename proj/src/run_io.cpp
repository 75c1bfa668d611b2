#include "semigroup_lab/run_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace semigroup_lab {

namespace {

void dump_canonical(const nlohmann::json& j, std::ostream& os) {
  switch (j.type()) {
    case nlohmann::json::value_t::object: {
      os << '{';
      bool first = true;
      for (auto it = j.begin(); it != j.end(); ++it) {  // std::map: keys sorted
        if (!first) os << ',';
        first = false;
        os << nlohmann::json(it.key()).dump() << ':';
        dump_canonical(it.value(), os);
      }
      os << '}';
      break;
    }
    case nlohmann::json::value_t::array: {
      os << '[';
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) os << ',';
        dump_canonical(j[i], os);
      }
      os << ']';
      break;
    }
    case nlohmann::json::value_t::number_float: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", j.get<double>());
      os << buf;
      break;
    }
    default:
      os << j.dump();
  }
}

}  // namespace

std::string canonical_dump(const nlohmann::json& j) {
  std::ostringstream os;
  dump_canonical(j, os);
  return os.str();
}

std::string config_digest(const nlohmann::json& config) {
  const std::string s = canonical_dump(config);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

int exit_code(RunStatus status) { return static_cast<int>(status); }

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  j["config_digest"] = config_digest;
  j["seed"] = seed;
  j["tool_version"] = tool_version;
  j["wall_time_seconds"] = wall_time_seconds;
  j["outputs"] = outputs;
  if (error.empty())
    j["error"] = nullptr;
  else
    j["error"] = error;
  return j;
}

void write_text_atomic(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp);
    if (!os) throw std::runtime_error("cannot open " + tmp);
    os << text;
  }
  std::filesystem::rename(tmp, path);
}

void write_json_atomic(const std::string& path, const nlohmann::json& j) {
  write_text_atomic(path, j.dump(2) + "\n");
}

}  // namespace semigroup_lab
