#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "sgvqa/errors.hpp"

namespace sgvqa {

// ordered_json keeps insertion order on dump, which is what makes output
// files byte-stable across runs.
using Json = nlohmann::ordered_json;

inline constexpr const char* kFormatVersion = "1";
inline constexpr const char* kToolName = "sgvqa";
inline constexpr const char* kToolVersion = "0.1.0";

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::ParseError, path + ": " + e.what());
  }
  return j;
}

inline void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::Io, "cannot write " + path);
  out << j.dump(2) << '\n';
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path);
}

/// FNV-1a over the canonical dump; used as the provenance config digest.
inline std::string json_digest(const Json& j) {
  const std::string s = j.dump();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf);
}

}  // namespace sgvqa
