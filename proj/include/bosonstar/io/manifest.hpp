#pragma once

#include <openssl/evp.h>

#include <filesystem>
#include <map>
#include <string>

#include "bosonstar/io/serialize.hpp"

namespace bosonstar::io {

inline constexpr const char* kArtifactVersion = "1.0.0";

inline std::string sha256_hex(const std::string& data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw NumericalError("sha256 digest failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

inline std::string file_digest(const std::string& path) { return sha256_hex(read_text(path)); }

struct RunManifest {
  json config;
  std::string version = kArtifactVersion;
  double wall_clock_seconds = 0.0;
  std::map<std::string, std::string> inputs;   // path → sha256
  std::map<std::string, std::string> outputs;  // name relative to the manifest → sha256
  int exit_code = 0;
};

inline json manifest_to_json(const RunManifest& m) {
  return {{"config", m.config},   {"version", m.version}, {"wall_clock_seconds", m.wall_clock_seconds},
          {"inputs", m.inputs},   {"outputs", m.outputs}, {"exit_code", m.exit_code}};
}

inline RunManifest manifest_from_json(const json& j) {
  RunManifest m;
  try {
    m.config = j.at("config");
    m.version = j.at("version").get<std::string>();
    m.wall_clock_seconds = j.at("wall_clock_seconds").get<double>();
    m.inputs = j.at("inputs").get<std::map<std::string, std::string>>();
    m.outputs = j.at("outputs").get<std::map<std::string, std::string>>();
    m.exit_code = j.at("exit_code").get<int>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("manifest: ") + e.what());
  }
  return m;
}

/// Names of outputs (relative to dir) and inputs whose current digest differs from the record.
inline std::vector<std::string> verify_manifest(const RunManifest& m, const std::filesystem::path& dir) {
  std::vector<std::string> bad;
  for (const auto& [name, digest] : m.outputs) {
    const auto p = dir / name;
    if (!std::filesystem::exists(p) || file_digest(p.string()) != digest) bad.push_back(name);
  }
  for (const auto& [path, digest] : m.inputs)
    if (!std::filesystem::exists(path) || file_digest(path) != digest) bad.push_back(path);
  return bad;
}

}  // namespace bosonstar::io
