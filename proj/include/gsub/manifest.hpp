#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace gsub {

extern const char* const kToolVersion;

std::string sha256_hex(const std::string& bytes);
// Error{"io-error"} when the path cannot be read.
std::string sha256_file(const std::string& path);

struct FileDigest {
  std::string path;
  std::string sha256;
};

// Written beside every writing command's outputs; rerunning the recorded
// command must reproduce the recorded output digests byte for byte. The
// command echo carries the effective seed, so a rerun ignores GSUB_SEED.
struct RunManifest {
  std::vector<std::string> command;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  std::uint64_t seed = 0;
  std::vector<FileDigest> inputs;
  std::string tool_version;
  std::vector<FileDigest> outputs;
};

nlohmann::ordered_json manifest_to_json(const RunManifest& m);
// Strict; throws Error{"invalid-manifest"} on shape violations.
RunManifest manifest_from_json(const nlohmann::ordered_json& j);
// Errors: io-error, parse-error, invalid-manifest.
RunManifest read_manifest(const std::string& path);

}  // namespace gsub
