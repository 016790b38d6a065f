#include "gsub/manifest.hpp"

#include <openssl/evp.h>

#include "gsub/corpus.hpp"
#include "gsub/error.hpp"

namespace gsub {

namespace {

std::vector<FileDigest> digests_from_json(const nlohmann::ordered_json& j,
                                          const char* field) {
  if (!j.is_array()) {
    throw Error("invalid-manifest", std::string(field) + " must be an array");
  }
  std::vector<FileDigest> out;
  for (const auto& item : j) {
    if (!item.is_object() || item.size() != 2 || !item.contains("path") ||
        !item.contains("sha256") || !item["path"].is_string() ||
        !item["sha256"].is_string()) {
      throw Error("invalid-manifest",
                  std::string(field) + " entries must be {path, sha256}");
    }
    out.push_back(FileDigest{item["path"].get<std::string>(),
                             item["sha256"].get<std::string>()});
  }
  return out;
}

nlohmann::ordered_json digests_to_json(const std::vector<FileDigest>& v) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const FileDigest& d : v) {
    nlohmann::ordered_json item = nlohmann::ordered_json::object();
    item["path"] = d.path;
    item["sha256"] = d.sha256;
    arr.push_back(std::move(item));
  }
  return arr;
}

}  // namespace

const char* const kToolVersion = "0.1.0";

std::string sha256_hex(const std::string& bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(),
                 nullptr) != 1) {
    throw Error("io-error", "sha256 digest failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(hex[digest[i] >> 4]);
    out.push_back(hex[digest[i] & 0xf]);
  }
  return out;
}

std::string sha256_file(const std::string& path) {
  return sha256_hex(slurp_file(path));
}

nlohmann::ordered_json manifest_to_json(const RunManifest& m) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  j["tool"] = "gsub";
  j["tool_version"] = m.tool_version.empty() ? kToolVersion : m.tool_version;
  j["command"] = m.command;
  j["config"] = m.config;
  j["seed"] = m.seed;
  j["inputs"] = digests_to_json(m.inputs);
  j["outputs"] = digests_to_json(m.outputs);
  return j;
}

RunManifest manifest_from_json(const nlohmann::ordered_json& j) {
  if (!j.is_object()) {
    throw Error("invalid-manifest", "manifest must be a JSON object");
  }
  for (const char* key :
       {"tool", "tool_version", "command", "config", "seed", "inputs",
        "outputs"}) {
    if (!j.contains(key)) {
      throw Error("invalid-manifest", std::string("missing ") + key);
    }
  }
  if (j.size() != 7) {
    throw Error("invalid-manifest", "unknown keys present");
  }
  if (!j["tool"].is_string() || j["tool"].get<std::string>() != "gsub") {
    throw Error("invalid-manifest", "tool must be \"gsub\"");
  }
  if (!j["tool_version"].is_string()) {
    throw Error("invalid-manifest", "tool_version must be a string");
  }
  if (!j["command"].is_array()) {
    throw Error("invalid-manifest", "command must be an array of strings");
  }
  RunManifest m;
  m.tool_version = j["tool_version"].get<std::string>();
  for (const auto& part : j["command"]) {
    if (!part.is_string()) {
      throw Error("invalid-manifest", "command must be an array of strings");
    }
    m.command.push_back(part.get<std::string>());
  }
  if (!j["config"].is_object()) {
    throw Error("invalid-manifest", "config must be an object");
  }
  m.config = j["config"];
  if (!j["seed"].is_number_unsigned()) {
    throw Error("invalid-manifest", "seed must be an unsigned integer");
  }
  m.seed = j["seed"].get<std::uint64_t>();
  m.inputs = digests_from_json(j["inputs"], "inputs");
  m.outputs = digests_from_json(j["outputs"], "outputs");
  return m;
}

RunManifest read_manifest(const std::string& path) {
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(slurp_file(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw Error("parse-error", path + ": " + e.what());
  }
  return manifest_from_json(j);
}

}  // namespace gsub
