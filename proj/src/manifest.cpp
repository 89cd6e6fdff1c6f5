#include <fstream>
#include <stdexcept>

#include <openssl/evp.h>

#include "t2t/scenarios.hpp"

namespace t2t::scenarios {

std::string sha256_hex(std::string_view data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[md[i] >> 4];
    out += kHex[md[i] & 0xF];
  }
  return out;
}

json make_manifest(const json& config, const RunResult& result) {
  json files = json::array();
  std::string digest_input;
  for (const auto& f : result.files) {
    const std::string h = sha256_hex(f.content);
    files.push_back({{"name", f.name}, {"bytes", f.content.size()}, {"sha256", h}});
    digest_input += f.name + ':' + h + '\n';
  }
  json m;
  m["tool"] = kToolName;
  m["version"] = kToolVersion;
  m["scenario"] = config.at("scenario");
  m["seed"] = config.at("seed");
  m["config"] = config;
  m["files"] = files;
  m["content_hash"] = sha256_hex(digest_input);
  return m;
}

void write_outputs(const std::filesystem::path& dir, const json& config, const RunResult& result) {
  std::filesystem::create_directories(dir);
  auto write = [&](const std::string& name, const std::string& content) {
    std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + (dir / name).string());
    out << content;
    if (!out) throw std::runtime_error("write failed for " + (dir / name).string());
  };
  for (const auto& f : result.files) write(f.name, f.content);
  write("manifest.json", make_manifest(config, result).dump(2) + "\n");
}

}  // namespace t2t::scenarios
