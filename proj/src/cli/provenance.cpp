#include "ccr/cli/provenance.hpp"

#include <openssl/evp.h>

#include <array>
#include <fstream>
#include <memory>

#include <fmt/format.h>

#include "ccr/error.hpp"

namespace ccr::cli {

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");

  const std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), &EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorKind::Io, "SHA-256 initialisation failed");
  }
  std::array<char, 1 << 16> buffer{};
  while (in) {
    in.read(buffer.data(), buffer.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buffer.data(), static_cast<std::size_t>(in.gcount()));
  }
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int length = 0;
  EVP_DigestFinal_ex(ctx.get(), digest.data(), &length);

  std::string hex;
  for (unsigned int i = 0; i < length; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

std::string provenance_text(const RunConfig& config) {
  std::string text = "# ccr run provenance; rerun with: ccr --config <this file>\n";
  text += serialize(config);
  const std::pair<const char*, const std::filesystem::path*> inputs[] = {
      {"embeddings", &config.inputs.embeddings},
      {"extended-embeddings", &config.inputs.extended_embeddings},
      {"interactions", &config.inputs.interactions},
      {"extended-interactions", &config.inputs.extended_interactions},
  };
  for (const auto& [key, path] : inputs) {
    if (path->empty() || !std::filesystem::is_regular_file(*path)) continue;
    text += fmt::format("digest.{} = {}\n", key, sha256_file(*path));
  }
  return text;
}

std::map<std::string, std::string> recorded_digests(const std::string& text) {
  std::map<std::string, std::string> out;
  for (const auto& [key, value] : parse_key_values(text)) {
    if (key.rfind("digest.", 0) == 0) out[key.substr(7)] = value;
  }
  return out;
}

}  // namespace ccr::cli
