#pragma once

#include <filesystem>
#include <map>
#include <string>

#include "ccr/cli/config.hpp"

namespace ccr::cli {

/// Lowercase hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

/// Config lines followed by `digest.<input> = <sha256>` for every input.
std::string provenance_text(const RunConfig& config);

/// `digest.*` entries of a provenance file, keyed by input flag name.
std::map<std::string, std::string> recorded_digests(const std::string& text);

inline constexpr const char* kProvenanceFile = "provenance.txt";

}  // namespace ccr::cli
