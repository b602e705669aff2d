#include "ccr/cli/config.hpp"

#include <sstream>

#include <fmt/format.h>

#include "ccr/csv.hpp"
#include "ccr/error.hpp"

namespace ccr::cli {

ExperimentConfig RunConfig::experiment_config() const {
  ExperimentConfig out;
  out.scoring.bandwidth = bandwidth;
  out.scoring.shared_pca = shared_pca;
  out.ks = ks;
  out.baseline_trials = baseline_trials;
  out.seed = seed;
  return out;
}

void validate(const RunConfig& config, bool needs_inputs) {
  if (config.ks.empty()) throw Error(ErrorKind::Validation, "--k: at least one K is required");
  for (const int k : config.ks) {
    if (k < 1) throw Error(ErrorKind::Validation, fmt::format("--k: K must be positive, got {}", k));
  }
  if (config.baseline_trials < 1) throw Error(ErrorKind::Validation, "--baseline-trials must be at least 1");
  if (config.bandwidth.fixed && !(*config.bandwidth.fixed > 0.0)) {
    throw Error(ErrorKind::Validation, "--bandwidth must be 'scott' or a positive number");
  }
  if (config.region && *config.region == Region::Japan) {
    throw Error(ErrorKind::Validation, "--region: Japan foods form the history, not a candidate region");
  }
  if (config.out.empty()) throw Error(ErrorKind::Validation, "--out is required");
  if (!needs_inputs) return;
  const std::pair<const char*, const std::filesystem::path*> inputs[] = {
      {"--embeddings", &config.inputs.embeddings},
      {"--extended-embeddings", &config.inputs.extended_embeddings},
      {"--interactions", &config.inputs.interactions},
      {"--extended-interactions", &config.inputs.extended_interactions},
  };
  for (const auto& [flag, path] : inputs) {
    if (path->empty()) throw Error(ErrorKind::Validation, fmt::format("{} is required", flag));
    if (!std::filesystem::is_regular_file(*path)) {
      throw Error(ErrorKind::Io, fmt::format("{}: cannot open '{}'", flag, path->string()));
    }
  }
}

std::string serialize(const RunConfig& config) {
  std::ostringstream out;
  out << "command = " << config.command << '\n';
  out << "method = " << (config.method ? std::string(to_string(*config.method)) : std::string("all")) << '\n';
  out << "experiment = " << to_string(config.experiment) << '\n';
  out << "region = " << (config.region ? std::string(to_string(*config.region)) : std::string("all")) << '\n';
  out << "bandwidth = " << config.bandwidth.describe() << '\n';
  out << "shared-pca = " << (config.shared_pca ? "true" : "false") << '\n';
  out << "baseline-trials = " << config.baseline_trials << '\n';
  out << "seed = " << config.seed << '\n';
  out << "k = " << format_k_list(config.ks) << '\n';
  out << "embeddings = " << config.inputs.embeddings.string() << '\n';
  out << "extended-embeddings = " << config.inputs.extended_embeddings.string() << '\n';
  out << "interactions = " << config.inputs.interactions.string() << '\n';
  out << "extended-interactions = " << config.inputs.extended_interactions.string() << '\n';
  out << "out = " << config.out.string() << '\n';
  return out.str();
}

std::vector<std::pair<std::string, std::string>> parse_key_values(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto trimmed = csv::trim(line);
    if (trimmed.empty() || trimmed.front() == '#') continue;
    const auto eq = trimmed.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::Parse, fmt::format("config line {}: expected 'key = value'", line_no));
    }
    out.emplace_back(std::string(csv::trim(trimmed.substr(0, eq))), std::string(csv::trim(trimmed.substr(eq + 1))));
  }
  return out;
}

std::vector<int> parse_k_list(const std::string& text) {
  std::vector<int> ks;
  std::string token;
  std::istringstream in(text);
  while (std::getline(in, token, ',')) {
    const auto value = csv::parse_int(token);
    if (!value || *value < 1 || *value > 1000000) {
      throw Error(ErrorKind::Validation, fmt::format("--k: '{}' is not a positive integer", token));
    }
    ks.push_back(static_cast<int>(*value));
  }
  if (ks.empty()) throw Error(ErrorKind::Validation, "--k: empty list");
  return ks;
}

std::string format_k_list(const std::vector<int>& ks) {
  std::string out;
  for (std::size_t i = 0; i < ks.size(); ++i) out += (i ? "," : "") + std::to_string(ks[i]);
  return out;
}

BandwidthRule parse_bandwidth(const std::string& text) {
  if (csv::trim(text) == "scott") return BandwidthRule::scott();
  const auto value = csv::parse_double(text);
  if (!value || !(*value > 0.0) || !std::isfinite(*value)) {
    throw Error(ErrorKind::Validation, fmt::format("--bandwidth: expected 'scott' or a positive number, got '{}'", text));
  }
  return BandwidthRule::fixed_scalar(*value);
}

}  // namespace ccr::cli
