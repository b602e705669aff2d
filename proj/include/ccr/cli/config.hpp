#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ccr/data.hpp"
#include "ccr/experiment.hpp"
#include "ccr/scoring.hpp"

namespace ccr::cli {

/// Everything a command needs. Serialized as `key = value` lines whose keys
/// are the long flag names, so a provenance file can be fed back with
/// `--config`.
struct RunConfig {
  std::string command;
  std::optional<Method> method;  // unset: evaluate runs both methods
  Experiment experiment = Experiment::Exp1ComfortTasteCuriosityIngredient;
  std::optional<Region> region;  // unset: every non-Japanese region
  BandwidthRule bandwidth = BandwidthRule::scott();
  bool shared_pca = false;
  std::uint64_t baseline_trials = 100000;
  std::uint64_t seed = 0;
  std::vector<int> ks{1, 3, 5};
  DatasetPaths inputs;
  std::filesystem::path out = "out";

  ExperimentConfig experiment_config() const;
};

/// Throws ccr::Error(Validation) naming the offending field.
void validate(const RunConfig& config, bool needs_inputs);

std::string serialize(const RunConfig& config);

/// Parses `key = value` text; blank lines and `#` comments are skipped.
std::vector<std::pair<std::string, std::string>> parse_key_values(const std::string& text);

std::vector<int> parse_k_list(const std::string& text);
std::string format_k_list(const std::vector<int>& ks);
BandwidthRule parse_bandwidth(const std::string& text);

}  // namespace ccr::cli
