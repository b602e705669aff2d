#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "ccr/cli/config.hpp"

namespace ccr::cli {

enum ExitCode : int { kOk = 0, kFailure = 1, kInvalidInput = 2, kPartial = 3 };

/// Entry point behind the `ccr` binary. `args` excludes the program name.
/// Subcommands: rank, evaluate, baseline, plot. `--config FILE` supplies
/// `key = value` defaults that explicit flags override.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

int cmd_rank(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_evaluate(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_baseline(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_plot(const std::vector<std::string>& roc_files, const std::string& svg_path, const std::string& title,
             std::ostream& out, std::ostream& err);

}  // namespace ccr::cli
