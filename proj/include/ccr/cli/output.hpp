#pragma once

#include <filesystem>
#include <functional>
#include <ostream>
#include <span>
#include <string>

#include "ccr/metrics.hpp"
#include "ccr/roc.hpp"
#include "ccr/wilcoxon.hpp"

namespace ccr::cli {

/// Writes through a temporary sibling file and renames it into place.
void write_atomically(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body);

/// method,experiment,region,K,precision,recall,ndcg,users_evaluated,users_skipped
void write_metric_csv(std::ostream& out, std::span<const MetricReport> reports);

/// fpr,tpr rows.
void write_roc_csv(std::ostream& out, const RocCurve& curve);
/// Sidecar content: a single `auc,<value>` line.
std::string auc_line(double auc);
std::filesystem::path auc_sidecar(const std::filesystem::path& roc_csv);

/// Reads a `fpr,tpr` file; the AUC comes from the sidecar when present,
/// otherwise from the trapezoid rule.
RocCurve read_roc_csv(const std::filesystem::path& path);

/// method,experiment,n_effective,W,z,p_two_sided,significant
void write_wilcoxon_csv(std::ostream& out, const std::string& method, const std::string& experiment,
                        const WilcoxonResult* result);

}  // namespace ccr::cli
