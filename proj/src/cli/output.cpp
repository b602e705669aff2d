#include "ccr/cli/output.hpp"

#include <fstream>
#include <sstream>

#include <unistd.h>

#include <fmt/format.h>

#include "ccr/csv.hpp"
#include "ccr/error.hpp"

namespace ccr::cli {

void write_atomically(const std::filesystem::path& path, const std::function<void(std::ostream&)>& body) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto temp = path;
  temp += fmt::format(".tmp{}", ::getpid());
  {
    std::ofstream out(temp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::Io, "cannot write '" + temp.string() + "'");
    body(out);
    out.flush();
    if (!out) throw Error(ErrorKind::Io, "write failed for '" + temp.string() + "'");
  }
  std::filesystem::rename(temp, path);
}

void write_metric_csv(std::ostream& out, std::span<const MetricReport> reports) {
  csv::write_row(out, {"method", "experiment", "region", "K", "precision", "recall", "ndcg", "users_evaluated",
                       "users_skipped"});
  for (const auto& report : reports) {
    for (const auto& [k, v] : report.at_k) {
      csv::write_row(out, {report.method, std::string(to_string(report.experiment)), report.region,
                           std::to_string(k), fmt::format("{:.6f}", v.precision), fmt::format("{:.6f}", v.recall),
                           fmt::format("{:.6f}", v.ndcg), std::to_string(report.users_evaluated),
                           std::to_string(report.users_skipped)});
    }
  }
}

void write_roc_csv(std::ostream& out, const RocCurve& curve) {
  out << "fpr,tpr\n";
  for (const auto& p : curve.points) out << fmt::format("{:.10g},{:.10g}\n", p.fpr, p.tpr);
}

std::string auc_line(double auc) { return fmt::format("auc,{:.6f}\n", auc); }

std::filesystem::path auc_sidecar(const std::filesystem::path& roc_csv) {
  auto sidecar = roc_csv;
  sidecar.replace_extension(".auc");
  return sidecar;
}

RocCurve read_roc_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");
  const auto rows = csv::read_all(in);
  if (rows.empty()) throw Error(ErrorKind::Parse, path.string() + ": empty ROC file");
  const auto cols = csv::require_columns(rows.front(), {"fpr", "tpr"}, path.string());
  RocCurve curve;
  for (std::size_t r = 1; r < rows.size(); ++r) {
    const auto& row = rows[r];
    const auto at = fmt::format("{}:{}", path.string(), row.line);
    if (row.fields.size() <= std::max(cols[0], cols[1])) throw Error(ErrorKind::Parse, at + ": too few columns");
    const auto fpr = csv::parse_double(row.fields[cols[0]]);
    const auto tpr = csv::parse_double(row.fields[cols[1]]);
    if (!fpr || !tpr || *fpr < 0.0 || *fpr > 1.0 || *tpr < 0.0 || *tpr > 1.0) {
      throw Error(ErrorKind::Parse, at + ": fpr and tpr must be numbers in [0, 1]");
    }
    if (!curve.points.empty() && (*fpr < curve.points.back().fpr || *tpr < curve.points.back().tpr)) {
      throw Error(ErrorKind::Parse, at + ": ROC points must be nondecreasing");
    }
    curve.points.push_back({*fpr, *tpr});
  }
  if (curve.points.size() < 2) throw Error(ErrorKind::Parse, path.string() + ": ROC needs at least two points");
  curve.auc = trapezoid_auc(curve.points);

  std::ifstream side(auc_sidecar(path), std::ios::binary);
  if (side) {
    std::string line;
    std::getline(side, line);
    const auto comma = line.find(',');
    if (comma == std::string::npos || csv::trim(std::string_view(line).substr(0, comma)) != "auc") {
      throw Error(ErrorKind::Parse, auc_sidecar(path).string() + ": expected 'auc,<value>'");
    }
    const auto value = csv::parse_double(std::string_view(line).substr(comma + 1));
    if (!value) throw Error(ErrorKind::Parse, auc_sidecar(path).string() + ": malformed AUC value");
    curve.auc = *value;
  }
  return curve;
}

void write_wilcoxon_csv(std::ostream& out, const std::string& method, const std::string& experiment,
                        const WilcoxonResult* result) {
  csv::write_row(out, {"method", "experiment", "n_effective", "W", "z", "p_two_sided", "significant"});
  if (!result) {
    csv::write_row(out, {method, experiment, "0", "nan", "nan", "nan", "false"});
    return;
  }
  csv::write_row(out, {method, experiment, std::to_string(result->n_effective), fmt::format("{:.1f}", result->w),
                       fmt::format("{:.6f}", result->z), fmt::format("{:.8g}", result->p_two_sided),
                       result->significant ? "true" : "false"});
}

}  // namespace ccr::cli
