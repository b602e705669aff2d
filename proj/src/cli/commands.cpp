#include "ccr/cli/commands.hpp"

#include <algorithm>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "ccr/cli/log.hpp"
#include "ccr/cli/output.hpp"
#include "ccr/cli/provenance.hpp"
#include "ccr/cli/svg.hpp"
#include "ccr/error.hpp"
#include "ccr/experiment.hpp"
#include "ccr/ranking.hpp"

namespace ccr::cli {

namespace {

const std::set<std::string> kCommands = {"rank", "evaluate", "baseline", "plot"};

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::Parse:
    case ErrorKind::Validation:
    case ErrorKind::Io:
      return kInvalidInput;
    default:
      return kFailure;
  }
}

std::string region_slug(Region region) {
  std::string slug;
  for (const char c : to_string(region)) slug.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  return slug;
}

std::vector<Region> selected_regions(const RunConfig& config, const Dataset& dataset) {
  if (config.region) return {*config.region};
  return target_regions(dataset.all_food);
}

void write_provenance(const RunConfig& config) {
  const auto text = provenance_text(config);
  write_atomically(config.out / kProvenanceFile, [&](std::ostream& o) { o << text; });
}

int report_insufficient(const std::vector<std::string>& workers, std::ostream& err) {
  if (workers.empty()) return kOk;
  err << fmt::format("{} user(s) skipped for insufficient history (fewer than 3 foods):", workers.size());
  for (const auto& w : workers) err << ' ' << w;
  err << '\n';
  return kPartial;
}

/// Turns `--config FILE` into explicit flags placed before the user's own,
/// so later (user) occurrences win.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::optional<std::string> config_path;
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw Error(ErrorKind::Validation, "--config needs a file argument");
      config_path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (!config_path) return args;

  std::ifstream in(*config_path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open config '" + *config_path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const auto text = buffer.str();

  std::optional<std::string> command;
  std::vector<std::string> flags;
  static const std::set<std::string> known = {"method",        "experiment",          "region", "bandwidth",
                                              "shared-pca",    "baseline-trials",     "seed",   "k",
                                              "embeddings",    "extended-embeddings", "interactions",
                                              "extended-interactions", "out"};
  for (const auto& [key, value] : parse_key_values(text)) {
    if (key == "command") {
      command = value;
    } else if (key.rfind("digest.", 0) == 0) {
      continue;
    } else if (known.count(key)) {
      if ((key == "method" || key == "region") && value == "all") continue;
      if (value.empty()) continue;
      flags.push_back(fmt::format("--{}={}", key, value));
    } else {
      throw Error(ErrorKind::Validation, fmt::format("config '{}': unknown key '{}'", *config_path, key));
    }
  }

  // Inputs whose digest changed since the provenance file was written.
  for (const auto& [key, digest] : recorded_digests(text)) {
    for (const auto& [k, v] : parse_key_values(text)) {
      if (k != key || v.empty() || !std::filesystem::is_regular_file(v)) continue;
      if (sha256_file(v) != digest) log(LogLevel::Warn, "input '{}' changed since the config was recorded", v);
    }
  }

  std::vector<std::string> expanded;
  auto it = std::find_if(rest.begin(), rest.end(), [](const std::string& a) { return kCommands.count(a) > 0; });
  if (it == rest.end()) {
    if (!command) throw Error(ErrorKind::Validation, "no subcommand given and config has no 'command' key");
    expanded.push_back(*command);
    expanded.insert(expanded.end(), flags.begin(), flags.end());
    expanded.insert(expanded.end(), rest.begin(), rest.end());
  } else {
    expanded.insert(expanded.end(), rest.begin(), it + 1);
    expanded.insert(expanded.end(), flags.begin(), flags.end());
    expanded.insert(expanded.end(), it + 1, rest.end());
  }
  return expanded;
}

struct RawOptions {
  std::string method = "all";
  std::string experiment = "exp1";
  std::string region = "all";
  std::string bandwidth = "scott";
  bool shared_pca = false;
  std::uint64_t baseline_trials = 100000;
  std::uint64_t seed = 0;
  std::string ks = "1,3,5";
  std::string embeddings, extended_embeddings, interactions, extended_interactions;
  std::string out = "out";

  RunConfig to_config(const std::string& command) const {
    RunConfig config;
    config.command = command;
    if (method != "all") config.method = parse_method(method);
    config.experiment = parse_experiment(experiment);
    if (region != "all") config.region = parse_region(region);
    config.bandwidth = parse_bandwidth(bandwidth);
    config.shared_pca = shared_pca;
    config.baseline_trials = baseline_trials;
    config.seed = seed;
    config.ks = parse_k_list(ks);
    config.inputs = {embeddings, extended_embeddings, interactions, extended_interactions};
    config.out = out;
    return config;
  }
};

void add_run_options(CLI::App& sub, RawOptions& raw, bool with_method) {
  auto take_last = [](CLI::Option* o) { o->multi_option_policy(CLI::MultiOptionPolicy::TakeLast); };
  if (with_method) take_last(sub.add_option("--method", raw.method, "kds, mds (evaluate: default both)"));
  take_last(sub.add_option("--experiment", raw.experiment, "exp1 (comfort=taste) or exp2 (comfort=ingredient)"));
  take_last(sub.add_option("--region", raw.region, "southeast_asia, china, europe, other (default all)"));
  take_last(sub.add_option("--embeddings", raw.embeddings, "Survey food embeddings (CSV or JSONL)"));
  take_last(sub.add_option("--extended-embeddings", raw.extended_embeddings, "Extended food embeddings"));
  take_last(sub.add_option("--interactions", raw.interactions, "worker/food survey answers CSV"));
  take_last(sub.add_option("--extended-interactions", raw.extended_interactions, "worker/extended food CSV"));
  take_last(sub.add_option("--out", raw.out, "Output directory"));
  take_last(sub.add_option("--seed", raw.seed, "Baseline random seed"));
  take_last(sub.add_option("--baseline-trials", raw.baseline_trials, "Random permutations per user"));
  take_last(sub.add_option("--bandwidth", raw.bandwidth, "KDE bandwidth: scott or a positive number"));
  take_last(sub.add_flag("--shared-pca", raw.shared_pca, "Fit PCA once on history and all candidates"));
  take_last(sub.add_option("--k", raw.ks, "Comma-separated cutoffs"));
}

}  // namespace

int cmd_rank(const RunConfig& config, std::ostream& out, std::ostream& err) {
  validate(config, true);
  const auto dataset = load_dataset(config.inputs);
  const auto method = config.method.value_or(Method::Mds);
  const auto scoring = config.experiment_config().scoring;

  std::vector<RankingRun> runs;
  std::vector<std::string> insufficient;
  for (const auto region : selected_regions(config, dataset)) {
    std::vector<UserContext> contexts;
    for (const auto& worker : workers_in_region(dataset, region)) {
      try {
        contexts.push_back(build_user_context(worker, dataset, region));
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::InsufficientHistory) throw;
        insufficient.push_back(worker);
      }
    }
    const auto count = static_cast<std::ptrdiff_t>(contexts.size());
    std::vector<std::optional<RankingRun>> region_runs(contexts.size());
    std::vector<std::string> failures(contexts.size());
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t u = 0; u < count; ++u) {
      try {
        region_runs[u] = rank_user(contexts[u], method, config.experiment, scoring);
      } catch (const std::exception& e) {
        failures[u] = e.what();
      }
    }
    for (std::size_t u = 0; u < contexts.size(); ++u) {
      if (region_runs[u]) {
        runs.push_back(std::move(*region_runs[u]));
      } else {
        err << fmt::format("user {} not ranked: {}\n", contexts[u].worker_id, failures[u]);
        insufficient.push_back(contexts[u].worker_id);
      }
    }
  }

  write_atomically(config.out / "rankings.csv", [&](std::ostream& o) { write_ranking_csv(o, runs); });
  write_provenance(config);
  out << fmt::format("ranked {} user(s) with {} ({}) -> {}\n", runs.size(), to_string(method),
                     to_string(config.experiment), (config.out / "rankings.csv").string());
  return report_insufficient(insufficient, err);
}

int cmd_baseline(const RunConfig& config, std::ostream& out, std::ostream& err) {
  validate(config, true);
  const auto dataset = load_dataset(config.inputs);
  const auto experiment_config = config.experiment_config();

  std::vector<MetricReport> reports;
  std::vector<std::string> insufficient;
  for (const auto region : selected_regions(config, dataset)) {
    const auto data = prepare_region(dataset, region, config.experiment, config.ks);
    insufficient.insert(insufficient.end(), data.insufficient_history.begin(), data.insufficient_history.end());
    reports.push_back(evaluate_baseline(data, experiment_config));
  }
  reports.push_back(combine_reports(reports, "all"));
  reports.back().method = "baseline";
  write_atomically(config.out / "metrics_baseline.csv", [&](std::ostream& o) { write_metric_csv(o, reports); });
  write_provenance(config);
  out << fmt::format("baseline over {} trial(s) -> {}\n", config.baseline_trials,
                     (config.out / "metrics_baseline.csv").string());
  return report_insufficient(insufficient, err);
}

int cmd_evaluate(const RunConfig& config, std::ostream& out, std::ostream& err) {
  validate(config, true);
  const auto dataset = load_dataset(config.inputs);
  const auto experiment_config = config.experiment_config();
  const auto experiment_name = std::string(to_string(config.experiment));

  std::vector<RegionData> regions;
  std::vector<MetricReport> baseline;
  std::vector<std::string> insufficient;
  for (const auto region : selected_regions(config, dataset)) {
    regions.push_back(prepare_region(dataset, region, config.experiment, config.ks));
    const auto& data = regions.back();
    insufficient.insert(insufficient.end(), data.insufficient_history.begin(), data.insufficient_history.end());
    log(LogLevel::Info, "{}: {} users, {} evaluable", to_string(region), data.total_users, data.contexts.size());
    baseline.push_back(evaluate_baseline(data, experiment_config));
  }

  std::vector<Method> methods;
  if (config.method) {
    methods.push_back(*config.method);
  } else {
    methods = {Method::Kds, Method::Mds};
  }

  for (const auto method : methods) {
    const auto name = std::string(to_string(method));
    const auto report = run_experiment(regions, method, experiment_config, &baseline);

    std::vector<MetricReport> rows;
    for (const auto& r : report.regions) rows.push_back(r.report);
    rows.push_back(report.all_regions);
    write_atomically(config.out / fmt::format("metrics_{}.csv", name),
                     [&](std::ostream& o) { write_metric_csv(o, rows); });

    std::vector<LabeledCurve> plotted;
    auto emit_roc = [&](const std::string& suffix, const RocCurve& curve) {
      const auto path = config.out / fmt::format("roc_{}_{}.csv", name, suffix);
      write_atomically(path, [&](std::ostream& o) { write_roc_csv(o, curve); });
      write_atomically(auc_sidecar(path), [&](std::ostream& o) { o << auc_line(curve.auc); });
      plotted.push_back({suffix, curve});
    };
    for (const auto& r : report.regions) {
      if (r.roc) emit_roc(region_slug(r.region), *r.roc);
    }
    if (report.average_roc) emit_roc("average", *report.average_roc);
    write_atomically(config.out / fmt::format("roc_{}.svg", name), [&](std::ostream& o) {
      o << render_roc_svg(plotted, fmt::format("ROC curve: {} {}", name, experiment_name));
    });

    if (!report.wilcoxon) log(LogLevel::Warn, "{} Wilcoxon test skipped: {}", name, report.wilcoxon_error);
    write_atomically(config.out / fmt::format("wilcoxon_{}.csv", name), [&](std::ostream& o) {
      write_wilcoxon_csv(o, name, experiment_name, report.wilcoxon ? &*report.wilcoxon : nullptr);
    });

    out << fmt::format("{} {}:", name, experiment_name);
    for (const auto& [k, v] : report.all_regions.at_k) {
      out << fmt::format(" P@{0}={1:.4f} R@{0}={2:.4f} NDCG@{0}={3:.4f}", k, v.precision, v.recall, v.ndcg);
    }
    if (report.average_roc) out << fmt::format(" AUC(avg)={:.4f}", report.average_roc->auc);
    if (report.wilcoxon) out << fmt::format(" p={:.4g}", report.wilcoxon->p_two_sided);
    out << '\n';
  }

  std::vector<MetricReport> baseline_rows = baseline;
  baseline_rows.push_back(combine_reports(baseline, "all"));
  baseline_rows.back().method = "baseline";
  write_atomically(config.out / "metrics_baseline.csv", [&](std::ostream& o) { write_metric_csv(o, baseline_rows); });
  write_provenance(config);
  out << fmt::format("outputs written to {}\n", config.out.string());
  return report_insufficient(insufficient, err);
}

int cmd_plot(const std::vector<std::string>& roc_files, const std::string& svg_path, const std::string& title,
             std::ostream& out, std::ostream& /*err*/) {
  if (roc_files.empty()) throw Error(ErrorKind::Validation, "plot: at least one ROC CSV is required");
  std::vector<LabeledCurve> curves;
  for (const auto& file : roc_files) {
    curves.push_back({std::filesystem::path(file).stem().string(), read_roc_csv(file)});
  }
  write_atomically(svg_path, [&](std::ostream& o) { o << render_roc_svg(curves, title); });
  out << fmt::format("plotted {} curve(s) -> {}\n", curves.size(), svg_path);
  return kOk;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  try {
    const auto expanded = expand_config(args);

    CLI::App app{"Comfort/curiosity food recommendation: scoring, ranking and evaluation"};
    app.require_subcommand(1);
    RawOptions raw;
    auto* rank = app.add_subcommand("rank", "Rank every candidate food per user");
    add_run_options(*rank, raw, true);
    auto* evaluate = app.add_subcommand("evaluate", "Metrics, ROC curves and signed-rank tests");
    add_run_options(*evaluate, raw, true);
    auto* baseline = app.add_subcommand("baseline", "Random-ranking baseline metrics");
    add_run_options(*baseline, raw, false);
    auto* plot = app.add_subcommand("plot", "Render ROC CSV files as one SVG");
    std::vector<std::string> roc_files;
    std::string svg_path = "roc.svg";
    std::string title = "ROC curve";
    plot->add_option("curves", roc_files, "ROC CSV files (fpr,tpr)");
    plot->add_option("--out", svg_path, "SVG output path");
    plot->add_option("--title", title, "Plot title");

    std::vector<std::string> argv_storage = {"ccr"};
    argv_storage.insert(argv_storage.end(), expanded.begin(), expanded.end());
    std::vector<char*> argv;
    for (auto& a : argv_storage) argv.push_back(a.data());
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
      const int code = app.exit(e, out, err);
      return code == 0 ? kOk : kInvalidInput;
    }

    if (plot->parsed()) return cmd_plot(roc_files, svg_path, title, out, err);
    if (rank->parsed()) return cmd_rank(raw.to_config("rank"), out, err);
    if (evaluate->parsed()) return cmd_evaluate(raw.to_config("evaluate"), out, err);
    return cmd_baseline(raw.to_config("baseline"), out, err);
  } catch (const Error& e) {
    err << "ccr: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "ccr: " << e.what() << '\n';
    return kFailure;
  }
}

}  // namespace ccr::cli
