#include "maintviz/cli.hpp"

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <ostream>
#include <thread>

#include <CLI11.hpp>

#include "maintviz/classify.hpp"
#include "maintviz/error.hpp"
#include "maintviz/ingest.hpp"
#include "maintviz/service.hpp"

namespace maintviz::cli {

namespace {

namespace fs = std::filesystem;

std::string fixed(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  return buf;
}

Timestamp now_utc() {
  return std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

struct Labels {
  KeywordTable table = KeywordTable::defaults();
  std::optional<LabelOverrides> overrides;
};

Labels load_labels(const PipelineOptions& options) {
  Labels labels;
  if (options.keywords) labels.table = KeywordTable::load(*options.keywords);
  if (options.labels) labels.overrides = load_label_overrides(*options.labels);
  return labels;
}

Dataset classify_and_report(const std::vector<RawCommit>& commits,
                            const Labels& labels, std::ostream& out,
                            std::ostream& err) {
  auto result = classify_dataset(commits, labels.table,
                                 labels.overrides ? &*labels.overrides : nullptr);
  for (const auto& [project, hash] : result.unknown_overrides)
    err << "warning: label override for unknown commit (" << project << ", "
        << hash << ")\n";
  out << "commits " << result.commits.size()
      << " corrective " << result.count(ActivityLabel::Corrective)
      << " perfective " << result.count(ActivityLabel::Perfective)
      << " adaptive " << result.count(ActivityLabel::Adaptive)
      << " unclassified " << result.count(ActivityLabel::Unclassified) << "\n";
  return Dataset(std::move(result.commits), now_utc());
}

void warn_rejected(const IngestReport& report, std::ostream& err) {
  if (report.rejected_without_author > 0)
    err << "warning: skipped " << report.rejected_without_author
        << " commit(s) with neither author name nor email\n";
}

// CLI11 validator for the balance threshold domain (0, 1/3].
struct ThresholdValidator : CLI::Validator {
  ThresholdValidator() {
    name_ = "THRESHOLD";
    func_ = [](const std::string& text) -> std::string {
      double value = 0;
      if (!CLI::detail::lexical_cast(text, value) || !(value > 0.0) ||
          value > kMaxBalanceThreshold)
        return "threshold must lie in (0, 1/3]";
      return {};
    };
  }
};

std::atomic<Server*> g_server{nullptr};

extern "C" void on_signal(int) {
  if (Server* s = g_server.load()) s->stop();
}

int serve(const fs::path& dataset_path, std::optional<int> port, std::ostream& out) {
  ServiceConfig config = ServiceConfig::from_env();
  if (!dataset_path.empty()) config.dataset_path = dataset_path;
  if (!config.dataset_path)
    throw Error(ErrorKind::InvalidArgument, "no dataset: pass --in or set MAINTVIZ_DATASET");
  if (port) config.port = *port;

  Api api(load_dataset(*config.dataset_path), config);
  Server server(api);
  if (!server.bind("0.0.0.0", config.port))
    throw Error(ErrorKind::IoFailure, "cannot bind port " + std::to_string(config.port));
  out << "serving " << api.snapshot()->size() << " commits on http://0.0.0.0:"
      << config.port << "/" << std::endl;
  g_server = &server;
  std::signal(SIGINT, on_signal);
  std::signal(SIGTERM, on_signal);
  server.listen_after_bind();
  g_server = nullptr;
  return kExitOk;
}

}  // namespace

int run_stats(const fs::path& dataset_path, const StatsOptions& options,
              std::ostream& out) {
  const Dataset dataset = load_dataset(dataset_path);
  std::vector<std::string> projects = dataset.projects();
  if (options.project) {
    if (!dataset.has_project(*options.project))
      throw Error(ErrorKind::UnknownProject, "unknown project '" + *options.project + "'");
    projects = {*options.project};
  }
  if (projects.empty()) {
    out << "no commits\n";
    return kExitOk;
  }

  bool all_balanced = true;
  for (const auto& project : projects) {
    const auto all = filter_commits(dataset.commits(), project, std::nullopt,
                                    std::nullopt, true);
    std::array<std::size_t, 4> counts{};
    for (const auto& c : all) ++counts[static_cast<std::size_t>(c.label)];
    const auto classified = filter_commits(all, project, std::nullopt, std::nullopt);
    const auto profile = balance_profile(classified, options.threshold);
    const auto buckets = bucketize(classified, options.width_days);
    const auto anomalies = detect_anomalies(buckets, options.anomaly_k);
    all_balanced = all_balanced && profile.balanced;

    const std::size_t unclassified = counts[3];
    out << "project " << project << "\n"
        << "  commits " << all.size() << "\n";
    for (auto a : kActivities)
      out << "  " << to_string(a) << " " << counts[static_cast<std::size_t>(a)] << "\n";
    out << "  unclassified " << unclassified << " fraction "
        << fixed(static_cast<double>(unclassified) / static_cast<double>(all.size()))
        << "\n";
    out << "  proportions";
    for (auto a : kActivities) out << " " << to_string(a) << "=" << fixed(profile.proportion(a));
    out << "\n  balance " << (profile.balanced ? "balanced" : "unbalanced")
        << " threshold " << fixed(profile.min_share_threshold) << "\n";
    out << "  buckets " << buckets.size() << " width_days " << options.width_days << "\n";
    out << "  anomalies " << anomalies.size() << "\n";
    for (const auto& f : anomalies)
      out << "    " << to_string(f.kind) << " " << format_iso8601(f.bucket_start)
          << " total " << f.total << " mean " << fixed(f.series_mean)
          << " stddev " << fixed(f.series_stddev) << "\n";
  }
  return all_balanced ? kExitOk : kExitUnbalanced;
}

void run_pipeline(const fs::path& repo, const std::string& project,
                  const fs::path& out_path, const PipelineOptions& options,
                  std::ostream& out, std::ostream& err) {
  const Labels labels = load_labels(options);
  IngestReport report;
  const auto commits = read_git_history(repo, project, &report);
  warn_rejected(report, err);
  save_dataset(classify_and_report(commits, labels, out, err), out_path);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Explore corrective/perfective/adaptive maintenance activity in commit history",
               "maintviz"};
  app.require_subcommand(1);

  std::string repo, project, from_export, out_path, in_path, keywords, labels;
  std::optional<std::string> project_filter;
  std::optional<int> port;
  StatsOptions stats;

  auto* ingest = app.add_subcommand("ingest", "Extract commits into a classified dataset");
  auto* repo_opt = ingest->add_option("--repo", repo, "Git repository");
  ingest->add_option("--project", project, "Project name for --repo");
  auto* export_opt =
      ingest->add_option("--from-export", from_export, "Portable export file")->check(CLI::ExistingFile);
  repo_opt->excludes(export_opt);
  ingest->add_option("--out", out_path, "Dataset CSV to write")->required();
  ingest->add_option("--keywords", keywords, "Keyword table CSV (label,word)")->check(CLI::ExistingFile);
  ingest->add_option("--labels", labels, "Label overrides CSV (project,hash,label)")->check(CLI::ExistingFile);

  auto* classify = app.add_subcommand("classify", "Re-label a dataset");
  classify->add_option("--in", in_path, "Dataset CSV")->required();
  classify->add_option("--out", out_path, "Dataset CSV to write")->required();
  classify->add_option("--keywords", keywords, "Keyword table CSV (label,word)")->check(CLI::ExistingFile);
  classify->add_option("--labels", labels, "Label overrides CSV (project,hash,label)")->check(CLI::ExistingFile);

  auto* stats_cmd = app.add_subcommand("stats", "Per-project activity report");
  stats_cmd->add_option("--in", in_path, "Dataset CSV")->required();
  stats_cmd->add_option("--project", project_filter, "Restrict to one project");
  stats_cmd->add_option("--threshold", stats.threshold, "Minimum share per activity")
      ->check(ThresholdValidator());
  stats_cmd->add_option("--bucket-days", stats.width_days, "Activity bucket width in days")
      ->check(CLI::Range(1, 36500));

  auto* export_cmd = app.add_subcommand("export", "Write the dataset CSV, optionally for one project");
  export_cmd->add_option("--in", in_path, "Dataset CSV")->required();
  export_cmd->add_option("--project", project_filter, "Restrict to one project");
  export_cmd->add_option("--out", out_path, "CSV to write")->required();

  auto* serve_cmd = app.add_subcommand("serve", "Serve the JSON API and web UI");
  serve_cmd->add_option("--in", in_path, "Dataset CSV (default MAINTVIZ_DATASET)");
  serve_cmd->add_option("--port", port, "Port (default MAINTVIZ_PORT or 8080)")
      ->check(CLI::Range(0, 65535));

  try {
    app.parse(argc, argv);
    if (ingest->parsed()) {
      if (repo.empty() == from_export.empty())
        throw CLI::ValidationError("ingest", "exactly one of --repo or --from-export is required");
      if (!repo.empty() && project.empty())
        throw CLI::ValidationError("ingest", "--repo requires --project");
    }
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  PipelineOptions options;
  if (!keywords.empty()) options.keywords = keywords;
  if (!labels.empty()) options.labels = labels;

  try {
    if (ingest->parsed()) {
      if (!repo.empty()) {
        run_pipeline(repo, project, out_path, options, out, err);
      } else {
        const Labels l = load_labels(options);
        IngestReport report;
        const auto commits = read_export_file(from_export, &report);
        warn_rejected(report, err);
        save_dataset(classify_and_report(commits, l, out, err), out_path);
      }
      return kExitOk;
    }
    if (classify->parsed()) {
      const Labels l = load_labels(options);
      const Dataset dataset = load_dataset(in_path);
      std::vector<RawCommit> commits;
      commits.reserve(dataset.size());
      for (const auto& c : dataset.commits()) commits.push_back(c.commit);
      save_dataset(classify_and_report(commits, l, out, err), out_path);
      return kExitOk;
    }
    if (stats_cmd->parsed()) {
      stats.project = project_filter;
      return run_stats(in_path, stats, out);
    }
    if (export_cmd->parsed()) {
      const Dataset dataset = load_dataset(in_path);
      if (project_filter && !dataset.has_project(*project_filter))
        throw Error(ErrorKind::UnknownProject, "unknown project '" + *project_filter + "'");
      save_dataset(project_filter ? dataset.subset(*project_filter) : dataset, out_path);
      out << "wrote " << out_path << "\n";
      return kExitOk;
    }
    if (serve_cmd->parsed()) return serve(in_path, port, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitUsage;
}

}  // namespace maintviz::cli
