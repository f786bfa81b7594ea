#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "maintviz/analytics.hpp"

namespace maintviz::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitError = 1,       // I/O, schema and other module errors
  kExitUsage = 2,       // bad flags
  kExitUnbalanced = 3,  // at least one project has an unbalanced profile
};

/// Entry point behind the `maintviz` binary. Never throws.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

struct StatsOptions {
  std::optional<std::string> project;
  double threshold = kDefaultBalanceThreshold;
  int width_days = kDefaultBucketDays;
  double anomaly_k = kDefaultAnomalyK;
};

/// Per-project report. Returns kExitOk when every reported project is
/// balanced, kExitUnbalanced otherwise. Throws maintviz::Error.
int run_stats(const std::filesystem::path& dataset, const StatsOptions& options,
              std::ostream& out);

struct PipelineOptions {
  std::optional<std::filesystem::path> keywords;
  std::optional<std::filesystem::path> labels;
};

/// git history -> classification -> dataset file, with a summary on `out`
/// and warnings on `err`. Throws maintviz::Error.
void run_pipeline(const std::filesystem::path& repo, const std::string& project,
                  const std::filesystem::path& out_path,
                  const PipelineOptions& options, std::ostream& out,
                  std::ostream& err);

}  // namespace maintviz::cli
