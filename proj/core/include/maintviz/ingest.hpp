#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "maintviz/commit.hpp"

namespace maintviz {

// --- portable export lines -------------------------------------------------
//
// One commit per line, UTF-8, LF terminated:
//   project \t hash \t author_name \t author_email \t timestamp \t base64(message)

std::string base64_encode(std::string_view bytes);

/// Strict RFC-4648 decoding: padded, no whitespace, zero pad bits.
std::optional<std::string> base64_decode(std::string_view text);

/// Throws MalformedRecord on a wrong field count, bad base64, a non-integer
/// timestamp, an invalid hash, or when both author fields are empty.
RawCommit parse_export_line(std::string_view line);

/// The line without its LF. Throws MalformedRecord if a text field holds a
/// TAB or a line break, or if the commit violates its invariants.
std::string serialize_export_line(const RawCommit& commit);

/// Counters for records dropped (not failed) during ingestion.
struct IngestReport {
  std::size_t rejected_without_author = 0;
};

/// Parses a whole export document. Records whose author name and email are
/// both empty are skipped and counted; any other bad line throws
/// MalformedRecord naming the line number.
std::vector<RawCommit> parse_export(std::string_view text,
                                    IngestReport* report = nullptr);

std::vector<RawCommit> read_export_file(const std::filesystem::path& path,
                                        IngestReport* report = nullptr);

// --- git -------------------------------------------------------------------

/// First-parent lineage of HEAD, oldest first, author time in UTC, messages
/// verbatim (invalid UTF-8 replaced). Runs the `git` executable.
/// Throws IoFailure, NotARepository or EmptyRepository.
std::vector<RawCommit> read_git_history(const std::filesystem::path& repo,
                                        std::string_view project,
                                        IngestReport* report = nullptr);

// --- dataset ---------------------------------------------------------------

/// Immutable, classified commit corpus sorted by (project, timestamp, hash).
class Dataset {
 public:
  Dataset() = default;

  /// Validates and sorts. Throws MalformedRecord on an invalid commit and
  /// DuplicateKey on a repeated (project, hash).
  explicit Dataset(std::vector<LabeledCommit> commits,
                   std::optional<Timestamp> created_at = std::nullopt);

  const std::vector<LabeledCommit>& commits() const { return commits_; }
  const std::vector<std::string>& projects() const { return projects_; }
  std::optional<Timestamp> created_at() const { return created_at_; }
  bool empty() const { return commits_.empty(); }
  std::size_t size() const { return commits_.size(); }

  bool has_project(std::string_view project) const;

  /// Rows of one project, in dataset order. Empty if the project is absent.
  Dataset subset(std::string_view project) const;

  /// Compares what the CSV form persists: commit fields and labels.
  /// created_at and label provenance are process-local.
  bool operator==(const Dataset& other) const;

 private:
  std::vector<LabeledCommit> commits_;
  std::vector<std::string> projects_;
  std::optional<Timestamp> created_at_;
};

inline constexpr std::string_view kDatasetHeader =
    "project,hash,author_name,author_email,timestamp_utc,message,label";

std::string dataset_to_csv(const Dataset& dataset);

/// Throws SchemaMismatch on a wrong header and MalformedRecord (with row
/// number) on a bad row. Loaded labels carry LabelSource::External.
Dataset dataset_from_csv(std::string_view text);

void save_dataset(const Dataset& dataset, const std::filesystem::path& path);
Dataset load_dataset(const std::filesystem::path& path);

/// Whole-file helpers shared by the loaders. Throw IoFailure.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view content);

}  // namespace maintviz
