#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "maintviz/commit.hpp"

namespace maintviz {

/// Whole-token keyword sets, one per activity. The sets are pairwise
/// disjoint and every word is non-empty lowercase without whitespace.
class KeywordTable {
 public:
  using WordSet = std::set<std::string, std::less<>>;

  /// Throws InvalidArgument if an invariant does not hold.
  KeywordTable(WordSet corrective, WordSet perfective, WordSet adaptive);

  static const KeywordTable& defaults();

  /// CSV with header `label,word`. Throws SchemaMismatch, InvalidLabel,
  /// MalformedRecord (bad word) and InvalidArgument (sets overlap).
  static KeywordTable from_csv(std::string_view text);
  static KeywordTable load(const std::filesystem::path& path);

  /// `activity` must be one of kActivities.
  const WordSet& words(ActivityLabel activity) const;

  /// The activity whose set holds `token`, if any.
  std::optional<ActivityLabel> lookup(std::string_view token) const;

 private:
  std::array<WordSet, 3> sets_;
};

/// Lowercase tokens: maximal runs of ASCII letters, digits, and bytes
/// >= 0x80. Everything else separates.
std::vector<std::string> tokenize(std::string_view message);

/// Per-activity keyword hit counts, indexed like kActivities.
std::array<std::size_t, 3> keyword_counts(std::string_view message,
                                          const KeywordTable& table);

/// Highest count wins; ties go corrective > perfective > adaptive; no hit
/// at all gives Unclassified.
ActivityLabel classify_message(std::string_view message,
                               const KeywordTable& table = KeywordTable::defaults());

using CommitKey = std::pair<std::string, std::string>;  // (project, hash)
using LabelOverrides = std::map<CommitKey, ActivityLabel>;

/// CSV with header `project,hash,label`. Throws SchemaMismatch,
/// DuplicateKey (naming both rows), InvalidLabel (including "unclassified")
/// and MalformedRecord.
LabelOverrides label_overrides_from_csv(std::string_view text);
LabelOverrides load_label_overrides(const std::filesystem::path& path);

struct ClassifyResult {
  std::vector<LabeledCommit> commits;
  std::array<std::size_t, 4> label_counts{};  // indexed by ActivityLabel
  std::vector<CommitKey> unknown_overrides;

  std::size_t count(ActivityLabel label) const {
    return label_counts[static_cast<std::size_t>(label)];
  }
};

/// Labels every commit, in input order. An override takes precedence over
/// the keyword result and marks the label External. Override keys that
/// match no input commit are reported, not fatal.
ClassifyResult classify_dataset(const std::vector<RawCommit>& commits,
                                const KeywordTable& table,
                                const LabelOverrides* overrides = nullptr);

}  // namespace maintviz
