#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "maintviz/commit.hpp"

namespace maintviz {

/// Default activity bucket width, in days.
inline constexpr int kDefaultBucketDays = 28;
/// Default page size for commit drill-down.
inline constexpr std::size_t kDefaultDetailsLimit = 10;
inline constexpr double kDefaultBalanceThreshold = 0.15;
inline constexpr double kDefaultAnomalyK = 2.0;
inline constexpr double kMaxBalanceThreshold = 1.0 / 3.0;

/// Half-open [start, end) in UTC seconds, start < end.
class TimeRange {
 public:
  /// Throws InvalidArgument unless start < end.
  TimeRange(Timestamp start, Timestamp end);

  Timestamp start() const { return start_; }
  Timestamp end() const { return end_; }
  bool contains(Timestamp t) const { return t >= start_ && t < end_; }

  bool operator==(const TimeRange&) const = default;

 private:
  Timestamp start_;
  Timestamp end_;
};

/// One stacked-bar column: [start, start + width_days days).
struct ActivityBucket {
  Timestamp start = 0;
  int width_days = kDefaultBucketDays;
  std::size_t corrective = 0;
  std::size_t perfective = 0;
  std::size_t adaptive = 0;

  Timestamp end() const { return start + width_days * kSecondsPerDay; }
  std::size_t total() const { return corrective + perfective + adaptive; }
  std::size_t count(ActivityLabel activity) const;

  bool operator==(const ActivityBucket&) const = default;
};

enum class MatchMode { Name, Email, Both };

std::string_view to_string(MatchMode mode);
std::optional<MatchMode> parse_match_mode(std::string_view text);

/// Selects one developer across accounts by name, email, or both.
class DeveloperIdentity {
 public:
  /// Throws InvalidArgument when the field the mode needs is missing.
  DeveloperIdentity(std::optional<std::string> name,
                    std::optional<std::string> email, MatchMode mode);

  const std::optional<std::string>& name() const { return name_; }
  const std::optional<std::string>& email() const { return email_; }
  MatchMode mode() const { return mode_; }

 private:
  std::optional<std::string> name_;
  std::optional<std::string> email_;
  MatchMode mode_;
};

/// Case-insensitive, whitespace-trimmed equality on the fields the mode
/// selects.
bool match_identity(const RawCommit& commit, const DeveloperIdentity& identity);

/// Keeps commits of `project` inside `range`, matching `identity`, and
/// classified unless `include_unclassified`. Order is preserved.
/// Throws UnknownProject when no commit carries `project`.
std::vector<LabeledCommit> filter_commits(
    const std::vector<LabeledCommit>& commits, std::string_view project,
    const std::optional<TimeRange>& range,
    const std::optional<DeveloperIdentity>& identity,
    bool include_unclassified = false);

/// Range bucketize() uses when the caller gives none:
/// [midnight UTC of the earliest commit, latest commit + 1). Unclassified
/// commits take part. nullopt for empty input.
std::optional<TimeRange> data_extent(const std::vector<LabeledCommit>& commits);

/// Groups commits into contiguous fixed-width buckets aligned to the range
/// start. Every bucket of the range is emitted, empty ones included; the last
/// one may run past the range end. Commits outside the range and
/// unclassified commits are not counted. With no range and no commits the
/// result is empty. Throws InvalidArgument if width_days < 1.
std::vector<ActivityBucket> bucketize(const std::vector<LabeledCommit>& commits,
                                      int width_days = kDefaultBucketDays,
                                      const std::optional<TimeRange>& range = std::nullopt);

struct BalanceProfile {
  std::size_t total = 0;  // classified commits only
  std::array<double, 3> proportions{};  // indexed like kActivities
  double min_share_threshold = kDefaultBalanceThreshold;
  bool balanced = false;

  double proportion(ActivityLabel activity) const;
};

/// Balanced when every activity's share reaches the threshold; an empty
/// profile is never balanced. Throws InvalidThreshold outside (0, 1/3].
BalanceProfile balance_profile(const std::vector<LabeledCommit>& commits,
                               double min_share_threshold = kDefaultBalanceThreshold);

/// Same verdict from bare counts (corrective, perfective, adaptive).
BalanceProfile balance_profile(const std::array<std::size_t, 3>& counts,
                               double min_share_threshold = kDefaultBalanceThreshold);

enum class AnomalyKind { Peak, Deep };

std::string_view to_string(AnomalyKind kind);

struct AnomalyFlag {
  Timestamp bucket_start = 0;
  AnomalyKind kind = AnomalyKind::Peak;
  std::size_t total = 0;
  double series_mean = 0;
  double series_stddev = 0;

  bool operator==(const AnomalyFlag&) const = default;
};

/// Flags bucket totals outside mean ± k·σ (population σ). Fewer than three
/// buckets or a flat series yield nothing. Throws InvalidArgument if k is
/// not a positive finite number.
std::vector<AnomalyFlag> detect_anomalies(const std::vector<ActivityBucket>& buckets,
                                          double k = kDefaultAnomalyK);

struct CommitPage {
  std::vector<LabeledCommit> items;
  std::size_t total_matches = 0;
};

/// Commits labelled `activity` inside `bucket` whose message contains
/// `query` (ASCII case-insensitive; empty means no filter), in timestamp
/// order, sliced to [offset, offset + limit). Throws InvalidArgument if
/// limit is 0.
CommitPage search_commits(const std::vector<LabeledCommit>& commits,
                          ActivityLabel activity, const TimeRange& bucket,
                          const std::optional<std::string>& query = std::nullopt,
                          std::size_t limit = kDefaultDetailsLimit,
                          std::size_t offset = 0);

}  // namespace maintviz
