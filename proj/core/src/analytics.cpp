#include "maintviz/analytics.hpp"

#include <algorithm>
#include <cmath>

#include "maintviz/error.hpp"
#include "maintviz/text.hpp"

namespace maintviz {

namespace {

bool same_key(const std::optional<std::string>& want, std::string_view have) {
  return want && ascii_lower(trim(*want)) == ascii_lower(trim(have));
}

std::size_t& slot(ActivityBucket& bucket, ActivityLabel label) {
  switch (label) {
    case ActivityLabel::Corrective: return bucket.corrective;
    case ActivityLabel::Perfective: return bucket.perfective;
    default: return bucket.adaptive;
  }
}

}  // namespace

TimeRange::TimeRange(Timestamp start, Timestamp end) : start_(start), end_(end) {
  if (!(start < end))
    throw Error(ErrorKind::InvalidArgument,
                "time range start must precede end (" + std::to_string(start) +
                    " >= " + std::to_string(end) + ")");
}

std::size_t ActivityBucket::count(ActivityLabel activity) const {
  switch (activity) {
    case ActivityLabel::Corrective: return corrective;
    case ActivityLabel::Perfective: return perfective;
    case ActivityLabel::Adaptive: return adaptive;
    case ActivityLabel::Unclassified: return 0;
  }
  return 0;
}

std::string_view to_string(MatchMode mode) {
  switch (mode) {
    case MatchMode::Name: return "name";
    case MatchMode::Email: return "email";
    case MatchMode::Both: return "both";
  }
  return "both";
}

std::optional<MatchMode> parse_match_mode(std::string_view text) {
  if (text == "name") return MatchMode::Name;
  if (text == "email") return MatchMode::Email;
  if (text == "both") return MatchMode::Both;
  return std::nullopt;
}

DeveloperIdentity::DeveloperIdentity(std::optional<std::string> name,
                                     std::optional<std::string> email,
                                     MatchMode mode)
    : name_(std::move(name)), email_(std::move(email)), mode_(mode) {
  const bool need_name = mode != MatchMode::Email;
  const bool need_email = mode != MatchMode::Name;
  if ((need_name && !name_) || (need_email && !email_))
    throw Error(ErrorKind::InvalidArgument,
                "match mode '" + std::string(to_string(mode)) +
                    "' needs the corresponding identity field");
}

bool match_identity(const RawCommit& commit, const DeveloperIdentity& identity) {
  switch (identity.mode()) {
    case MatchMode::Name:
      return same_key(identity.name(), commit.author_name);
    case MatchMode::Email:
      return same_key(identity.email(), commit.author_email);
    case MatchMode::Both:
      return same_key(identity.name(), commit.author_name) &&
             same_key(identity.email(), commit.author_email);
  }
  return false;
}

std::vector<LabeledCommit> filter_commits(
    const std::vector<LabeledCommit>& commits, std::string_view project,
    const std::optional<TimeRange>& range,
    const std::optional<DeveloperIdentity>& identity,
    bool include_unclassified) {
  bool seen = false;
  std::vector<LabeledCommit> kept;
  for (const auto& c : commits) {
    if (c.commit.project != project) continue;
    seen = true;
    if (range && !range->contains(c.commit.timestamp)) continue;
    if (identity && !match_identity(c.commit, *identity)) continue;
    if (!include_unclassified && c.label == ActivityLabel::Unclassified) continue;
    kept.push_back(c);
  }
  if (!seen)
    throw Error(ErrorKind::UnknownProject, "unknown project '" + std::string(project) + "'");
  return kept;
}

std::optional<TimeRange> data_extent(const std::vector<LabeledCommit>& commits) {
  if (commits.empty()) return std::nullopt;
  const auto [lo, hi] = std::minmax_element(
      commits.begin(), commits.end(), [](const auto& a, const auto& b) {
        return a.commit.timestamp < b.commit.timestamp;
      });
  return TimeRange(floor_to_midnight(lo->commit.timestamp), hi->commit.timestamp + 1);
}

std::vector<ActivityBucket> bucketize(const std::vector<LabeledCommit>& commits,
                                      int width_days,
                                      const std::optional<TimeRange>& range) {
  if (width_days < 1)
    throw Error(ErrorKind::InvalidArgument, "bucket width must be at least one day");
  const std::optional<TimeRange> span = range ? range : data_extent(commits);
  if (!span) return {};

  const Timestamp width = width_days * kSecondsPerDay;
  const Timestamp length = span->end() - span->start();
  const auto count = static_cast<std::size_t>((length + width - 1) / width);

  std::vector<ActivityBucket> buckets(count);
  for (std::size_t i = 0; i < count; ++i) {
    buckets[i].start = span->start() + static_cast<Timestamp>(i) * width;
    buckets[i].width_days = width_days;
  }
  for (const auto& c : commits) {
    if (c.label == ActivityLabel::Unclassified) continue;
    const Timestamp t = c.commit.timestamp;
    if (!span->contains(t)) continue;
    ++slot(buckets[static_cast<std::size_t>((t - span->start()) / width)], c.label);
  }
  return buckets;
}

double BalanceProfile::proportion(ActivityLabel activity) const {
  if (activity == ActivityLabel::Unclassified) return 0.0;
  return proportions[static_cast<std::size_t>(activity)];
}

BalanceProfile balance_profile(const std::array<std::size_t, 3>& counts,
                               double min_share_threshold) {
  if (!(min_share_threshold > 0.0 && min_share_threshold <= kMaxBalanceThreshold))
    throw Error(ErrorKind::InvalidThreshold,
                "threshold must lie in (0, 1/3], got " +
                    std::to_string(min_share_threshold));
  BalanceProfile profile;
  profile.min_share_threshold = min_share_threshold;
  profile.total = counts[0] + counts[1] + counts[2];
  if (profile.total == 0) return profile;

  double min_share = 1.0;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    profile.proportions[i] =
        static_cast<double>(counts[i]) / static_cast<double>(profile.total);
    min_share = std::min(min_share, profile.proportions[i]);
  }
  profile.balanced = min_share >= min_share_threshold;
  return profile;
}

BalanceProfile balance_profile(const std::vector<LabeledCommit>& commits,
                               double min_share_threshold) {
  std::array<std::size_t, 3> counts{};
  for (const auto& c : commits)
    if (c.label != ActivityLabel::Unclassified)
      ++counts[static_cast<std::size_t>(c.label)];
  return balance_profile(counts, min_share_threshold);
}

std::string_view to_string(AnomalyKind kind) {
  return kind == AnomalyKind::Peak ? "peak" : "deep";
}

std::vector<AnomalyFlag> detect_anomalies(const std::vector<ActivityBucket>& buckets,
                                          double k) {
  if (!(k > 0.0) || !std::isfinite(k))
    throw Error(ErrorKind::InvalidArgument, "anomaly k must be positive");
  if (buckets.size() < 3) return {};

  const auto n = static_cast<double>(buckets.size());
  double sum = 0.0;
  for (const auto& b : buckets) sum += static_cast<double>(b.total());
  const double mean = sum / n;
  double squares = 0.0;
  for (const auto& b : buckets) {
    const double d = static_cast<double>(b.total()) - mean;
    squares += d * d;
  }
  const double stddev = std::sqrt(squares / n);
  if (stddev == 0.0) return {};

  std::vector<AnomalyFlag> flags;
  for (const auto& b : buckets) {
    const auto total = static_cast<double>(b.total());
    if (total > mean + k * stddev)
      flags.push_back({b.start, AnomalyKind::Peak, b.total(), mean, stddev});
    else if (total < mean - k * stddev)
      flags.push_back({b.start, AnomalyKind::Deep, b.total(), mean, stddev});
  }
  return flags;
}

CommitPage search_commits(const std::vector<LabeledCommit>& commits,
                          ActivityLabel activity, const TimeRange& bucket,
                          const std::optional<std::string>& query,
                          std::size_t limit, std::size_t offset) {
  if (limit == 0)
    throw Error(ErrorKind::InvalidArgument, "page limit must be at least 1");
  const std::string needle = query ? ascii_lower(*query) : std::string();

  std::vector<const LabeledCommit*> matches;
  for (const auto& c : commits) {
    if (c.label != activity || !bucket.contains(c.commit.timestamp)) continue;
    if (!needle.empty() &&
        ascii_lower(c.commit.message).find(needle) == std::string::npos)
      continue;
    matches.push_back(&c);
  }
  std::stable_sort(matches.begin(), matches.end(), [](auto* a, auto* b) {
    return a->commit.timestamp < b->commit.timestamp;
  });

  CommitPage page;
  page.total_matches = matches.size();
  for (std::size_t i = offset; i < matches.size() && i - offset < limit; ++i)
    page.items.push_back(*matches[i]);
  return page;
}

}  // namespace maintviz
