#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "maintviz/time.hpp"

namespace maintviz {

/// One VCS revision. One commit is one maintenance activity.
struct RawCommit {
  std::string project;
  std::string hash;  // lowercase hex, 7..64 chars
  std::string author_name;
  std::string author_email;
  Timestamp timestamp = 0;
  std::string message;

  bool operator==(const RawCommit&) const = default;
};

enum class ActivityLabel { Corrective, Perfective, Adaptive, Unclassified };

/// The three series a chart shows, in tie-break priority order.
inline constexpr std::array<ActivityLabel, 3> kActivities = {
    ActivityLabel::Corrective, ActivityLabel::Perfective,
    ActivityLabel::Adaptive};

std::string_view to_string(ActivityLabel label);
std::optional<ActivityLabel> parse_activity_label(std::string_view text);

enum class LabelSource { Keyword, External };

std::string_view to_string(LabelSource source);

struct LabeledCommit {
  RawCommit commit;
  ActivityLabel label = ActivityLabel::Unclassified;
  LabelSource source = LabelSource::Keyword;

  bool operator==(const LabeledCommit&) const = default;
};

bool is_valid_hash(std::string_view hash);

/// Lowercases and validates; throws MalformedRecord on a bad hash.
std::string normalize_hash(std::string_view hash);

/// Throws MalformedRecord when any RawCommit invariant is violated.
void validate_commit(const RawCommit& commit);

}  // namespace maintviz
