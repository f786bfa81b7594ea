#include "maintviz/commit.hpp"

#include "maintviz/error.hpp"
#include "maintviz/text.hpp"

namespace maintviz {

std::string_view to_string(ActivityLabel label) {
  switch (label) {
    case ActivityLabel::Corrective: return "corrective";
    case ActivityLabel::Perfective: return "perfective";
    case ActivityLabel::Adaptive: return "adaptive";
    case ActivityLabel::Unclassified: return "unclassified";
  }
  return "unclassified";
}

std::optional<ActivityLabel> parse_activity_label(std::string_view text) {
  if (text == "corrective") return ActivityLabel::Corrective;
  if (text == "perfective") return ActivityLabel::Perfective;
  if (text == "adaptive") return ActivityLabel::Adaptive;
  if (text == "unclassified") return ActivityLabel::Unclassified;
  return std::nullopt;
}

std::string_view to_string(LabelSource source) {
  return source == LabelSource::External ? "external" : "keyword";
}

bool is_valid_hash(std::string_view hash) {
  if (hash.size() < 7 || hash.size() > 64) return false;
  for (char c : hash)
    if (!((c >= '0' && c <= '9') || (c >= 'a' && c <= 'f'))) return false;
  return true;
}

std::string normalize_hash(std::string_view hash) {
  std::string lowered = ascii_lower(hash);
  if (!is_valid_hash(lowered))
    throw Error(ErrorKind::MalformedRecord,
                "invalid commit hash '" + std::string(hash) + "'");
  return lowered;
}

void validate_commit(const RawCommit& commit) {
  if (commit.project.empty())
    throw Error(ErrorKind::MalformedRecord, "empty project name");
  if (!is_valid_hash(commit.hash))
    throw Error(ErrorKind::MalformedRecord,
                "invalid commit hash '" + commit.hash + "'");
  if (commit.author_name.empty() && commit.author_email.empty())
    throw Error(ErrorKind::MalformedRecord,
                "commit " + commit.hash + " has neither author name nor email");
  if (commit.timestamp < 0)
    throw Error(ErrorKind::MalformedRecord,
                "commit " + commit.hash + " has a negative timestamp");
}

}  // namespace maintviz
