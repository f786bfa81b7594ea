#include <unistd.h>

#include <algorithm>
#include <charconv>

#include "maintviz/error.hpp"
#include "maintviz/ingest.hpp"
#include "maintviz/text.hpp"
#include "process.hpp"

namespace maintviz {

namespace {

namespace fs = std::filesystem;

constexpr std::size_t kFieldsPerCommit = 5;

std::vector<std::string_view> split_nul(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\0', start);
    if (end == std::string_view::npos) end = text.size();
    parts.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return parts;
}

}  // namespace

std::vector<RawCommit> read_git_history(const fs::path& repo,
                                        std::string_view project,
                                        IngestReport* report) {
  std::error_code ec;
  if (!fs::exists(repo, ec))
    throw Error(ErrorKind::IoFailure, "no such path: " + repo.string());
  if (!fs::is_directory(repo, ec))
    throw Error(ErrorKind::NotARepository, repo.string() + " is not a directory");
  if (access(repo.c_str(), R_OK | X_OK) != 0)
    throw Error(ErrorKind::IoFailure, "cannot read " + repo.string());

  const fs::path root = fs::canonical(repo, ec);
  if (ec) throw Error(ErrorKind::IoFailure, "cannot resolve " + repo.string());

  // Stop git from discovering an enclosing repository above `root`.
  const std::vector<std::pair<std::string, std::string>> env = {
      {"GIT_CEILING_DIRECTORIES", root.parent_path().string()},
      {"LC_ALL", "C"},
  };
  const auto git = [&](std::vector<std::string> args) {
    args.insert(args.begin(), {"git", "-C", root.string()});
    return detail::run_process(args, env);
  };

  if (git({"rev-parse", "--git-dir"}).exit_code != 0)
    throw Error(ErrorKind::NotARepository, root.string());
  if (git({"rev-parse", "--verify", "--quiet", "HEAD^{commit}"}).exit_code != 0)
    throw Error(ErrorKind::EmptyRepository, root.string());

  const auto log = git({"-c", "log.showSignature=false", "log",
                        "--first-parent", "--no-color", "-z",
                        "--format=%H%x00%an%x00%ae%x00%at%x00%B", "HEAD"});
  if (log.exit_code != 0)
    throw Error(ErrorKind::IoFailure, "git log failed in " + root.string());

  const auto parts = split_nul(log.out);
  if (parts.size() % kFieldsPerCommit != 0)
    throw Error(ErrorKind::IoFailure, "unexpected git log output");

  std::vector<RawCommit> commits;
  commits.reserve(parts.size() / kFieldsPerCommit);
  for (std::size_t i = 0; i < parts.size(); i += kFieldsPerCommit) {
    RawCommit c;
    c.project = std::string(project);
    c.hash = normalize_hash(parts[i]);
    c.author_name = sanitize_utf8(parts[i + 1]);
    c.author_email = sanitize_utf8(parts[i + 2]);
    const std::string_view ts = parts[i + 3];
    auto [ptr, perr] = std::from_chars(ts.data(), ts.data() + ts.size(), c.timestamp);
    if (perr != std::errc{} || ptr != ts.data() + ts.size())
      throw Error(ErrorKind::IoFailure, "bad author time for " + c.hash);
    c.message = sanitize_utf8(parts[i + 4]);
    if (c.author_name.empty() && c.author_email.empty()) {
      if (report) ++report->rejected_without_author;
      continue;
    }
    validate_commit(c);
    commits.push_back(std::move(c));
  }
  std::reverse(commits.begin(), commits.end());
  return commits;
}

}  // namespace maintviz
