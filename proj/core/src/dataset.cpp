#include <algorithm>
#include <fstream>
#include <iterator>
#include <sstream>

#include "maintviz/csv.hpp"
#include "maintviz/error.hpp"
#include "maintviz/ingest.hpp"

namespace maintviz {

namespace {

bool commit_less(const LabeledCommit& a, const LabeledCommit& b) {
  const RawCommit& x = a.commit;
  const RawCommit& y = b.commit;
  if (x.project != y.project) return x.project < y.project;
  if (x.timestamp != y.timestamp) return x.timestamp < y.timestamp;
  return x.hash < y.hash;
}

}  // namespace

Dataset::Dataset(std::vector<LabeledCommit> commits,
                 std::optional<Timestamp> created_at)
    : commits_(std::move(commits)), created_at_(created_at) {
  for (const auto& c : commits_) validate_commit(c.commit);
  std::stable_sort(commits_.begin(), commits_.end(), commit_less);

  // Duplicates share a project but may differ in timestamp, so sort a key
  // index rather than relying on adjacency in dataset order.
  std::vector<std::pair<std::string_view, std::string_view>> keys;
  keys.reserve(commits_.size());
  for (const auto& c : commits_) keys.emplace_back(c.commit.project, c.commit.hash);
  std::sort(keys.begin(), keys.end());
  const auto dup = std::adjacent_find(keys.begin(), keys.end());
  if (dup != keys.end())
    throw Error(ErrorKind::DuplicateKey,
                "duplicate commit (" + std::string(dup->first) + ", " +
                    std::string(dup->second) + ")");

  for (const auto& c : commits_)
    if (projects_.empty() || projects_.back() != c.commit.project)
      projects_.push_back(c.commit.project);
}

bool Dataset::has_project(std::string_view project) const {
  return std::binary_search(projects_.begin(), projects_.end(), project);
}

Dataset Dataset::subset(std::string_view project) const {
  std::vector<LabeledCommit> rows;
  for (const auto& c : commits_)
    if (c.commit.project == project) rows.push_back(c);
  return Dataset(std::move(rows), created_at_);
}

bool Dataset::operator==(const Dataset& other) const {
  return std::equal(commits_.begin(), commits_.end(), other.commits_.begin(),
                    other.commits_.end(),
                    [](const LabeledCommit& a, const LabeledCommit& b) {
                      return a.commit == b.commit && a.label == b.label;
                    });
}

std::string dataset_to_csv(const Dataset& dataset) {
  std::string out;
  out += kDatasetHeader;
  out += '\n';
  for (const auto& row : dataset.commits()) {
    const RawCommit& c = row.commit;
    const std::string ts = format_iso8601(c.timestamp);
    csv::append_row(out, {c.project, c.hash, c.author_name, c.author_email, ts,
                          c.message, to_string(row.label)});
  }
  return out;
}

Dataset dataset_from_csv(std::string_view text) {
  csv::Reader reader(text);
  auto header = reader.next();
  if (!header) throw Error(ErrorKind::SchemaMismatch, "missing header row");
  std::string joined;
  for (std::size_t i = 0; i < header->size(); ++i) {
    if (i > 0) joined += ',';
    joined += (*header)[i];
  }
  if (joined != kDatasetHeader)
    throw Error(ErrorKind::SchemaMismatch,
                "expected header '" + std::string(kDatasetHeader) +
                    "', got '" + joined + "'");

  std::vector<LabeledCommit> rows;
  while (auto fields = reader.next()) {
    const std::string where = "row " + std::to_string(reader.record_number());
    try {
      if (fields->size() != 7)
        throw Error(ErrorKind::MalformedRecord,
                    "expected 7 fields, got " + std::to_string(fields->size()));
      LabeledCommit row;
      row.commit.project = std::move((*fields)[0]);
      row.commit.hash = normalize_hash((*fields)[1]);
      row.commit.author_name = std::move((*fields)[2]);
      row.commit.author_email = std::move((*fields)[3]);
      const auto ts = parse_iso8601((*fields)[4]);
      if (!ts)
        throw Error(ErrorKind::MalformedRecord,
                    "bad timestamp '" + (*fields)[4] + "'");
      row.commit.timestamp = *ts;
      row.commit.message = std::move((*fields)[5]);
      const auto label = parse_activity_label((*fields)[6]);
      if (!label)
        throw Error(ErrorKind::MalformedRecord,
                    "bad label '" + (*fields)[6] + "'");
      row.label = *label;
      row.source = LabelSource::External;
      validate_commit(row.commit);
      rows.push_back(std::move(row));
    } catch (const Error& e) {
      throw Error(ErrorKind::MalformedRecord, where + ": " + e.what());
    }
  }
  return Dataset(std::move(rows));
}

std::string read_file(const std::filesystem::path& path) {
  std::error_code ec;
  if (std::filesystem::is_directory(path, ec))
    throw Error(ErrorKind::IoFailure, path.string() + " is a directory");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw Error(ErrorKind::IoFailure, "read failed: " + path.string());
  return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::IoFailure, "cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw Error(ErrorKind::IoFailure, "write failed: " + path.string());
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  write_file(path, dataset_to_csv(dataset));
}

Dataset load_dataset(const std::filesystem::path& path) {
  return dataset_from_csv(read_file(path));
}

}  // namespace maintviz
