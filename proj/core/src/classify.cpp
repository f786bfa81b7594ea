#include "maintviz/classify.hpp"

#include "maintviz/csv.hpp"
#include "maintviz/error.hpp"
#include "maintviz/ingest.hpp"
#include "maintviz/text.hpp"

namespace maintviz {

namespace {

bool is_word_byte(char c) {
  const auto u = static_cast<unsigned char>(c);
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || u >= 0x80;
}

std::size_t index_of(ActivityLabel activity) {
  if (activity == ActivityLabel::Unclassified)
    throw Error(ErrorKind::InvalidLabel, "unclassified has no keyword set");
  return static_cast<std::size_t>(activity);
}

std::string join(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out += ',';
    out += fields[i];
  }
  return out;
}

void expect_header(csv::Reader& reader, std::string_view expected) {
  const auto header = reader.next();
  if (!header) throw Error(ErrorKind::SchemaMismatch, "missing header row");
  const std::string got = join(*header);
  if (got != expected)
    throw Error(ErrorKind::SchemaMismatch, "expected header '" +
                                               std::string(expected) +
                                               "', got '" + got + "'");
}

}  // namespace

KeywordTable::KeywordTable(WordSet corrective, WordSet perfective,
                           WordSet adaptive)
    : sets_{std::move(corrective), std::move(perfective), std::move(adaptive)} {
  for (std::size_t i = 0; i < sets_.size(); ++i) {
    for (const auto& word : sets_[i]) {
      if (word.empty())
        throw Error(ErrorKind::InvalidArgument, "empty keyword");
      for (char c : word) {
        if (!is_word_byte(c) || (c >= 'A' && c <= 'Z'))
          throw Error(ErrorKind::InvalidArgument,
                      "keyword '" + word +
                          "' must be lowercase alphanumeric without whitespace");
      }
      for (std::size_t j = i + 1; j < sets_.size(); ++j)
        if (sets_[j].count(word))
          throw Error(ErrorKind::InvalidArgument,
                      "keyword '" + word + "' appears in two activity sets");
    }
  }
}

const KeywordTable& KeywordTable::defaults() {
  static const KeywordTable table(
      {"fix", "fixes", "fixed", "bug", "bugs", "error", "errors", "fail",
       "fails", "failed", "failure", "crash", "crashes", "issue", "defect",
       "fault", "npe", "exception", "broken", "regression"},
      {"refactor", "refactoring", "refactored", "cleanup", "clean",
       "restructure", "simplify", "simplified", "rename", "renamed",
       "reorganize", "polish", "style", "format", "formatting", "docs",
       "documentation", "typo", "test", "tests", "testing", "optimize",
       "optimized", "performance"},
      {"add", "adds", "added", "new", "feature", "features", "support",
       "supports", "implement", "implements", "implemented", "introduce",
       "introduces", "introduced", "initial", "create", "creates", "created",
       "enable", "enables", "upgrade", "update"});
  return table;
}

KeywordTable KeywordTable::from_csv(std::string_view text) {
  csv::Reader reader(text);
  expect_header(reader, "label,word");
  std::array<WordSet, 3> sets;
  while (auto row = reader.next()) {
    const std::string where = "row " + std::to_string(reader.record_number());
    if (row->size() != 2)
      throw Error(ErrorKind::MalformedRecord, where + ": expected 2 fields");
    const auto label = parse_activity_label((*row)[0]);
    if (!label || *label == ActivityLabel::Unclassified)
      throw Error(ErrorKind::InvalidLabel, where + ": '" + (*row)[0] + "'");
    const std::string& word = (*row)[1];
    if (word.empty() || ascii_lower(word) != word)
      throw Error(ErrorKind::MalformedRecord,
                  where + ": keyword '" + word + "' must be non-empty lowercase");
    sets[static_cast<std::size_t>(*label)].insert(word);
  }
  return KeywordTable(std::move(sets[0]), std::move(sets[1]), std::move(sets[2]));
}

KeywordTable KeywordTable::load(const std::filesystem::path& path) {
  return from_csv(read_file(path));
}

const KeywordTable::WordSet& KeywordTable::words(ActivityLabel activity) const {
  return sets_[index_of(activity)];
}

std::optional<ActivityLabel> KeywordTable::lookup(std::string_view token) const {
  for (std::size_t i = 0; i < sets_.size(); ++i)
    if (sets_[i].find(token) != sets_[i].end()) return kActivities[i];
  return std::nullopt;
}

std::vector<std::string> tokenize(std::string_view message) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < message.size()) {
    while (i < message.size() && !is_word_byte(message[i])) ++i;
    const std::size_t start = i;
    while (i < message.size() && is_word_byte(message[i])) ++i;
    if (i > start) tokens.push_back(ascii_lower(message.substr(start, i - start)));
  }
  return tokens;
}

std::array<std::size_t, 3> keyword_counts(std::string_view message,
                                          const KeywordTable& table) {
  std::array<std::size_t, 3> counts{};
  for (const auto& token : tokenize(message))
    if (auto hit = table.lookup(token)) ++counts[static_cast<std::size_t>(*hit)];
  return counts;
}

ActivityLabel classify_message(std::string_view message,
                               const KeywordTable& table) {
  const auto counts = keyword_counts(message, table);
  std::size_t best = 0;
  for (std::size_t i = 1; i < counts.size(); ++i)
    if (counts[i] > counts[best]) best = i;
  return counts[best] == 0 ? ActivityLabel::Unclassified : kActivities[best];
}

LabelOverrides label_overrides_from_csv(std::string_view text) {
  csv::Reader reader(text);
  expect_header(reader, "project,hash,label");
  LabelOverrides overrides;
  std::map<CommitKey, std::size_t> first_row;
  while (auto row = reader.next()) {
    const std::size_t row_no = reader.record_number();
    const std::string where = "row " + std::to_string(row_no);
    if (row->size() != 3)
      throw Error(ErrorKind::MalformedRecord, where + ": expected 3 fields");
    if ((*row)[0].empty())
      throw Error(ErrorKind::MalformedRecord, where + ": empty project");
    CommitKey key{(*row)[0], normalize_hash((*row)[1])};
    const auto label = parse_activity_label((*row)[2]);
    if (!label || *label == ActivityLabel::Unclassified)
      throw Error(ErrorKind::InvalidLabel,
                  where + ": '" + (*row)[2] +
                      "' is not one of corrective, perfective, adaptive");
    const auto [it, inserted] = first_row.emplace(key, row_no);
    if (!inserted)
      throw Error(ErrorKind::DuplicateKey,
                  "(" + key.first + ", " + key.second + ") on rows " +
                      std::to_string(it->second) + " and " +
                      std::to_string(row_no));
    overrides.emplace(std::move(key), *label);
  }
  return overrides;
}

LabelOverrides load_label_overrides(const std::filesystem::path& path) {
  return label_overrides_from_csv(read_file(path));
}

ClassifyResult classify_dataset(const std::vector<RawCommit>& commits,
                                const KeywordTable& table,
                                const LabelOverrides* overrides) {
  ClassifyResult result;
  result.commits.reserve(commits.size());
  std::set<CommitKey> used;
  for (const auto& commit : commits) {
    LabeledCommit labeled{commit, ActivityLabel::Unclassified, LabelSource::Keyword};
    const auto hit = overrides
                         ? overrides->find(CommitKey{commit.project, commit.hash})
                         : LabelOverrides::const_iterator{};
    if (overrides && hit != overrides->end()) {
      labeled.label = hit->second;
      labeled.source = LabelSource::External;
      used.insert(hit->first);
    } else {
      labeled.label = classify_message(commit.message, table);
    }
    ++result.label_counts[static_cast<std::size_t>(labeled.label)];
    result.commits.push_back(std::move(labeled));
  }
  if (overrides)
    for (const auto& [key, label] : *overrides)
      if (!used.count(key)) result.unknown_overrides.push_back(key);
  return result;
}

}  // namespace maintviz
