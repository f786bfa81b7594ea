#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "maintviz/csv.hpp"
#include "maintviz/error.hpp"
#include "maintviz/ingest.hpp"
#include "maintviz/text.hpp"
#include "support/test_support.hpp"

using namespace maintviz;
using maintviz::testing::FixtureRepo;
using maintviz::testing::Rng;
using maintviz::testing::TempDir;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected maintviz::Error");
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("iso8601 formatting") {
  CHECK(format_iso8601(0) == "1970-01-01T00:00:00Z");
  CHECK(format_iso8601(1500000000) == "2017-07-14T02:40:00Z");
  CHECK(format_iso8601(951782400) == "2000-02-29T00:00:00Z");
  CHECK(parse_iso8601("2017-07-14T02:40:00Z") == 1500000000);
  CHECK_FALSE(parse_iso8601("2021-02-29T00:00:00Z"));
  CHECK_FALSE(parse_iso8601("2021-01-01 00:00:00Z"));
  CHECK_FALSE(parse_iso8601("2021-01-01T24:00:00Z"));
  CHECK(floor_to_midnight(1500000000) == 1499990400);

  Rng rng(7);
  for (int i = 0; i < 1000; ++i) {
    const Timestamp t = static_cast<Timestamp>(rng() % 4'000'000'000ULL);
    REQUIRE(parse_iso8601(format_iso8601(t)) == t);
  }
}

TEST_CASE("utf8 sanitizing") {
  CHECK(sanitize_utf8("plain") == "plain");
  CHECK(sanitize_utf8("\xC3\xA9t\xC3\xA9") == "\xC3\xA9t\xC3\xA9");
  CHECK(sanitize_utf8("a\xFF" "b") == "a\xEF\xBF\xBD" "b");
  CHECK(sanitize_utf8("\xED\xA0\x80") == "\xEF\xBF\xBD\xEF\xBF\xBD\xEF\xBF\xBD");
  CHECK_FALSE(is_valid_utf8("\xC3"));
}

TEST_CASE("base64") {
  CHECK(base64_encode("fix bug") == "Zml4IGJ1Zw==");
  CHECK(base64_encode("") == "");
  CHECK(base64_decode("Zml4IGJ1Zw==") == std::string("fix bug"));
  CHECK_FALSE(base64_decode("Zml4IGJ1Zw="));
  CHECK_FALSE(base64_decode("Zml4IGJ1Zx=="));  // non-zero pad bits
  CHECK_FALSE(base64_decode("Zm=4IGJ1"));
  CHECK_FALSE(base64_decode("Zml4 GJ1"));
}

TEST_CASE("parse_export_line decodes one record") {
  const RawCommit c = parse_export_line("proj\tabc1234\tAlice\talice@x.org\t1500000000\tZml4IGJ1Zw==");
  CHECK(c.project == "proj");
  CHECK(c.hash == "abc1234");
  CHECK(c.author_name == "Alice");
  CHECK(c.author_email == "alice@x.org");
  CHECK(c.timestamp == 1500000000);
  CHECK(c.message == "fix bug");

  CHECK(parse_export_line("p\tABC1234\tA\t\t0\t").hash == "abc1234");
}

TEST_CASE("parse_export_line rejects malformed records") {
  const auto bad = [](std::string_view line) {
    return kind_of([&] { parse_export_line(line); });
  };
  CHECK(bad("proj\tabc1234\tAlice\talice@x.org\t1500000000") == ErrorKind::MalformedRecord);
  CHECK(bad("proj\tabc1234\tAlice\talice@x.org\t15e8\tZml4") == ErrorKind::MalformedRecord);
  CHECK(bad("proj\tabc1234\tAlice\talice@x.org\t-5\tZml4") == ErrorKind::MalformedRecord);
  CHECK(bad("proj\tabc1234\tAlice\talice@x.org\t1\t!!!!") == ErrorKind::MalformedRecord);
  CHECK(bad("proj\tabc12\tAlice\talice@x.org\t1\t") == ErrorKind::MalformedRecord);
  CHECK(bad("proj\txyz1234\tAlice\talice@x.org\t1\t") == ErrorKind::MalformedRecord);
  CHECK(bad("\tabc1234\tAlice\talice@x.org\t1\t") == ErrorKind::MalformedRecord);
  CHECK(bad("proj\tabc1234\t\t\t1\t") == ErrorKind::MalformedRecord);
}

TEST_CASE("parse_export counts author-less records and reports line numbers") {
  const std::string text =
      "p\tabc1234\tA\ta@x\t1\tYQ==\n"
      "p\tabc1235\t\t\t2\tYg==\n"
      "p\tabc1236\t\tc@x\t3\t\n";
  IngestReport report;
  const auto commits = parse_export(text, &report);
  CHECK(commits.size() == 2);
  CHECK(report.rejected_without_author == 1);

  try {
    parse_export("p\tabc1234\tA\ta@x\t1\tYQ==\np\tbad\n");
    FAIL("expected failure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::MalformedRecord);
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
}

TEST_CASE("serialize_export_line refuses fields that break the format") {
  RawCommit c{"p", "abc1234", "A\tB", "a@x", 1, "m"};
  CHECK(kind_of([&] { serialize_export_line(c); }) == ErrorKind::MalformedRecord);
  c.author_name = "A";
  CHECK(serialize_export_line(c) == "p\tabc1234\tA\ta@x\t1\tbQ==");
}

TEST_CASE("property: export line parse/serialize identity") {
  Rng rng(11);
  for (int i = 0; i < 300; ++i) {
    auto c = maintviz::testing::random_commit(rng, {}).commit;
    if (c.author_name.empty() && c.author_email.empty()) c.author_name = "x";
    const std::string line = serialize_export_line(c);
    REQUIRE(parse_export_line(line) == c);
    REQUIRE(serialize_export_line(parse_export_line(line)) == line);
  }
}

TEST_CASE("csv reader and writer") {
  std::string out;
  csv::append_row(out, {"a", "b,c", "say \"hi\"", "x\ny", ""});
  CHECK(out == "a,\"b,c\",\"say \"\"hi\"\"\",\"x\ny\",\n");
  const std::string text = out + "1,2\r\n3";
  csv::Reader r(text);
  CHECK(*r.next() == std::vector<std::string>{"a", "b,c", "say \"hi\"", "x\ny", ""});
  CHECK(*r.next() == std::vector<std::string>{"1", "2"});
  CHECK(*r.next() == std::vector<std::string>{"3"});
  CHECK(r.record_number() == 3);
  CHECK_FALSE(r.next());

  csv::Reader unterminated("\"abc");
  CHECK(kind_of([&] { unterminated.next(); }) == ErrorKind::MalformedRecord);
  csv::Reader stray("ab\"c");
  CHECK(kind_of([&] { stray.next(); }) == ErrorKind::MalformedRecord);
}

TEST_CASE("dataset enforces ordering and uniqueness") {
  std::vector<LabeledCommit> rows = {
      {{"b", "aaaaaaa", "A", "", 5, "m"}, ActivityLabel::Adaptive, LabelSource::Keyword},
      {{"a", "bbbbbbb", "A", "", 9, "m"}, ActivityLabel::Corrective, LabelSource::Keyword},
      {{"a", "aaaaaaa", "A", "", 9, "m"}, ActivityLabel::Perfective, LabelSource::Keyword},
      {{"a", "ccccccc", "A", "", 1, "m"}, ActivityLabel::Unclassified, LabelSource::Keyword},
  };
  const Dataset d(rows);
  REQUIRE(d.size() == 4);
  CHECK(d.commits()[0].commit.hash == "ccccccc");
  CHECK(d.commits()[1].commit.hash == "aaaaaaa");
  CHECK(d.commits()[2].commit.hash == "bbbbbbb");
  CHECK(d.commits()[3].commit.project == "b");
  CHECK(d.projects() == std::vector<std::string>{"a", "b"});
  CHECK(d.subset("a").size() == 3);
  CHECK(d.subset("zzz").empty());

  rows.push_back({{"a", "aaaaaaa", "B", "", 100, "other"}, ActivityLabel::Adaptive, LabelSource::Keyword});
  CHECK(kind_of([&] { Dataset bad(rows); }) == ErrorKind::DuplicateKey);
}

TEST_CASE("save/load dataset") {
  TempDir tmp;
  SUBCASE("empty dataset is just the header") {
    save_dataset(Dataset{}, tmp / "e.csv");
    CHECK(read_file(tmp / "e.csv") == std::string(kDatasetHeader) + "\n");
    CHECK(load_dataset(tmp / "e.csv").empty());
  }
  SUBCASE("multi-line message survives") {
    const Dataset d({{{"p", "abc1234", "A", "a@x", 10, "a\nb"}, ActivityLabel::Corrective, LabelSource::Keyword}});
    save_dataset(d, tmp / "m.csv");
    const Dataset back = load_dataset(tmp / "m.csv");
    CHECK(back == d);
    CHECK(back.commits()[0].commit.message == "a\nb");
    CHECK(back.commits()[0].source == LabelSource::External);
  }
  SUBCASE("wrong header") {
    write_file(tmp / "h.csv", "project,hash,author,author_email,timestamp_utc,message,label\n");
    CHECK(kind_of([&] { load_dataset(tmp / "h.csv"); }) == ErrorKind::SchemaMismatch);
  }
  SUBCASE("bad rows name their row") {
    write_file(tmp / "r.csv", std::string(kDatasetHeader) +
                                  "\np,abc1234,A,,2020-01-01T00:00:00Z,m,corrective"
                                  "\np,abc1235,A,,2020-13-01T00:00:00Z,m,corrective\n");
    try {
      load_dataset(tmp / "r.csv");
      FAIL("expected failure");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::MalformedRecord);
      CHECK(std::string(e.what()).find("row 3") != std::string::npos);
    }
    write_file(tmp / "l.csv", std::string(kDatasetHeader) +
                                  "\np,abc1234,A,,2020-01-01T00:00:00Z,m,bugfix\n");
    CHECK(kind_of([&] { load_dataset(tmp / "l.csv"); }) == ErrorKind::MalformedRecord);
  }
  SUBCASE("missing file") {
    CHECK(kind_of([&] { load_dataset(tmp / "nope.csv"); }) == ErrorKind::IoFailure);
  }
}

TEST_CASE("property: load(save(d)) == d") {
  Rng rng(23);
  TempDir tmp;
  for (int i = 0; i < 50; ++i) {
    auto rows = maintviz::testing::random_commits(rng, rng() % 40);
    for (auto& r : rows)
      if (r.commit.author_name.empty() && r.commit.author_email.empty()) r.commit.author_name = "x";
    const Dataset d(rows);
    save_dataset(d, tmp / "d.csv");
    REQUIRE(load_dataset(tmp / "d.csv") == d);
  }
}

TEST_CASE("read_git_history follows the first-parent lineage") {
  TempDir tmp;
  FixtureRepo repo(tmp / "repo");
  const std::string h1 = repo.commit("initial import", 1'600'000'000);
  const std::string h2 = repo.commit("fix crash\n\nlong body\n", 1'600'086'400, "Bob", "bob@x.org");
  repo.branch("side");
  const std::string side = repo.commit("add side feature", 1'600'100'000);
  repo.checkout("main");
  const std::string h3 = repo.commit("refactor", 1'600'200'000);
  const std::string m = repo.merge("side", "Merge branch side", 1'600'300'000);

  const auto commits = read_git_history(repo.path(), "demo");
  REQUIRE(commits.size() == repo.first_parent_count());
  REQUIRE(commits.size() == 4);
  std::set<std::string> hashes;
  for (const auto& c : commits) {
    CHECK(c.project == "demo");
    hashes.insert(c.hash);
  }
  CHECK(hashes == std::set<std::string>{h1, h2, h3, m});
  CHECK_FALSE(hashes.count(side));

  CHECK(commits.front().hash == h1);
  CHECK(commits[1].message == "fix crash\n\nlong body\n");
  CHECK(commits[1].author_name == "Bob");
  CHECK(commits[1].timestamp == 1'600'086'400);

  SUBCASE("deterministic") { CHECK(read_git_history(repo.path(), "demo") == commits); }
}

TEST_CASE("read_git_history errors") {
  TempDir tmp;
  std::filesystem::create_directories(tmp / "empty-dir");
  CHECK(kind_of([&] { read_git_history(tmp / "empty-dir", "p"); }) == ErrorKind::NotARepository);
  CHECK(kind_of([&] { read_git_history(tmp / "missing", "p"); }) == ErrorKind::IoFailure);
  FixtureRepo fresh(tmp / "fresh");
  CHECK(kind_of([&] { read_git_history(fresh.path(), "p"); }) == ErrorKind::EmptyRepository);
  // A plain directory nested inside a repository is still not one.
  std::filesystem::create_directories(fresh.path() / "sub");
  CHECK(kind_of([&] { read_git_history(fresh.path() / "sub", "p"); }) == ErrorKind::NotARepository);
}

TEST_CASE("read_git_history timestamps use author time in UTC") {
  TempDir tmp;
  FixtureRepo repo(tmp / "tz");
  // Author date with a +0200 offset still lands on the same epoch second.
  [[maybe_unused]] const int rc = std::system(("cd '" + repo.path().string() +
               "' && GIT_AUTHOR_DATE='2020-01-01T12:00:00+0200' GIT_COMMITTER_DATE='2021-01-01T00:00:00Z' "
               "git -c user.name=A -c user.email=a@x commit -q --allow-empty -m t >/dev/null 2>&1")
                  .c_str());
  const auto commits = read_git_history(repo.path(), "p");
  REQUIRE(commits.size() == 1);
  CHECK(commits[0].timestamp == *parse_iso8601("2020-01-01T10:00:00Z"));
}
