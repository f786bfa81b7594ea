#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "maintviz/cli.hpp"
#include "maintviz/classify.hpp"
#include "maintviz/service.hpp"
#include "support/test_support.hpp"

using namespace maintviz;
using maintviz::testing::FixtureRepo;
using maintviz::testing::TempDir;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run maintviz_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "maintviz");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

void write_dataset(const std::filesystem::path& path,
                   const std::vector<std::pair<std::string, ActivityLabel>>& rows) {
  std::vector<LabeledCommit> commits;
  int i = 0;
  for (const auto& [project, label] : rows) {
    commits.push_back({{project, "abcdef" + std::to_string(100 + i), "Dev", "dev@x.org",
                        1'600'000'000 + 3600LL * i, "m"},
                       label,
                       LabelSource::Keyword});
    ++i;
  }
  save_dataset(Dataset(commits), path);
}

}  // namespace

TEST_CASE("usage errors exit 2") {
  CHECK(maintviz_cli({}).code == cli::kExitUsage);
  CHECK(maintviz_cli({"frobnicate"}).code == cli::kExitUsage);
  CHECK(maintviz_cli({"ingest", "--out", "x.csv"}).code == cli::kExitUsage);
  CHECK(maintviz_cli({"ingest", "--repo", ".", "--out", "x.csv"}).code == cli::kExitUsage);
  CHECK(maintviz_cli({"stats", "--in", "d.csv", "--threshold", "0.5"}).code == cli::kExitUsage);
  CHECK(maintviz_cli({"stats", "--in", "d.csv", "--threshold", "0"}).code == cli::kExitUsage);
  CHECK(maintviz_cli({"stats", "--in", "d.csv", "--bucket-days", "0"}).code == cli::kExitUsage);
  CHECK(maintviz_cli({"classify", "--in", "d.csv"}).code == cli::kExitUsage);
  CHECK(maintviz_cli({"--help"}).code == cli::kExitOk);
}

TEST_CASE("ingest from an export file") {
  TempDir tmp;
  write_file(tmp / "e.tsv",
             "demo\tabc1234\tAlice\talice@x.org\t1500000000\tZml4IGJ1Zw==\n"
             "demo\tabc1235\t\t\t1500000001\tYWRk\n"
             "demo\tabc1236\tBob\t\t1500000002\tYWRkIHN1cHBvcnQ=\n");
  const auto r = maintviz_cli({"ingest", "--from-export", (tmp / "e.tsv").string(), "--out",
                               (tmp / "d.csv").string()});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.out == "commits 2 corrective 1 perfective 0 adaptive 1 unclassified 0\n");
  CHECK(r.err.find("skipped 1 commit") != std::string::npos);
  const Dataset d = load_dataset(tmp / "d.csv");
  REQUIRE(d.size() == 2);
  CHECK(d.commits()[0].commit.message == "fix bug");
  CHECK(d.commits()[0].label == ActivityLabel::Corrective);

  write_file(tmp / "bad.tsv", "demo\tabc1234\tAlice\n");
  const auto bad = maintviz_cli({"ingest", "--from-export", (tmp / "bad.tsv").string(), "--out",
                                 (tmp / "x.csv").string()});
  CHECK(bad.code == cli::kExitError);
  CHECK(bad.err.find("line 1") != std::string::npos);
}

TEST_CASE("pipeline over a git repository") {
  TempDir tmp;
  FixtureRepo repo(tmp / "repo");
  repo.commit("initial import", 1'600'000'000);
  repo.commit("fix crash", 1'600'100'000);
  repo.branch("topic");
  repo.commit("add feature on topic", 1'600'150'000);
  repo.checkout("main");
  repo.commit("cleanup docs", 1'600'200'000);
  repo.merge("topic", "Merge topic", 1'600'300'000);

  const std::string out1 = (tmp / "a.csv").string(), out2 = (tmp / "b.csv").string();
  auto r = maintviz_cli({"ingest", "--repo", repo.path().string(), "--project", "demo", "--out", out1});
  CHECK(r.code == cli::kExitOk);
  CHECK(load_dataset(out1).size() == repo.first_parent_count());
  r = maintviz_cli({"ingest", "--repo", repo.path().string(), "--project", "demo", "--out", out2});
  CHECK(read_file(out1) == read_file(out2));

  const auto bad = maintviz_cli({"ingest", "--repo", tmp.path().string(), "--project", "x", "--out", out1});
  CHECK(bad.code == cli::kExitError);
  CHECK(bad.err.find("NotARepository") != std::string::npos);
}

TEST_CASE("classify applies keywords and overrides") {
  TempDir tmp;
  write_dataset(tmp / "d.csv", {{"p", ActivityLabel::Unclassified}, {"p", ActivityLabel::Unclassified}});
  write_file(tmp / "k.csv", "label,word\nperfective,m\n");
  write_file(tmp / "l.csv", "project,hash,label\np,abcdef101,adaptive\np,fffffff,corrective\n");
  const auto r = maintviz_cli({"classify", "--in", (tmp / "d.csv").string(), "--out",
                               (tmp / "o.csv").string(), "--keywords", (tmp / "k.csv").string(),
                               "--labels", (tmp / "l.csv").string()});
  CHECK(r.code == cli::kExitOk);
  CHECK(r.err.find("(p, fffffff)") != std::string::npos);
  const Dataset d = load_dataset(tmp / "o.csv");
  CHECK(d.commits()[0].label == ActivityLabel::Perfective);
  CHECK(d.commits()[1].label == ActivityLabel::Adaptive);

  write_file(tmp / "dup.csv", "project,hash,label\np,abcdef101,adaptive\np,abcdef101,corrective\n");
  CHECK(maintviz_cli({"classify", "--in", (tmp / "d.csv").string(), "--out", (tmp / "o.csv").string(),
                      "--labels", (tmp / "dup.csv").string()})
            .code == cli::kExitError);
}

TEST_CASE("stats exit codes and report") {
  TempDir tmp;
  write_dataset(tmp / "even.csv", {{"p", ActivityLabel::Corrective}, {"p", ActivityLabel::Perfective},
                                   {"p", ActivityLabel::Adaptive}, {"p", ActivityLabel::Unclassified}});
  write_dataset(tmp / "mono.csv", {{"p", ActivityLabel::Corrective}, {"p", ActivityLabel::Corrective},
                                   {"q", ActivityLabel::Corrective}, {"q", ActivityLabel::Adaptive},
                                   {"q", ActivityLabel::Perfective}});

  const auto even = maintviz_cli({"stats", "--in", (tmp / "even.csv").string()});
  CHECK(even.code == cli::kExitOk);
  CHECK(even.out ==
        "project p\n"
        "  commits 4\n"
        "  corrective 1\n"
        "  perfective 1\n"
        "  adaptive 1\n"
        "  unclassified 1 fraction 0.250000\n"
        "  proportions corrective=0.333333 perfective=0.333333 adaptive=0.333333\n"
        "  balance balanced threshold 0.150000\n"
        "  buckets 1 width_days 28\n"
        "  anomalies 0\n");
  CHECK(maintviz_cli({"stats", "--in", (tmp / "even.csv").string()}).out == even.out);

  CHECK(maintviz_cli({"stats", "--in", (tmp / "mono.csv").string()}).code == cli::kExitUnbalanced);
  CHECK(maintviz_cli({"stats", "--in", (tmp / "mono.csv").string(), "--project", "q"}).code == cli::kExitOk);
  CHECK(maintviz_cli({"stats", "--in", (tmp / "mono.csv").string(), "--project", "zz"}).code ==
        cli::kExitError);
  CHECK(maintviz_cli({"stats", "--in", (tmp / "missing.csv").string()}).code == cli::kExitError);
  write_file(tmp / "schema.csv", "project,hash\n");
  CHECK(maintviz_cli({"stats", "--in", (tmp / "schema.csv").string()}).code == cli::kExitError);
}

TEST_CASE("stats proportions equal balance_profile") {
  TempDir tmp;
  maintviz::testing::Rng rng(3);
  auto rows = maintviz::testing::random_commits(rng, 150);
  for (auto& r : rows)
    if (r.commit.author_name.empty() && r.commit.author_email.empty()) r.commit.author_name = "x";
  const Dataset data(rows);
  save_dataset(data, tmp / "d.csv");
  const auto r = maintviz_cli({"stats", "--in", (tmp / "d.csv").string(), "--project", "beta",
                               "--threshold", "0.2", "--bucket-days", "7"});
  const auto p = balance_profile(filter_commits(data.commits(), "beta", std::nullopt, std::nullopt), 0.2);
  char line[256];
  std::snprintf(line, sizeof line, "  proportions corrective=%.6f perfective=%.6f adaptive=%.6f\n",
                p.proportion(ActivityLabel::Corrective), p.proportion(ActivityLabel::Perfective),
                p.proportion(ActivityLabel::Adaptive));
  CHECK(r.out.find(line) != std::string::npos);
  CHECK(r.code == (p.balanced ? cli::kExitOk : cli::kExitUnbalanced));
  CHECK(r.out.find("width_days 7") != std::string::npos);
}

TEST_CASE("export matches the service endpoint") {
  TempDir tmp;
  write_dataset(tmp / "d.csv", {{"p", ActivityLabel::Corrective}, {"q", ActivityLabel::Adaptive},
                                {"q", ActivityLabel::Perfective}});
  auto r = maintviz_cli({"export", "--in", (tmp / "d.csv").string(), "--project", "q", "--out",
                         (tmp / "q.csv").string()});
  CHECK(r.code == cli::kExitOk);
  Api api(load_dataset(tmp / "d.csv"));
  CHECK(read_file(tmp / "q.csv") == api.export_csv({{"project", "q"}}).body);
  r = maintviz_cli({"export", "--in", (tmp / "d.csv").string(), "--out", (tmp / "all.csv").string()});
  CHECK(read_file(tmp / "all.csv") == read_file(tmp / "d.csv"));
  CHECK(maintviz_cli({"export", "--in", (tmp / "d.csv").string(), "--project", "zz", "--out",
                      (tmp / "z.csv").string()})
            .code == cli::kExitError);
}

TEST_CASE("serve fails fast on an unreadable dataset") {
  CHECK(maintviz_cli({"serve", "--in", "/nonexistent/d.csv", "--port", "0"}).code == cli::kExitError);
  unsetenv("MAINTVIZ_DATASET");
  const auto r = maintviz_cli({"serve", "--port", "0"});
  CHECK(r.code == cli::kExitError);
  CHECK(r.err.find("MAINTVIZ_DATASET") != std::string::npos);
  setenv("MAINTVIZ_DATASET", "/nonexistent/env.csv", 1);
  CHECK(maintviz_cli({"serve", "--port", "0"}).code == cli::kExitError);
  unsetenv("MAINTVIZ_DATASET");
}
