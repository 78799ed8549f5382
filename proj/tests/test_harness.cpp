#include "failclust/config.hpp"
#include "failclust/error.hpp"
#include "failclust/harness.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

using namespace failclust;

namespace {

std::string config_message(std::string_view text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

ExperimentConfig small_config(std::string extra = {}) {
  return parse_config(
      "seed = 3\nsynthetic.faults = 2,3\nsynthetic.versions = 3\nsynthetic.passed = 20\n"
      "synthetic.statements = 15\n" +
      extra);
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::string drop_first_field(const std::string& line) { return line.substr(line.find(',')); }

CorpusVersion motivating_version(std::string id) {
  return {std::move(id), load_coverage(test::data_path("motivating.cov")),
          load_oracle(test::data_path("motivating.oracle")), 2, FaultTypeClass::TypeA, {}};
}

}  // namespace

TEST(Config, ParsesKeysAndDefaults) {
  const auto cfg = parse_config(
      "# run\nseed = 42\ncorpus = microlang\nrefs = Ochiai, Group12\nnsp1f = 100, 20\n"
      "stop_ratio = 0.2\nmicrolang.types = TypeH\nmicrolang.faults = 3\n");
  EXPECT_EQ(cfg.seed, 42u);
  EXPECT_EQ(cfg.corpus, "microlang");
  EXPECT_EQ(cfg.refs, (std::vector<RefId>{RefId::Ochiai, RefId::GP19}));
  EXPECT_EQ(cfg.nsp1f, (std::vector<double>{1.0, 0.2}));
  EXPECT_EQ(cfg.mountain.stop_ratio, 0.2);
  EXPECT_EQ(cfg.microlang.types, std::vector<FaultTypeClass>{FaultTypeClass::TypeH});
  EXPECT_EQ(cfg.microlang.faults, std::vector<int>{3});
  EXPECT_EQ(parse_config("seed = 1").refs, group_representatives());
  EXPECT_EQ(parse_config("seed = 1\nrefs = all-groups").refs.size(), 12u);
}

TEST(Config, ErrorsNameTheField) {
  EXPECT_EQ(config_message("corpus = synthetic\n"), "seed: required");
  EXPECT_NE(config_message("seed = 1\nbogus = 2\n").find("bogus"), std::string::npos);
  EXPECT_NE(config_message("seed = x\n").find("seed"), std::string::npos);
  EXPECT_NE(config_message("seed = 1\nnsp1f = 0\n").find("nsp1f"), std::string::npos);
  EXPECT_NE(config_message("seed = 1\nnsp1f = 120\n").find("nsp1f"), std::string::npos);
  EXPECT_NE(config_message("seed = 1\nrefs = Nope\n").find("refs"), std::string::npos);
  EXPECT_NE(config_message("seed = 1\ncorpus = sir\n").find("corpus"), std::string::npos);
  EXPECT_NE(config_message("seed = 1\nsynthetic.noise = 1\n").find("synthetic.noise"), std::string::npos);
  EXPECT_NE(config_message("seed = 1\nstop_ratio = 2\n").find("stop_ratio"), std::string::npos);
  EXPECT_NE(config_message("seed = 1\nmicrolang.types = TypeQ\n").find("microlang.types"), std::string::npos);
  EXPECT_NE(config_message("seed 1\n").find("line 1"), std::string::npos);
  EXPECT_THROW(parse_mountain_params("seed = 1\n"), ConfigError);
  EXPECT_EQ(parse_mountain_params("winsor_low = 0.1\n").winsor_low, 0.1);
}

TEST(Opacity, ScalesByLargestLevel) {
  const std::vector<int> counts = {50, 100, 75, 25};
  EXPECT_EQ(opacity(counts), (std::vector<double>{0.5, 1.0, 0.75, 0.25}));
  const std::vector<int> one = {7};
  EXPECT_EQ(opacity(one), std::vector<double>{1.0});
  const std::vector<int> zeros = {0, 0};
  std::vector<std::string> warnings;
  EXPECT_EQ(opacity(zeros, &warnings), (std::vector<double>{0.0, 0.0}));
  EXPECT_EQ(warnings.size(), 1u);
  EXPECT_THROW(opacity(std::vector<int>{}), DomainError);
}

TEST(BoxSummaryProperty, MatchesSortedRecomputation) {
  std::mt19937_64 g(81);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<double> v(1 + g() % 15);
    for (auto& x : v) x = static_cast<double>(g() % 1000) / 999.0;
    const auto b = box_summary(v);
    std::sort(v.begin(), v.end());
    const auto at = [&](double q) {
      const double pos = q * static_cast<double>(v.size() - 1);
      const auto i = static_cast<std::size_t>(pos);
      return i + 1 < v.size() ? v[i] + (pos - static_cast<double>(i)) * (v[i + 1] - v[i]) : v[i];
    };
    ASSERT_EQ(b.n, static_cast<int>(v.size()));
    ASSERT_NEAR(b.lower_quartile, at(0.25), 1e-12);
    ASSERT_NEAR(b.median, at(0.5), 1e-12);
    ASSERT_NEAR(b.upper_quartile, at(0.75), 1e-12);
    ASSERT_NEAR(b.mean, std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()), 1e-12);
    ASSERT_LE(b.lower_quartile, b.median);
    ASSERT_LE(b.median, b.upper_quartile);
  }
  EXPECT_THROW(box_summary({}), DomainError);
}

TEST(Pipeline, MotivatingVersionIsPerfect) {
  const auto v = motivating_version("m");
  const auto res = run_pipeline(v.coverage, v.oracle, RefId::Ochiai, {1.0, 0}, {});
  EXPECT_EQ(res.report.category, Category::Equal);
  for (Metric m : kMetrics) EXPECT_EQ(res.report.value(m), 1.0);
  EXPECT_EQ(res.report.votes, 4);
}

TEST(Pipeline, IdenticalProxiesCollapseToOneCluster) {
  // Every failed test takes the same path but two faults are declared.
  CoverageMatrix m(4, 5);
  m << 1, 1, 1, 1, 1,
       1, 1, 1, 1, 0,
       0, 0, 0, 0, 1,
       1, 1, 1, 1, 0;
  const CoverageRecord cov(m, {Verdict::Fail, Verdict::Fail, Verdict::Fail, Verdict::Fail, Verdict::Pass});
  const OracleLabels oracle({0, 1, 2, 3}, {0, 0, 1, 1});
  const auto res = run_pipeline(cov, oracle, RefId::Ochiai, {1.0, 0}, {});
  EXPECT_EQ(res.estimate.k, 1);
  EXPECT_EQ(res.report.category, Category::Under);
}

TEST(Pipeline, OracleMustMatchFailures) {
  const auto v = motivating_version("m");
  const OracleLabels partial({2, 3}, {0, 1});
  EXPECT_ANY_THROW(run_pipeline(v.coverage, partial, RefId::Ochiai, {1.0, 0}, {}));
}

TEST(Experiments, Rq1IsDeterministic) {
  const auto cfg = small_config("synthetic.noise = 0.1\nrefs = Ochiai, GP19\n");
  const auto a = run_rq1(cfg, build_corpus(cfg));
  const auto b = run_rq1(cfg, build_corpus(cfg));
  EXPECT_EQ(a.files, b.files);
  for (const char* f : {"rq1_summary.csv", "rq1_versions.csv", "rq1_dominance_JC.csv", "manifest.json"})
    EXPECT_TRUE(a.files.count(f)) << f;
  EXPECT_EQ(lines_of(a.files.at("rq1_summary.csv")).size(), 3u);
  EXPECT_EQ(lines_of(a.files.at("rq1_versions.csv")).size(), 1u + 2 * 6);
}

TEST(Experiments, SameGroupRefsGiveIdenticalRows) {
  const auto cfg = small_config("synthetic.noise = 0.15\nrefs = Jaccard, Dice, Goodman\n");
  const auto rep = run_rq1(cfg, build_corpus(cfg));
  const auto summary = lines_of(rep.files.at("rq1_summary.csv"));
  ASSERT_EQ(summary.size(), 4u);
  EXPECT_EQ(drop_first_field(summary[1]), drop_first_field(summary[2]));
  EXPECT_EQ(drop_first_field(summary[1]), drop_first_field(summary[3]));
  const auto versions = lines_of(rep.files.at("rq1_versions.csv"));
  const std::size_t per_ref = (versions.size() - 1) / 3;
  for (std::size_t i = 1; i <= per_ref; ++i) {
    EXPECT_EQ(drop_first_field(versions[i]), drop_first_field(versions[i + per_ref]));
    EXPECT_EQ(drop_first_field(versions[i]), drop_first_field(versions[i + 2 * per_ref]));
  }
  EXPECT_EQ(rep.files.at("rq1_dominance_FMI.csv"), "ref,Jaccard,Dice,Goodman\nJaccard,0,0,0\nDice,0,0,0\nGoodman,0,0,0\n");
}

TEST(Experiments, EmptyCorpusWarns) {
  const auto cfg = small_config("refs = Ochiai\n");
  const Corpus empty{{}, {"corpus is empty"}};
  const auto rep = run_rq1(cfg, empty);
  EXPECT_EQ(lines_of(rep.files.at("rq1_versions.csv")).size(), 1u);
  EXPECT_NE(std::find(rep.warnings.begin(), rep.warnings.end(), "corpus is empty"), rep.warnings.end());
}

TEST(Experiments, Rq2NeedsNof) {
  const auto cfg = small_config("refs = Ochiai\n");
  Corpus corpus{{motivating_version("a")}, {}};
  corpus.versions[0].nof.reset();
  try {
    run_rq2(cfg, corpus);
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("nof"), std::string::npos);
  }
}

TEST(Experiments, Rq2SingleLevel) {
  const auto cfg = small_config("refs = Ochiai\n");
  const Corpus corpus{{motivating_version("a"), motivating_version("b")}, {}};
  const auto summary = lines_of(run_rq2(cfg, corpus).files.at("rq2_summary.csv"));
  ASSERT_EQ(summary.size(), 2u);
  EXPECT_EQ(summary[1].rfind("Ochiai,Group3,2,2,0,2,0,1.000000", 0), 0u) << summary[1];
}

TEST(Experiments, Rq3NotesAbsentTypes) {
  const auto cfg = small_config("refs = Ochiai\n");
  Corpus corpus{{motivating_version("a")}, {}};
  corpus.versions[0].fault_type = FaultTypeClass::TypeH;
  const auto rep = run_rq3(cfg, corpus);
  const auto summary = lines_of(rep.files.at("rq3_summary.csv"));
  ASSERT_EQ(summary.size(), 2u);
  EXPECT_NE(summary[1].find(",TypeH,"), std::string::npos);
  int notes = 0;
  for (const auto& w : rep.warnings) notes += w.find("rows omitted") != std::string::npos;
  EXPECT_EQ(notes, 2);
  corpus.versions[0].fault_type.reset();
  EXPECT_THROW(run_rq3(cfg, corpus), ConfigError);
}

TEST(Experiments, Rq4LevelsPerFraction) {
  const auto cfg = small_config("refs = GP19\nnsp1f = 100, 20\n");
  const auto rep = run_rq4(cfg, build_corpus(cfg));
  const auto summary = lines_of(rep.files.at("rq4_summary.csv"));
  ASSERT_EQ(summary.size(), 3u);
  EXPECT_NE(summary[1].find(",100,"), std::string::npos);
  EXPECT_NE(summary[2].find(",20,"), std::string::npos);
  EXPECT_EQ(lines_of(rep.files.at("rq4_box.csv")).front(), "ref,nsp1f,metric,n,lower_quartile,median,upper_quartile,mean");
}

TEST(Corpus, DirectoryRoundTrip) {
  const auto cfg = small_config();
  const auto corpus = build_corpus(cfg);
  ASSERT_EQ(corpus.versions.size(), 6u);
  const auto dir = std::filesystem::temp_directory_path() / "failclust_corpus_roundtrip";
  std::filesystem::remove_all(dir);
  write_corpus_dir(corpus, dir.string());
  const auto back = load_corpus_dir(dir.string());
  ASSERT_EQ(back.versions.size(), corpus.versions.size());
  for (std::size_t i = 0; i < back.versions.size(); ++i) {
    EXPECT_EQ(back.versions[i].id, corpus.versions[i].id);
    EXPECT_EQ(back.versions[i].coverage, corpus.versions[i].coverage);
    EXPECT_EQ(back.versions[i].oracle.faults(), corpus.versions[i].oracle.faults());
    EXPECT_EQ(back.versions[i].nof, corpus.versions[i].nof);
  }
  std::filesystem::remove_all(dir);
}

TEST(Corpus, BadManifestNamesVersion) {
  const auto dir = std::filesystem::temp_directory_path() / "failclust_corpus_bad";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  std::ofstream(dir / "corpus.txt") << "v1 missing.cov missing.oracle nof=2\n";
  try {
    load_corpus_dir(dir.string());
    FAIL() << "expected an error";
  } catch (const std::exception& e) {
    EXPECT_NE(std::string(e.what()).find("v1"), std::string::npos);
  }
  std::filesystem::remove_all(dir);
}
