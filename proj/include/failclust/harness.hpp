#pragma once

#include "failclust/cluster.hpp"
#include "failclust/config.hpp"
#include "failclust/eval.hpp"
#include "failclust/faultgen.hpp"
#include "failclust/srr.hpp"

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace failclust {

/// One labeled faulty version of a corpus.
struct CorpusVersion {
  std::string id;
  CoverageRecord coverage;
  OracleLabels oracle;
  std::optional<int> nof;
  std::optional<FaultTypeClass> fault_type;
  std::optional<MicroProgram> program;  // the faulty program, microlang corpora only
};

struct Corpus {
  std::vector<CorpusVersion> versions;
  std::vector<std::string> warnings;
};

Corpus build_corpus(const ExperimentConfig& cfg);

/// Reads `<dir>/corpus.txt`: one `<version_id> <coverage file> <oracle file> [nof=<r>] [type=<T>]`
/// line per version, file names relative to `dir`.
Corpus load_corpus_dir(const std::string& dir);
/// Writes coverage, oracle and (when present) program files plus corpus.txt.
void write_corpus_dir(const Corpus& corpus, const std::string& dir);

struct PipelineResult {
  ClusterEstimate estimate;
  Clustering clustering;
  std::vector<int> generated;  // cluster of each oracle entry, in oracle order
  EvalReport report;
};

/// Proxies, distances, estimate, k-medoids and evaluation of one version.
/// The failed tests of `cov` must be exactly the oracle's tests.
PipelineResult run_pipeline(const CoverageRecord& cov, const OracleLabels& oracle, RefId ref,
                            const Nsp1fPolicy& policy, const MountainParams& params);

struct CategoryCounts {
  int v_under = 0;
  int v_equal = 0;
  int v_over = 0;

  int total() const noexcept { return v_under + v_equal + v_over; }
};

/// Quartiles by linear interpolation between order statistics (inclusive method).
struct BoxSummary {
  int n = 0;
  double lower_quartile = 0.0;
  double median = 0.0;
  double upper_quartile = 0.0;
  double mean = 0.0;
};

/// Throws DomainError on an empty list.
BoxSummary box_summary(std::vector<double> values);

/// v_equal / max(v_equal) per level; all zero (with a warning) when every count is zero.
std::vector<double> opacity(std::span<const int> v_equal, std::vector<std::string>* warnings = nullptr);

/// Aggregates over the versions falling into one factor level.
struct LevelStats {
  std::string level;
  CategoryCounts counts;
  std::array<double, 4> sum_metric{};
  long sum_vote = 0;
  std::array<std::vector<double>, 4> values;  // per metric, Equal versions only
  std::vector<std::pair<int, int>> estimates; // (k, r) of every version

  void add(const EvalReport& report);
  Deviation deviation() const { return failclust::deviation(estimates); }
};

/// Output of one experiment: file name -> contents, plus warnings.
struct Report {
  std::map<std::string, std::string> files;
  std::vector<std::string> warnings;
};

Report run_rq1(const ExperimentConfig& cfg, const Corpus& corpus);
Report run_rq2(const ExperimentConfig& cfg, const Corpus& corpus);
Report run_rq3(const ExperimentConfig& cfg, const Corpus& corpus);
Report run_rq4(const ExperimentConfig& cfg, const Corpus& corpus);

/// Creates `dir` if needed and writes every file of the report.
void write_report(const Report& report, const std::string& dir);

/// Report CSV of evaluated versions: version_id,category,k,r,JC,FMI,PR,RR,votes
std::string format_report_csv(std::span<const std::pair<std::string, EvalReport>> rows);

}  // namespace failclust
