#pragma once

#include "failclust/cluster.hpp"
#include "failclust/coverage.hpp"

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace failclust {

/// Ground-truth fault of every failed test, indexed like the clustered failures.
class OracleLabels {
 public:
  OracleLabels() = default;
  /// Fault ids are compacted to [0, r) in increasing order of the given ids.
  /// When `declared_r` exceeds the number of faults actually present, r is
  /// reduced and a warning is recorded.
  OracleLabels(TestIds test_ids, std::vector<int> faults, std::optional<int> declared_r = {});

  int size() const noexcept { return static_cast<int>(faults_.size()); }
  int r() const noexcept { return r_; }
  const TestIds& test_ids() const noexcept { return test_ids_; }
  const std::vector<int>& faults() const noexcept { return faults_; }
  int fault(int i) const { return faults_.at(static_cast<std::size_t>(i)); }
  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

 private:
  TestIds test_ids_;
  std::vector<int> faults_;
  int r_ = 0;
  std::vector<std::string> warnings_;
};

/// One `<test_id> <fault_id>` pair per line; '#' comments allowed. A test
/// listed twice is rejected (failures must map to exactly one fault).
OracleLabels parse_oracle(std::string_view text);
OracleLabels load_oracle(const std::string& path);
std::string format_oracle(const OracleLabels& oracle);

struct PairCounts {
  long x_ss = 0;
  long x_sd = 0;
  long x_ds = 0;
  long x_dd = 0;
};

struct CaseCounts {
  long x_tp = 0;
  long x_fp = 0;
  long x_tn = 0;
  long x_fn = 0;

  CaseCounts& operator+=(const CaseCounts& o) {
    x_tp += o.x_tp;
    x_fp += o.x_fp;
    x_tn += o.x_tn;
    x_fn += o.x_fn;
    return *this;
  }
};

/// Generated clusters (first) against oracle faults (second) over all unordered pairs.
PairCounts pair_counts(std::span<const int> generated, std::span<const int> oracle);
PairCounts pair_counts(const Clustering& gen, const OracleLabels& oracle);

// Metric values; every 0/0 evaluates to 1.
double jc(const PairCounts& c);
double fmi(const PairCounts& c);
double pr(const CaseCounts& c);
double rr(const CaseCounts& c);

/// `mapping[f]` is the generated cluster matched with oracle fault f.
CaseCounts case_counts(std::span<const int> generated, std::span<const int> oracle,
                       std::span<const int> mapping, int positive_fault);
CaseCounts case_counts(const Clustering& gen, const OracleLabels& oracle,
                       std::span<const int> mapping, int positive_fault);

enum class Category { Under, Equal, Over };
std::string_view category_name(Category c);

enum class Metric { JC, FMI, PR, RR };
inline constexpr std::array<Metric, 4> kMetrics = {Metric::JC, Metric::FMI, Metric::PR, Metric::RR};
std::string_view metric_name(Metric m);

struct MetricResult {
  double value = 0.0;
  std::vector<int> permutation;  // the lexicographically first arg-max mapping
};

struct EvalReport {
  Category category = Category::Under;
  int k = 0;
  int r = 0;
  std::optional<std::array<MetricResult, 4>> metrics;  // present only when Equal
  int votes = 0;                                        // 0 unless Equal

  double value(Metric m) const;
};

/// Classifies k vs r; for k == r enumerates all r! cluster mappings.
EvalReport evaluate_version(std::span<const int> generated, int k, const OracleLabels& oracle);
EvalReport evaluate_version(const Clustering& gen, const OracleLabels& oracle);

/// Σ of metric values over Equal reports (others are skipped).
double sum_metric(std::span<const EvalReport> reports, Metric m);

struct Deviation {
  std::optional<double> over;
  std::optional<double> under;
  std::optional<double> mean;
};

/// Each entry is (k, r).
Deviation deviation(std::span<const std::pair<int, int>> estimates);

/// Σ of votes over Equal reports (others are skipped).
long sum_vote(std::span<const EvalReport> reports);

/// Clustering CSV: failed_test_id,cluster_id,is_medoid
std::string format_clustering_csv(const Clustering& c, const TestIds& failed_ids);
/// Parses the clustering CSV into (failed_test_ids, cluster ids); k is max id + 1.
std::pair<TestIds, std::vector<int>> parse_clustering_csv(std::string_view text);

}  // namespace failclust
