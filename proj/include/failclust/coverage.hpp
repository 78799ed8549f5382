#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace failclust {

enum class Verdict { Pass, Fail };

using CoverageMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;
using TestIds = std::vector<int>;

/// Statement-level coverage of a test suite plus the per-test verdicts.
/// `covers(s, t)` is true when test t executed statement s.
class CoverageRecord {
 public:
  CoverageRecord(CoverageMatrix covers, std::vector<Verdict> verdicts);

  int num_statements() const noexcept { return static_cast<int>(covers_.rows()); }
  int num_tests() const noexcept { return static_cast<int>(covers_.cols()); }
  const CoverageMatrix& covers() const noexcept { return covers_; }
  const std::vector<Verdict>& verdicts() const noexcept { return verdicts_; }
  Verdict verdict(int test) const { return verdicts_.at(static_cast<std::size_t>(test)); }

  TestIds failed_ids() const;
  TestIds passed_ids() const;

  /// Copy keeping only the listed tests, in the listed order.
  CoverageRecord select_tests(const TestIds& keep) const;

  friend bool operator==(const CoverageRecord&, const CoverageRecord&) = default;

 private:
  CoverageMatrix covers_;
  std::vector<Verdict> verdicts_;
};

/// Parses the plain-text coverage format:
///   statements=<J> tests=<P>
///   <J chars of 0/1> <P|F>     (one line per test)
/// Lines starting with '#' and blank lines are skipped.
CoverageRecord parse_coverage(std::string_view text);
CoverageRecord load_coverage(const std::string& path);
std::string format_coverage(const CoverageRecord& cov);

/// A test suite drawn from a CoverageRecord: failed tests F and passed tests S.
class SuiteSelection {
 public:
  SuiteSelection(const CoverageRecord& cov, TestIds failed, TestIds passed);

  /// F_t ∪ S: every test of the record.
  static SuiteSelection full(const CoverageRecord& cov);

  const TestIds& failed_ids() const noexcept { return failed_; }
  const TestIds& passed_ids() const noexcept { return passed_; }

 private:
  TestIds failed_;
  TestIds passed_;
};

/// Per-statement counts of one statement: covered/uncovered by failed/successful tests.
struct StatementCounts {
  int cf = 0;
  int uf = 0;
  int cs = 0;
  int us = 0;

  int nf() const noexcept { return cf + uf; }
  int ns() const noexcept { return cs + us; }
  int nc() const noexcept { return cf + cs; }
  int nu() const noexcept { return uf + us; }
  int n() const noexcept { return cf + uf + cs + us; }
};

/// Spectrum counts for every statement over one suite.
struct Spectrum {
  Eigen::VectorXi n_cf;
  Eigen::VectorXi n_uf;
  Eigen::VectorXi n_cs;
  Eigen::VectorXi n_us;
  int n_f = 0;
  int n_s = 0;

  int num_statements() const noexcept { return static_cast<int>(n_cf.size()); }
  int n() const noexcept { return n_f + n_s; }
  Eigen::VectorXi n_c() const { return n_cf + n_cs; }
  Eigen::VectorXi n_u() const { return n_uf + n_us; }

  StatementCounts at(int statement) const {
    return {n_cf(statement), n_uf(statement), n_cs(statement), n_us(statement)};
  }
};

Spectrum compute_spectrum(const CoverageRecord& cov, const SuiteSelection& sel);

}  // namespace failclust
