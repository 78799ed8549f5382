#include "failclust/coverage.hpp"

#include "failclust/error.hpp"

#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace failclust {

CoverageRecord::CoverageRecord(CoverageMatrix covers, std::vector<Verdict> verdicts)
    : covers_(std::move(covers)), verdicts_(std::move(verdicts)) {
  if (covers_.rows() == 0) throw DomainError("coverage record has no statements");
  if (covers_.cols() == 0) throw DomainError("coverage record has no tests");
  if (static_cast<Eigen::Index>(verdicts_.size()) != covers_.cols())
    throw DomainError("verdict count does not match the number of tests");
}

TestIds CoverageRecord::failed_ids() const {
  TestIds ids;
  for (int t = 0; t < num_tests(); ++t)
    if (verdicts_[t] == Verdict::Fail) ids.push_back(t);
  return ids;
}

TestIds CoverageRecord::passed_ids() const {
  TestIds ids;
  for (int t = 0; t < num_tests(); ++t)
    if (verdicts_[t] == Verdict::Pass) ids.push_back(t);
  return ids;
}

CoverageRecord CoverageRecord::select_tests(const TestIds& keep) const {
  CoverageMatrix m(covers_.rows(), static_cast<Eigen::Index>(keep.size()));
  std::vector<Verdict> v;
  v.reserve(keep.size());
  for (std::size_t i = 0; i < keep.size(); ++i) {
    const int t = keep[i];
    if (t < 0 || t >= num_tests()) throw DomainError("test id out of range: " + std::to_string(t));
    m.col(static_cast<Eigen::Index>(i)) = covers_.col(t);
    v.push_back(verdicts_[t]);
  }
  return CoverageRecord(std::move(m), std::move(v));
}

namespace {

bool skippable(std::string_view line) {
  const auto first = line.find_first_not_of(" \t\r");
  return first == std::string_view::npos || line[first] == '#';
}

std::string_view trim_cr(std::string_view line) {
  while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
    line.remove_suffix(1);
  return line;
}

int parse_key(std::string_view token, std::string_view key, std::size_t lineno) {
  if (token.substr(0, key.size()) != key || token.size() == key.size())
    throw ParseError(lineno, "malformed header, expected '" + std::string(key) + "<n>'");
  int value = 0;
  const auto* begin = token.data() + key.size();
  const auto* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || value < 0)
    throw ParseError(lineno, "malformed header count '" + std::string(token) + "'");
  return value;
}

}  // namespace

CoverageRecord parse_coverage(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string_view>> lines;
  std::size_t lineno = 0;
  while (!text.empty()) {
    ++lineno;
    const auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (!skippable(line)) lines.emplace_back(lineno, trim_cr(line));
  }
  if (lines.empty()) throw ParseError(1, "missing header");

  const auto [hline, header] = lines.front();
  const auto space = header.find(' ');
  if (space == std::string_view::npos) throw ParseError(hline, "malformed header");
  auto rest = header.substr(space + 1);
  while (!rest.empty() && rest.front() == ' ') rest.remove_prefix(1);
  const int num_statements = parse_key(header.substr(0, space), "statements=", hline);
  const int num_tests = parse_key(rest, "tests=", hline);
  if (num_statements == 0) throw ParseError(hline, "no statements");
  if (num_tests == 0) throw ParseError(hline, "no tests");

  if (lines.size() - 1 != static_cast<std::size_t>(num_tests)) {
    const std::size_t at = lines.size() > 1 ? lines.back().first : hline;
    throw ParseError(at, "expected " + std::to_string(num_tests) + " test rows, found " +
                             std::to_string(lines.size() - 1));
  }

  CoverageMatrix covers(num_statements, num_tests);
  std::vector<Verdict> verdicts(static_cast<std::size_t>(num_tests));
  for (int t = 0; t < num_tests; ++t) {
    const auto [ln, row] = lines[static_cast<std::size_t>(t) + 1];
    if (row.size() != static_cast<std::size_t>(num_statements) + 2 || row[num_statements] != ' ')
      throw ParseError(ln, "ragged row: expected " + std::to_string(num_statements) +
                               " coverage bits, a space and a verdict");
    for (int s = 0; s < num_statements; ++s) {
      const char c = row[static_cast<std::size_t>(s)];
      if (c != '0' && c != '1') throw ParseError(ln, std::string("invalid coverage bit '") + c + "'");
      covers(s, t) = c == '1';
    }
    const char v = row.back();
    if (v == 'P')
      verdicts[t] = Verdict::Pass;
    else if (v == 'F')
      verdicts[t] = Verdict::Fail;
    else
      throw ParseError(ln, std::string("invalid verdict '") + v + "', expected P or F");
  }
  return CoverageRecord(std::move(covers), std::move(verdicts));
}

CoverageRecord load_coverage(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open coverage file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_coverage(buf.str());
}

std::string format_coverage(const CoverageRecord& cov) {
  std::string out = "statements=" + std::to_string(cov.num_statements()) +
                    " tests=" + std::to_string(cov.num_tests()) + "\n";
  out.reserve(out.size() + static_cast<std::size_t>(cov.num_tests()) * (cov.num_statements() + 3));
  for (int t = 0; t < cov.num_tests(); ++t) {
    for (int s = 0; s < cov.num_statements(); ++s) out += cov.covers()(s, t) ? '1' : '0';
    out += cov.verdict(t) == Verdict::Fail ? " F\n" : " P\n";
  }
  return out;
}

SuiteSelection::SuiteSelection(const CoverageRecord& cov, TestIds failed, TestIds passed)
    : failed_(std::move(failed)), passed_(std::move(passed)) {
  std::set<int> seen;
  auto check = [&](const TestIds& ids, Verdict expected) {
    for (int t : ids) {
      if (t < 0 || t >= cov.num_tests())
        throw DomainError("test id out of range: " + std::to_string(t));
      if (cov.verdict(t) != expected)
        throw DomainError("test " + std::to_string(t) + " has the wrong verdict for its set");
      if (!seen.insert(t).second) throw DomainError("test " + std::to_string(t) + " selected twice");
    }
  };
  check(failed_, Verdict::Fail);
  check(passed_, Verdict::Pass);
}

SuiteSelection SuiteSelection::full(const CoverageRecord& cov) {
  return SuiteSelection(cov, cov.failed_ids(), cov.passed_ids());
}

Spectrum compute_spectrum(const CoverageRecord& cov, const SuiteSelection& sel) {
  const int j = cov.num_statements();
  Spectrum sp;
  sp.n_cf = Eigen::VectorXi::Zero(j);
  sp.n_cs = Eigen::VectorXi::Zero(j);
  for (int t : sel.failed_ids()) {
    if (t < 0 || t >= cov.num_tests()) throw DomainError("test id out of range: " + std::to_string(t));
    sp.n_cf += cov.covers().col(t).cast<int>();
  }
  for (int t : sel.passed_ids()) {
    if (t < 0 || t >= cov.num_tests()) throw DomainError("test id out of range: " + std::to_string(t));
    sp.n_cs += cov.covers().col(t).cast<int>();
  }
  sp.n_f = static_cast<int>(sel.failed_ids().size());
  sp.n_s = static_cast<int>(sel.passed_ids().size());
  sp.n_uf = Eigen::VectorXi::Constant(j, sp.n_f) - sp.n_cf;
  sp.n_us = Eigen::VectorXi::Constant(j, sp.n_s) - sp.n_cs;
  return sp;
}

}  // namespace failclust
