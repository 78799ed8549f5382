#include "failclust/eval.hpp"

#include "failclust/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

namespace failclust {

namespace {

double ratio_or_one(double num, double den) { return den == 0.0 ? 1.0 : num / den; }

constexpr double kMetricTolerance = 1e-12;

std::vector<std::pair<std::size_t, std::string_view>> content_lines(std::string_view text) {
  std::vector<std::pair<std::size_t, std::string_view>> out;
  std::size_t lineno = 0;
  while (!text.empty()) {
    ++lineno;
    const auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t'))
      line.remove_suffix(1);
    while (!line.empty() && (line.front() == ' ' || line.front() == '\t')) line.remove_prefix(1);
    if (line.empty() || line.front() == '#') continue;
    out.emplace_back(lineno, line);
  }
  return out;
}

int parse_int(std::string_view token, std::size_t lineno) {
  int value = 0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || value < 0)
    throw ParseError(lineno, "expected a non-negative integer, got '" + std::string(token) + "'");
  return value;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void check_universe(std::size_t a, std::size_t b) {
  if (a != b)
    throw DomainError("generated clustering covers " + std::to_string(a) +
                      " failures but the oracle covers " + std::to_string(b));
}

}  // namespace

OracleLabels::OracleLabels(TestIds test_ids, std::vector<int> faults, std::optional<int> declared_r)
    : test_ids_(std::move(test_ids)) {
  if (test_ids_.size() != faults.size())
    throw DomainError("oracle test id and fault lists differ in length");
  std::set<int> seen_tests;
  for (int t : test_ids_)
    if (!seen_tests.insert(t).second)
      throw DomainError("test " + std::to_string(t) + " is linked to more than one fault");

  std::set<int> present;
  for (int f : faults) {
    if (f < 0) throw DomainError("negative fault id");
    present.insert(f);
  }
  std::map<int, int> compact;
  for (int f : present) compact.emplace(f, static_cast<int>(compact.size()));
  faults_.reserve(faults.size());
  for (int f : faults) faults_.push_back(compact.at(f));
  r_ = static_cast<int>(present.size());

  if (declared_r) {
    if (*declared_r < r_) throw DomainError("oracle has more faults than declared");
    if (*declared_r > r_)
      warnings_.push_back("r reduced from " + std::to_string(*declared_r) + " to " +
                          std::to_string(r_) + ": some faults have no failed test");
  }
}

OracleLabels parse_oracle(std::string_view text) {
  TestIds tests;
  std::vector<int> faults;
  std::set<int> seen;
  for (auto [ln, line] : content_lines(text)) {
    const auto sep = line.find_first_of(" \t");
    if (sep == std::string_view::npos) throw ParseError(ln, "expected '<test_id> <fault_id>'");
    auto rest = line.substr(sep);
    while (!rest.empty() && (rest.front() == ' ' || rest.front() == '\t')) rest.remove_prefix(1);
    const int t = parse_int(line.substr(0, sep), ln);
    const int f = parse_int(rest, ln);
    if (!seen.insert(t).second)
      throw ParseError(ln, "test " + std::to_string(t) + " has more than one fault label");
    tests.push_back(t);
    faults.push_back(f);
  }
  return OracleLabels(std::move(tests), std::move(faults));
}

OracleLabels load_oracle(const std::string& path) { return parse_oracle(read_file(path)); }

std::string format_oracle(const OracleLabels& oracle) {
  std::string out;
  for (int i = 0; i < oracle.size(); ++i)
    out += std::to_string(oracle.test_ids()[static_cast<std::size_t>(i)]) + " " +
           std::to_string(oracle.fault(i)) + "\n";
  return out;
}

PairCounts pair_counts(std::span<const int> generated, std::span<const int> oracle) {
  check_universe(generated.size(), oracle.size());
  PairCounts c;
  const std::size_t n = generated.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool same_gen = generated[i] == generated[j];
      const bool same_oracle = oracle[i] == oracle[j];
      if (same_gen && same_oracle)
        ++c.x_ss;
      else if (same_gen)
        ++c.x_sd;
      else if (same_oracle)
        ++c.x_ds;
      else
        ++c.x_dd;
    }
  return c;
}

PairCounts pair_counts(const Clustering& gen, const OracleLabels& oracle) {
  return pair_counts(gen.assignment, oracle.faults());
}

double jc(const PairCounts& c) {
  return ratio_or_one(static_cast<double>(c.x_ss), static_cast<double>(c.x_ss + c.x_sd + c.x_ds));
}

double fmi(const PairCounts& c) {
  const double ss = static_cast<double>(c.x_ss);
  return std::sqrt(ratio_or_one(ss, ss + static_cast<double>(c.x_sd)) *
                   ratio_or_one(ss, ss + static_cast<double>(c.x_ds)));
}

double pr(const CaseCounts& c) {
  return ratio_or_one(static_cast<double>(c.x_tp), static_cast<double>(c.x_tp + c.x_fp));
}

double rr(const CaseCounts& c) {
  return ratio_or_one(static_cast<double>(c.x_tp), static_cast<double>(c.x_tp + c.x_fn));
}

CaseCounts case_counts(std::span<const int> generated, std::span<const int> oracle,
                       std::span<const int> mapping, int positive_fault) {
  check_universe(generated.size(), oracle.size());
  if (positive_fault < 0 || positive_fault >= static_cast<int>(mapping.size()))
    throw DomainError("positive cluster out of range");
  const int positive_gen = mapping[static_cast<std::size_t>(positive_fault)];
  CaseCounts c;
  for (std::size_t i = 0; i < generated.size(); ++i) {
    const bool gen_pos = generated[i] == positive_gen;
    const bool oracle_pos = oracle[i] == positive_fault;
    if (gen_pos && oracle_pos)
      ++c.x_tp;
    else if (gen_pos)
      ++c.x_fp;
    else if (oracle_pos)
      ++c.x_fn;
    else
      ++c.x_tn;
  }
  return c;
}

CaseCounts case_counts(const Clustering& gen, const OracleLabels& oracle,
                       std::span<const int> mapping, int positive_fault) {
  if (gen.k() != oracle.r())
    throw DomainError("case counts need as many generated clusters as faults (k=" +
                      std::to_string(gen.k()) + ", r=" + std::to_string(oracle.r()) + ")");
  return case_counts(gen.assignment, oracle.faults(), mapping, positive_fault);
}

std::string_view category_name(Category c) {
  switch (c) {
    case Category::Under: return "Under";
    case Category::Equal: return "Equal";
    case Category::Over: return "Over";
  }
  return "?";
}

std::string_view metric_name(Metric m) {
  switch (m) {
    case Metric::JC: return "JC";
    case Metric::FMI: return "FMI";
    case Metric::PR: return "PR";
    case Metric::RR: return "RR";
  }
  return "?";
}

double EvalReport::value(Metric m) const {
  if (!metrics) throw DomainError("metrics are only defined for Equal versions");
  return (*metrics)[static_cast<std::size_t>(m)].value;
}

EvalReport evaluate_version(std::span<const int> generated, int k, const OracleLabels& oracle) {
  check_universe(generated.size(), static_cast<std::size_t>(oracle.size()));
  EvalReport rep;
  rep.k = k;
  rep.r = oracle.r();
  rep.category = k < rep.r ? Category::Under : (k > rep.r ? Category::Over : Category::Equal);
  if (rep.category != Category::Equal) return rep;

  const auto& truth = oracle.faults();
  const PairCounts pairs = pair_counts(generated, truth);

  struct Scored {
    std::vector<int> perm;
    double pr;
    double rr;
  };
  std::vector<Scored> scored;
  std::vector<int> perm(static_cast<std::size_t>(rep.r));
  std::iota(perm.begin(), perm.end(), 0);
  do {
    CaseCounts total;
    for (int f = 0; f < rep.r; ++f) total += case_counts(generated, truth, perm, f);
    scored.push_back({perm, pr(total), rr(total)});
  } while (std::next_permutation(perm.begin(), perm.end()));

  // Each metric votes for the first permutation attaining its maximum. JC and
  // FMI do not depend on the mapping, so they follow the best PR + RR mapping.
  const auto first_argmax = [&](auto value_of) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < scored.size(); ++i)
      if (value_of(scored[i]) > value_of(scored[best]) + kMetricTolerance) best = i;
    return best;
  };
  const std::size_t pr_vote = first_argmax([](const Scored& s) { return s.pr; });
  const std::size_t rr_vote = first_argmax([](const Scored& s) { return s.rr; });
  const std::size_t pair_vote = first_argmax([](const Scored& s) { return s.pr + s.rr; });

  std::array<MetricResult, 4> m;
  m[static_cast<std::size_t>(Metric::JC)] = {jc(pairs), scored[pair_vote].perm};
  m[static_cast<std::size_t>(Metric::FMI)] = {fmi(pairs), scored[pair_vote].perm};
  m[static_cast<std::size_t>(Metric::PR)] = {scored[pr_vote].pr, scored[pr_vote].perm};
  m[static_cast<std::size_t>(Metric::RR)] = {scored[rr_vote].rr, scored[rr_vote].perm};
  rep.metrics = m;

  std::vector<int> votes(scored.size(), 0);
  votes[pair_vote] += 2;
  votes[pr_vote] += 1;
  votes[rr_vote] += 1;
  rep.votes = *std::max_element(votes.begin(), votes.end());
  return rep;
}

EvalReport evaluate_version(const Clustering& gen, const OracleLabels& oracle) {
  return evaluate_version(gen.assignment, gen.k(), oracle);
}

double sum_metric(std::span<const EvalReport> reports, Metric m) {
  double sum = 0.0;
  for (const auto& r : reports)
    if (r.category == Category::Equal) sum += r.value(m);
  return sum;
}

Deviation deviation(std::span<const std::pair<int, int>> estimates) {
  long over = 0, under = 0, n_over = 0, n_under = 0;
  for (auto [k, r] : estimates) {
    if (k > r) {
      over += k - r;
      ++n_over;
    } else if (k < r) {
      under += r - k;
      ++n_under;
    }
  }
  Deviation d;
  if (n_over > 0) d.over = static_cast<double>(over) / static_cast<double>(n_over);
  if (n_under > 0) d.under = static_cast<double>(under) / static_cast<double>(n_under);
  if (n_over + n_under > 0)
    d.mean = static_cast<double>(over + under) / static_cast<double>(n_over + n_under);
  return d;
}

long sum_vote(std::span<const EvalReport> reports) {
  long sum = 0;
  for (const auto& r : reports)
    if (r.category == Category::Equal) sum += r.votes;
  return sum;
}

std::string format_clustering_csv(const Clustering& c, const TestIds& failed_ids) {
  if (failed_ids.size() != c.assignment.size())
    throw DomainError("failed id list does not match the clustering");
  std::string out = "failed_test_id,cluster_id,is_medoid\n";
  for (std::size_t i = 0; i < failed_ids.size(); ++i) {
    const int cluster = c.assignment[i];
    const bool medoid = c.medoids[static_cast<std::size_t>(cluster)] == static_cast<int>(i);
    out += std::to_string(failed_ids[i]) + "," + std::to_string(cluster) + "," +
           (medoid ? "1" : "0") + "\n";
  }
  return out;
}

std::pair<TestIds, std::vector<int>> parse_clustering_csv(std::string_view text) {
  TestIds ids;
  std::vector<int> clusters;
  bool header = true;
  for (auto [ln, line] : content_lines(text)) {
    if (header) {
      header = false;
      if (line.rfind("failed_test_id", 0) == 0) continue;
    }
    const auto c1 = line.find(',');
    const auto c2 = c1 == std::string_view::npos ? c1 : line.find(',', c1 + 1);
    if (c2 == std::string_view::npos) throw ParseError(ln, "expected failed_test_id,cluster_id,is_medoid");
    ids.push_back(parse_int(line.substr(0, c1), ln));
    clusters.push_back(parse_int(line.substr(c1 + 1, c2 - c1 - 1), ln));
  }
  return {std::move(ids), std::move(clusters)};
}

}  // namespace failclust
