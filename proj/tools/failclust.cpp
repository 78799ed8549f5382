// failclust: command-line front end for the failure-clustering pipeline.

#include "failclust/cluster.hpp"
#include "failclust/config.hpp"
#include "failclust/coverage.hpp"
#include "failclust/distance.hpp"
#include "failclust/eval.hpp"
#include "failclust/harness.hpp"
#include "failclust/ref.hpp"
#include "failclust/srr.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace failclust;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

// Writes to `path`, or stdout when it is empty or "-".
void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::fwrite(text.data(), 1, text.size(), stdout);
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << text;
}

struct Common {
  std::string coverage;
  std::string ref = "Ochiai";
  double nsp1f = 100.0;
  std::uint64_t seed = 0;
  std::string out;
  std::string params;

  Nsp1fPolicy policy() const { return {parse_percent_list(fmt::format("{}", nsp1f)).front(), seed}; }
  MountainParams mountain() const { return params.empty() ? MountainParams{} : parse_mountain_params(slurp(params)); }
};

void add_pipeline_options(CLI::App* cmd, Common& c, bool sampling) {
  cmd->add_option("--coverage,-c", c.coverage, "coverage file")->required();
  cmd->add_option("--ref", c.ref, "REF name or GroupN")->capture_default_str();
  if (sampling) {
    cmd->add_option("--nsp1f", c.nsp1f, "percent of successful tests paired with each failure")
        ->capture_default_str();
    cmd->add_option("--seed", c.seed, "sampling seed")->capture_default_str();
  }
  cmd->add_option("--out,-o", c.out, "output file (default stdout)");
}

std::vector<FailureProxy> proxies_of(const Common& c, const CoverageRecord& cov) {
  return represent_all(cov, c.policy(), parse_ref_or_group(c.ref));
}

int cmd_suspiciousness(const Common& c) {
  const auto cov = load_coverage(c.coverage);
  const auto ref = parse_ref_or_group(c.ref);
  const auto scores = suspiciousness<double>(ref, compute_spectrum(cov, SuiteSelection::full(cov)));
  const auto ranks = rank(scores);
  std::string out = "statement,score,rank\n";
  for (Eigen::Index s = 0; s < scores.size(); ++s)
    out += fmt::format("{},{:.6f},{}\n", s + 1, scores(s), ranks(s));
  emit(c.out, out);
  return 0;
}

int cmd_represent(const Common& c) {
  const auto cov = load_coverage(c.coverage);
  std::string out = "failed_test_id,sampled_passed";
  for (int s = 1; s <= cov.num_statements(); ++s) out += fmt::format(",s{}", s);
  out += '\n';
  for (const auto& p : proxies_of(c, cov)) {
    out += fmt::format("{},{}", p.failed_test_id, p.sampled_passed_ids.size());
    for (Eigen::Index s = 0; s < p.ranking.size(); ++s) out += fmt::format(",{}", p.ranking(s));
    out += '\n';
  }
  emit(c.out, out);
  return 0;
}

int cmd_distance(const Common& c) {
  const auto cov = load_coverage(c.coverage);
  emit(c.out, format_distance_csv(distance_matrix(proxies_of(c, cov)), cov.failed_ids()));
  return 0;
}

int cmd_estimate(const Common& c) {
  const auto cov = load_coverage(c.coverage);
  const auto failed = cov.failed_ids();
  const auto est = estimate_clusters(distance_matrix(proxies_of(c, cov)), c.mountain());
  std::string out = fmt::format("k,{}\nbandwidth,{:.6f}\npick,failed_test_id,potential\n", est.k, est.bandwidth);
  for (std::size_t i = 0; i < est.potential_trace.size(); ++i) {
    const auto [point, potential] = est.potential_trace[i];
    out += fmt::format("{},{},{:.6f}\n", i + 1, failed[static_cast<std::size_t>(point)], potential);
  }
  emit(c.out, out);
  return 0;
}

int cmd_cluster(const Common& c) {
  const auto cov = load_coverage(c.coverage);
  const auto d = distance_matrix(proxies_of(c, cov));
  const auto clustering = kmedoids(d, estimate_clusters(d, c.mountain()));
  if (!clustering.converged) std::cerr << "warning: k-medoids hit the iteration limit\n";
  emit(c.out, format_clustering_csv(clustering, cov.failed_ids()));
  return 0;
}

int cmd_evaluate(const std::string& clustering_path, const std::string& oracle_path, const std::string& version,
                 const std::string& out) {
  const auto [ids, clusters] = parse_clustering_csv(slurp(clustering_path));
  const auto oracle = load_oracle(oracle_path);
  for (const auto& w : oracle.warnings()) std::cerr << "warning: " << w << '\n';
  // Reorder generated labels to the oracle's test order.
  std::vector<int> generated;
  for (int t : oracle.test_ids()) {
    const auto it = std::find(ids.begin(), ids.end(), t);
    if (it == ids.end()) throw std::runtime_error(fmt::format("test {} is missing from the clustering", t));
    generated.push_back(clusters[static_cast<std::size_t>(it - ids.begin())]);
  }
  if (ids.size() != generated.size()) throw std::runtime_error("clustering lists tests absent from the oracle");
  const int k = clusters.empty() ? 0 : *std::max_element(clusters.begin(), clusters.end()) + 1;
  const std::vector<std::pair<std::string, EvalReport>> rows = {{version, evaluate_version(generated, k, oracle)}};
  emit(out, format_report_csv(rows));
  return 0;
}

struct ExperimentOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string ref;
  std::string nsp1f;
  std::string out;
};

ExperimentConfig experiment_config(const ExperimentOptions& o) {
  std::string text = o.config.empty() ? std::string() : slurp(o.config);
  // Later keys override earlier ones, so flags are appended as config lines.
  text += '\n';
  if (o.seed) text += fmt::format("seed = {}\n", *o.seed);
  if (!o.ref.empty()) text += fmt::format("refs = {}\n", o.ref);
  if (!o.nsp1f.empty()) text += fmt::format("nsp1f = {}\n", o.nsp1f);
  if (!o.out.empty()) text += fmt::format("out = {}\n", o.out);
  return parse_config(text);
}

void add_experiment_options(CLI::App* cmd, ExperimentOptions& o) {
  cmd->add_option("--config", o.config, "flat key=value experiment config");
  cmd->add_option("--seed", o.seed, "experiment seed (overrides config)");
  cmd->add_option("--ref", o.ref, "REF names, group names or all-groups (overrides config)");
  cmd->add_option("--nsp1f", o.nsp1f, "comma list of percentages (overrides config)");
  cmd->add_option("--out", o.out, "output directory (overrides config)");
}

void print_warnings(const std::vector<std::string>& warnings) {
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

int cmd_experiment(const std::string& name, const ExperimentOptions& o) {
  const auto cfg = experiment_config(o);
  const auto corpus = build_corpus(cfg);
  Report report;
  if (name == "rq1") report = run_rq1(cfg, corpus);
  else if (name == "rq2") report = run_rq2(cfg, corpus);
  else if (name == "rq3") report = run_rq3(cfg, corpus);
  else report = run_rq4(cfg, corpus);
  print_warnings(report.warnings);
  write_report(report, cfg.out);
  std::cerr << fmt::format("{}: {} versions, {} files written to {}\n", name, corpus.versions.size(),
                           report.files.size(), cfg.out);
  return 0;
}

int cmd_generate(const ExperimentOptions& o) {
  const auto cfg = experiment_config(o);
  const auto corpus = build_corpus(cfg);
  print_warnings(corpus.warnings);
  write_corpus_dir(corpus, cfg.out);
  std::cerr << fmt::format("generate: {} versions written to {}\n", corpus.versions.size(), cfg.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Failure clustering with ranking-list proxies"};
  app.require_subcommand(1);

  Common common;
  auto* susp = app.add_subcommand("suspiciousness", "per-statement scores over the whole suite");
  add_pipeline_options(susp, common, false);
  auto* repr = app.add_subcommand("represent", "ranking-list proxy of every failed test");
  add_pipeline_options(repr, common, true);
  auto* dist = app.add_subcommand("distance", "pairwise distance matrix of failed tests as CSV");
  add_pipeline_options(dist, common, true);
  auto* est = app.add_subcommand("estimate", "estimated cluster count and initial medoids");
  add_pipeline_options(est, common, true);
  est->add_option("--params", common.params, "mountain parameter file");
  auto* clus = app.add_subcommand("cluster", "cluster failed tests, CSV output");
  add_pipeline_options(clus, common, true);
  clus->add_option("--params", common.params, "mountain parameter file");

  std::string clustering_path, oracle_path, version_id = "v0", eval_out;
  auto* eval = app.add_subcommand("evaluate", "score a clustering against oracle labels");
  eval->add_option("--clustering", clustering_path, "clustering CSV")->required();
  eval->add_option("--oracle", oracle_path, "oracle file")->required();
  eval->add_option("--version-id", version_id, "version id column value")->capture_default_str();
  eval->add_option("--out,-o", eval_out, "output file (default stdout)");

  ExperimentOptions exp;
  auto* gen = app.add_subcommand("generate", "write a labeled corpus directory");
  add_experiment_options(gen, exp);
  std::vector<CLI::App*> rqs;
  for (const char* name : {"rq1", "rq2", "rq3", "rq4"}) {
    auto* rq = app.add_subcommand(name, fmt::format("run experiment {}", name));
    add_experiment_options(rq, exp);
    rqs.push_back(rq);
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (*susp) return cmd_suspiciousness(common);
    if (*repr) return cmd_represent(common);
    if (*dist) return cmd_distance(common);
    if (*est) return cmd_estimate(common);
    if (*clus) return cmd_cluster(common);
    if (*eval) return cmd_evaluate(clustering_path, oracle_path, version_id, eval_out);
    if (*gen) return cmd_generate(exp);
    for (auto* rq : rqs)
      if (*rq) return cmd_experiment(rq->get_name(), exp);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
