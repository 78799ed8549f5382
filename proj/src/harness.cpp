#include "failclust/harness.hpp"

#include "failclust/error.hpp"
#include "failclust/rng.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>

namespace failclust {

namespace fs = std::filesystem;

namespace {

std::string fixed(double v) { return fmt::format("{:.6f}", v); }
std::string fixed(const std::optional<double>& v) { return v ? fixed(*v) : std::string(); }

std::string percent_label(double fraction) { return fmt::format("{:g}", fraction * 100.0); }

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path.string());
  out << text;
}

void add_synthetic(const ExperimentConfig& cfg, Corpus& corpus) {
  const auto& p = cfg.synthetic;
  for (int r : p.faults) {
    for (int i = 0; i < p.versions; ++i) {
      const auto seed = rng::mix(rng::mix(cfg.seed, static_cast<std::uint64_t>(r)), static_cast<std::uint64_t>(i));
      auto v = sample_synthetic_spectrum(r, p.failed_per_fault, p.passed, p.statements, p.noise, seed);
      corpus.versions.push_back(CorpusVersion{fmt::format("syn-r{}-{:03}", r, i), std::move(v.coverage),
                                              std::move(v.oracle), r, std::nullopt, std::nullopt});
    }
  }
}

void add_microlang(const ExperimentConfig& cfg, Corpus& corpus) {
  const auto& p = cfg.microlang;
  for (int prog = 0; prog < p.programs; ++prog) {
    const auto prog_seed = rng::mix(cfg.seed, 0x1000 + static_cast<std::uint64_t>(prog));
    const MicroProgram base = generate_program(prog_seed, p.shape);
    const auto suite = generate_suite(base, p.suite, prog_seed);
    const auto pool = enumerate_mutations(base);
    for (int r : p.faults) {
      for (FaultTypeClass type : p.types) {
        for (int i = 0; i < p.versions; ++i) {
          const std::string id = fmt::format("ml-p{:02}-r{}-{}-{:02}", prog, r, type_name(type), i);
          const auto seed = rng::mix(rng::mix(prog_seed, static_cast<std::uint64_t>(r) * 16 +
                                                             static_cast<std::uint64_t>(type)),
                                     static_cast<std::uint64_t>(i));
          try {
            FaultyVersion v = synthesize_version(base, pool, r, suite, seed, type);
            LabeledVersion labeled = label_oracle(v, suite);
            if (labeled.dropped_multi_cause + labeled.dropped_interaction > 0)
              corpus.warnings.push_back(fmt::format("{}: dropped {} multi-cause and {} interaction failures", id,
                                                    labeled.dropped_multi_cause, labeled.dropped_interaction));
            corpus.versions.push_back(CorpusVersion{id, std::move(labeled.coverage), std::move(labeled.oracle), r,
                                                    type, v.program()});
          } catch (const GenerationError& e) {
            corpus.warnings.push_back(fmt::format("{}: skipped, {}", id, e.what()));
          }
        }
      }
    }
  }
}

}  // namespace

Corpus build_corpus(const ExperimentConfig& cfg) {
  Corpus corpus;
  if (cfg.corpus == "synthetic") {
    add_synthetic(cfg, corpus);
  } else if (cfg.corpus == "microlang") {
    add_microlang(cfg, corpus);
  } else if (cfg.corpus.rfind("dir:", 0) == 0) {
    corpus = load_corpus_dir(cfg.corpus.substr(4));
  } else {
    throw ConfigError("corpus: unknown source '" + cfg.corpus + "'");
  }
  if (corpus.versions.empty()) corpus.warnings.emplace_back("corpus is empty");
  return corpus;
}

Corpus load_corpus_dir(const std::string& dir) {
  const fs::path root(dir);
  const std::string manifest = read_text(root / "corpus.txt");
  Corpus corpus;
  std::istringstream lines(manifest);
  std::string line;
  while (std::getline(lines, line)) {
    std::istringstream tok(line);
    std::string id, cov_file, oracle_file;
    if (!(tok >> id) || id.front() == '#') continue;
    try {
      if (!(tok >> cov_file >> oracle_file)) throw ConfigError("expected '<id> <coverage> <oracle> [key=value...]'");
      std::optional<int> nof;
      std::optional<FaultTypeClass> type;
      std::string kv;
      while (tok >> kv) {
        if (kv.rfind("nof=", 0) == 0) {
          nof = std::stoi(kv.substr(4));
        } else if (kv.rfind("type=", 0) == 0) {
          type = parse_type(kv.substr(5));
        } else {
          throw ConfigError("unknown field '" + kv + "'");
        }
      }
      CoverageRecord cov = load_coverage((root / cov_file).string());
      OracleLabels parsed = parse_oracle(read_text(root / oracle_file));
      OracleLabels oracle(parsed.test_ids(), parsed.faults(), nof);
      corpus.versions.push_back(CorpusVersion{id, std::move(cov), std::move(oracle), nof, type, std::nullopt});
    } catch (const std::exception& e) {
      throw std::runtime_error(fmt::format("version {}: {}", id, e.what()));
    }
  }
  if (corpus.versions.empty()) corpus.warnings.emplace_back("corpus is empty");
  return corpus;
}

void write_corpus_dir(const Corpus& corpus, const std::string& dir) {
  const fs::path root(dir);
  fs::create_directories(root);
  std::string manifest = "# <version_id> <coverage> <oracle> [nof=<r>] [type=<T>]\n";
  for (const auto& v : corpus.versions) {
    write_text(root / (v.id + ".cov"), format_coverage(v.coverage));
    write_text(root / (v.id + ".oracle"), format_oracle(v.oracle));
    if (v.program) write_text(root / (v.id + ".prog"), format_program(*v.program));
    manifest += fmt::format("{} {}.cov {}.oracle", v.id, v.id, v.id);
    if (v.nof) manifest += fmt::format(" nof={}", *v.nof);
    if (v.fault_type) manifest += fmt::format(" type={}", type_name(*v.fault_type));
    manifest += '\n';
  }
  write_text(root / "corpus.txt", manifest);
}

PipelineResult run_pipeline(const CoverageRecord& cov, const OracleLabels& oracle, RefId ref,
                            const Nsp1fPolicy& policy, const MountainParams& params) {
  const TestIds failed = cov.failed_ids();
  TestIds expected = oracle.test_ids();
  std::sort(expected.begin(), expected.end());
  if (expected != failed)
    throw DomainError("oracle tests do not match the failed tests of the coverage record");

  const auto proxies = represent_all(cov, policy, ref);
  const DistanceMatrix d = distance_matrix(proxies);
  PipelineResult out;
  out.estimate = estimate_clusters(d, params);
  out.clustering = kmedoids(d, out.estimate);
  out.generated.reserve(static_cast<std::size_t>(oracle.size()));
  for (int t : oracle.test_ids()) {
    const auto pos = std::lower_bound(failed.begin(), failed.end(), t) - failed.begin();
    out.generated.push_back(out.clustering.assignment[static_cast<std::size_t>(pos)]);
  }
  out.report = evaluate_version(out.generated, out.clustering.k(), oracle);
  return out;
}

BoxSummary box_summary(std::vector<double> values) {
  if (values.empty()) throw DomainError("box summary of an empty list");
  std::sort(values.begin(), values.end());
  BoxSummary b;
  b.n = static_cast<int>(values.size());
  b.lower_quartile = percentile(values, 0.25);
  b.median = percentile(values, 0.5);
  b.upper_quartile = percentile(values, 0.75);
  b.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  return b;
}

std::vector<double> opacity(std::span<const int> v_equal, std::vector<std::string>* warnings) {
  if (v_equal.empty()) throw DomainError("opacity needs at least one level");
  const int max = *std::max_element(v_equal.begin(), v_equal.end());
  std::vector<double> out;
  for (int v : v_equal) out.push_back(max == 0 ? 0.0 : static_cast<double>(v) / max);
  if (max == 0 && warnings) warnings->emplace_back("no level has an Equal version; opacities are all zero");
  return out;
}

void LevelStats::add(const EvalReport& report) {
  estimates.emplace_back(report.k, report.r);
  switch (report.category) {
    case Category::Under: ++counts.v_under; return;
    case Category::Over: ++counts.v_over; return;
    case Category::Equal: ++counts.v_equal; break;
  }
  for (std::size_t m = 0; m < kMetrics.size(); ++m) {
    const double v = report.value(kMetrics[m]);
    sum_metric[m] += v;
    values[m].push_back(v);
  }
  sum_vote += report.votes;
}

std::string format_report_csv(std::span<const std::pair<std::string, EvalReport>> rows) {
  std::string out = "version_id,category,k,r,JC,FMI,PR,RR,votes\n";
  for (const auto& [id, rep] : rows) {
    out += fmt::format("{},{},{},{}", id, category_name(rep.category), rep.k, rep.r);
    for (Metric m : kMetrics) out += "," + (rep.metrics ? fixed(rep.value(m)) : std::string());
    out += fmt::format(",{}\n", rep.votes);
  }
  return out;
}

void write_report(const Report& report, const std::string& dir) {
  fs::create_directories(dir);
  for (const auto& [name, text] : report.files) write_text(fs::path(dir) / name, text);
}

namespace {

struct Level {
  std::string label;
  double fraction = 1.0;
  std::vector<std::size_t> versions;  // indices into the corpus
};

struct Cell {
  RefId ref;
  LevelStats stats;
};

using Row = std::pair<std::string, EvalReport>;

// Runs every (ref, level) combination; rows of the version CSV are collected in
// ref, level, version order.
std::vector<std::vector<Cell>> evaluate_levels(const ExperimentConfig& cfg, const Corpus& corpus,
                                               const std::vector<Level>& levels, std::string& versions_csv,
                                               const std::string& factor) {
  std::vector<std::vector<Cell>> table;
  versions_csv = fmt::format("ref,{},version_id,category,k,r,JC,FMI,PR,RR,votes\n", factor);
  for (RefId ref : cfg.refs) {
    std::vector<Cell> row;
    for (const auto& level : levels) {
      Cell cell{ref, {}};
      cell.stats.level = level.label;
      std::vector<Row> rows;
      for (std::size_t idx : level.versions) {
        const auto& v = corpus.versions[idx];
        try {
          const Nsp1fPolicy policy{level.fraction, rng::mix(cfg.seed, static_cast<std::uint64_t>(idx))};
          auto result = run_pipeline(v.coverage, v.oracle, ref, policy, cfg.mountain);
          cell.stats.add(result.report);
          rows.emplace_back(v.id, std::move(result.report));
        } catch (const std::exception& e) {
          throw std::runtime_error(fmt::format("version {}: {}", v.id, e.what()));
        }
      }
      const std::string csv = format_report_csv(rows);
      std::istringstream lines(csv.substr(csv.find('\n') + 1));
      std::string line;
      while (std::getline(lines, line))
        versions_csv += fmt::format("{},{},{}\n", ref_name(ref), level.label, line);
      row.push_back(std::move(cell));
    }
    table.push_back(std::move(row));
  }
  return table;
}

std::string summary_header(const std::string& factor) {
  return fmt::format(
      "ref,group,{},versions,v_under,v_equal,v_over,opacity,sum_JC,sum_FMI,sum_PR,sum_RR,"
      "dev_over,dev_under,dev_mean,sum_vote\n",
      factor);
}

std::string summary_row(const Cell& c, double opac) {
  const auto& s = c.stats;
  const Deviation dev = s.deviation();
  std::string out = fmt::format("{},Group{},{},{},{},{},{},{}", ref_name(c.ref), group_of(c.ref).id, s.level,
                                s.counts.total(), s.counts.v_under, s.counts.v_equal, s.counts.v_over, fixed(opac));
  for (double v : s.sum_metric) out += "," + fixed(v);
  out += fmt::format(",{},{},{},{}\n", fixed(dev.over), fixed(dev.under), fixed(dev.mean), s.sum_vote);
  return out;
}

std::string box_csv(const std::vector<std::vector<Cell>>& table, const std::string& factor) {
  std::string out = fmt::format("ref,{},metric,n,lower_quartile,median,upper_quartile,mean\n", factor);
  for (const auto& row : table)
    for (const auto& c : row)
      for (std::size_t m = 0; m < kMetrics.size(); ++m) {
        if (c.stats.values[m].empty()) continue;
        const BoxSummary b = box_summary(c.stats.values[m]);
        out += fmt::format("{},{},{},{},{},{},{},{}\n", ref_name(c.ref), c.stats.level, metric_name(kMetrics[m]),
                           b.n, fixed(b.lower_quartile), fixed(b.median), fixed(b.upper_quartile), fixed(b.mean));
      }
  return out;
}

std::string manifest(const std::string& experiment, const ExperimentConfig& cfg, const Corpus& corpus,
                     const std::vector<std::vector<Cell>>& table, const Report& report) {
  nlohmann::ordered_json j;
  j["experiment"] = experiment;
  j["config"] = config_entries(cfg);
  j["versions"] = corpus.versions.size();
  nlohmann::ordered_json counts = nlohmann::ordered_json::array();
  for (const auto& row : table)
    for (const auto& c : row)
      counts.push_back({{"ref", ref_name(c.ref)},
                        {"level", c.stats.level},
                        {"v_under", c.stats.counts.v_under},
                        {"v_equal", c.stats.counts.v_equal},
                        {"v_over", c.stats.counts.v_over}});
  j["counts"] = counts;
  std::vector<std::string> files;
  for (const auto& [name, _] : report.files) files.push_back(name);
  files.emplace_back("manifest.json");
  j["files"] = files;
  j["warnings"] = report.warnings;
  return j.dump(2) + "\n";
}

// Shared tail of RQ2-RQ4: per-ref opacity across levels, summary and box CSVs.
Report factor_report(const std::string& experiment, const std::string& factor, const ExperimentConfig& cfg,
                     const Corpus& corpus, const std::vector<Level>& levels,
                     const std::vector<std::string>& notes = {}) {
  Report report;
  report.warnings = corpus.warnings;
  report.warnings.insert(report.warnings.end(), notes.begin(), notes.end());
  std::string versions_csv;
  const auto table = evaluate_levels(cfg, corpus, levels, versions_csv, factor);
  std::string summary = summary_header(factor);
  for (const auto& row : table) {
    std::vector<int> equal;
    for (const auto& c : row) equal.push_back(c.stats.counts.v_equal);
    std::vector<std::string> warn;
    const auto opac = row.empty() ? std::vector<double>{} : opacity(equal, &warn);
    for (const auto& w : warn) report.warnings.push_back(fmt::format("{}: {}", ref_name(row.front().ref), w));
    for (std::size_t i = 0; i < row.size(); ++i) summary += summary_row(row[i], opac[i]);
  }
  report.files[experiment + "_summary.csv"] = summary;
  report.files[experiment + "_box.csv"] = box_csv(table, factor);
  report.files[experiment + "_versions.csv"] = versions_csv;
  report.files["manifest.json"] = manifest(experiment, cfg, corpus, table, report);
  return report;
}

std::vector<std::size_t> all_indices(const Corpus& corpus) {
  std::vector<std::size_t> idx(corpus.versions.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return idx;
}

}  // namespace

Report run_rq1(const ExperimentConfig& cfg, const Corpus& corpus) {
  cfg.validate();
  Report report;
  report.warnings = corpus.warnings;
  const std::vector<Level> levels = {{"all", cfg.nsp1f.front(), all_indices(corpus)}};
  std::string versions_csv;
  const auto table = evaluate_levels(cfg, corpus, levels, versions_csv, "level");

  std::vector<int> equal;
  for (const auto& row : table) equal.push_back(row.front().stats.counts.v_equal);
  const auto opac = opacity(equal, &report.warnings);
  std::string summary = summary_header("level");
  for (std::size_t i = 0; i < table.size(); ++i) summary += summary_row(table[i].front(), opac[i]);
  report.files["rq1_summary.csv"] = summary;
  report.files["rq1_versions.csv"] = versions_csv;

  // Cell (i, j) is 1 when ref i's Sum_Metric strictly exceeds ref j's.
  for (std::size_t m = 0; m < kMetrics.size(); ++m) {
    std::string csv = "ref";
    for (RefId r : cfg.refs) csv += fmt::format(",{}", ref_name(r));
    csv += '\n';
    for (std::size_t i = 0; i < table.size(); ++i) {
      csv += ref_name(cfg.refs[i]);
      const double a = table[i].front().stats.sum_metric[m];
      for (std::size_t j = 0; j < table.size(); ++j) {
        const double b = table[j].front().stats.sum_metric[m];
        csv += a > b + 1e-9 ? ",1" : ",0";
      }
      csv += '\n';
    }
    report.files[fmt::format("rq1_dominance_{}.csv", metric_name(kMetrics[m]))] = csv;
  }
  report.files["manifest.json"] = manifest("rq1", cfg, corpus, table, report);
  return report;
}

Report run_rq2(const ExperimentConfig& cfg, const Corpus& corpus) {
  cfg.validate();
  std::map<int, std::vector<std::size_t>> by_nof;
  for (std::size_t i = 0; i < corpus.versions.size(); ++i) {
    const auto& v = corpus.versions[i];
    if (!v.nof) throw ConfigError(fmt::format("nof: missing for version {}", v.id));
    by_nof[*v.nof].push_back(i);
  }
  std::vector<Level> levels;
  for (auto& [nof, idx] : by_nof) levels.push_back({std::to_string(nof), cfg.nsp1f.front(), std::move(idx)});
  return factor_report("rq2", "nof", cfg, corpus, levels);
}

Report run_rq3(const ExperimentConfig& cfg, const Corpus& corpus) {
  cfg.validate();
  std::map<FaultTypeClass, std::vector<std::size_t>> by_type;
  for (std::size_t i = 0; i < corpus.versions.size(); ++i) {
    const auto& v = corpus.versions[i];
    if (!v.fault_type) throw ConfigError(fmt::format("fault_type: missing for version {}", v.id));
    by_type[*v.fault_type].push_back(i);
  }
  std::vector<Level> levels;
  std::vector<std::string> absent;
  for (FaultTypeClass t : {FaultTypeClass::TypeA, FaultTypeClass::TypeP, FaultTypeClass::TypeH}) {
    auto it = by_type.find(t);
    if (it == by_type.end()) {
      absent.push_back(fmt::format("no {} versions in corpus; rows omitted", type_name(t)));
      continue;
    }
    levels.push_back({std::string(type_name(t)), cfg.nsp1f.front(), std::move(it->second)});
  }
  return factor_report("rq3", "fault_type", cfg, corpus, levels, absent);
}

Report run_rq4(const ExperimentConfig& cfg, const Corpus& corpus) {
  cfg.validate();
  std::vector<Level> levels;
  for (double f : cfg.nsp1f) levels.push_back({percent_label(f), f, all_indices(corpus)});
  return factor_report("rq4", "nsp1f", cfg, corpus, levels);
}

}  // namespace failclust
