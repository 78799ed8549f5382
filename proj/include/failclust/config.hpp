#pragma once

#include "failclust/cluster.hpp"
#include "failclust/faultgen.hpp"
#include "failclust/ref.hpp"

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace failclust {

/// Planted-fault spectra, `versions` per fault count.
struct SyntheticCorpusParams {
  std::vector<int> faults = {2, 3, 4, 5};
  int failed_per_fault = 4;
  int passed = 50;
  int statements = 30;
  double noise = 0.0;
  int versions = 10;
};

/// Mutated random programs: for every program, fault count and fault type,
/// `versions` faulty versions.
struct MicrolangCorpusParams {
  int programs = 4;
  std::vector<int> faults = {2, 3, 4, 5};
  std::vector<FaultTypeClass> types = {FaultTypeClass::TypeA, FaultTypeClass::TypeP,
                                       FaultTypeClass::TypeH};
  int versions = 2;
  int suite = 200;
  ProgramShape shape;
};

struct ExperimentConfig {
  std::string corpus = "synthetic";  // synthetic | microlang | dir:<path>
  SyntheticCorpusParams synthetic;
  MicrolangCorpusParams microlang;
  std::vector<RefId> refs;             // one representative per group unless set
  std::vector<double> nsp1f = {1.0};   // fractions in (0, 1]
  MountainParams mountain;
  std::uint64_t seed = 0;
  std::string out = "out";

  /// Throws ConfigError on an invalid combination.
  void validate() const;
};

/// Flat `key = value` lines; '#' starts a comment. Keys:
///   seed (required), corpus, refs, nsp1f, out,
///   bandwidth_scale, revision_sharpening, stop_ratio, winsor_low, winsor_high,
///   synthetic.{faults,failed_per_fault,passed,statements,noise,versions},
///   microlang.{programs,faults,types,versions,suite,min_statements,max_statements,max_depth}
/// List values are comma separated; nsp1f is given in percent.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::string& path);

/// Echo of every key in canonical order, for run manifests.
std::map<std::string, std::string> config_entries(const ExperimentConfig& cfg);

/// Only the five mountain keys are accepted.
MountainParams parse_mountain_params(std::string_view text);

/// "all-groups" or a comma list of REF or group names.
std::vector<RefId> parse_ref_list(std::string_view text);
/// Comma list of percentages in (0, 100], returned as fractions.
std::vector<double> parse_percent_list(std::string_view text);

std::vector<RefId> group_representatives();

}  // namespace failclust
