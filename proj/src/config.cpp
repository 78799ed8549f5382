#include "failclust/config.hpp"

#include "failclust/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <functional>
#include <sstream>

namespace failclust {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = s.find(',');
    const auto item = trim(s.substr(0, comma));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

template <typename T>
T number(std::string_view key, std::string_view value) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size())
    throw ConfigError(fmt::format("{}: cannot parse '{}' as a number", key, value));
  return out;
}

int positive(std::string_view key, std::string_view value) {
  const int v = number<int>(key, value);
  if (v < 1) throw ConfigError(fmt::format("{}: must be at least 1", key));
  return v;
}

std::vector<int> positive_list(std::string_view key, std::string_view value) {
  std::vector<int> out;
  for (auto item : split_list(value)) out.push_back(positive(key, item));
  if (out.empty()) throw ConfigError(fmt::format("{}: empty list", key));
  return out;
}

using Setter = std::function<void(std::string_view)>;

// Parses `key = value` lines, dispatching each key to its setter.
void read_pairs(std::string_view text, const std::map<std::string, Setter, std::less<>>& setters) {
  std::size_t ln = 0;
  while (!text.empty()) {
    ++ln;
    const auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(fmt::format("line {}: expected key = value", ln));
    const auto key = trim(line.substr(0, eq));
    const auto value = trim(line.substr(eq + 1));
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError(fmt::format("line {}: unknown key '{}'", ln, key));
    try {
      it->second(value);
    } catch (const DomainError& e) {
      throw ConfigError(fmt::format("{}: {}", key, e.what()));
    }
  }
}

std::map<std::string, Setter, std::less<>> mountain_setters(MountainParams& m) {
  return {
      {"bandwidth_scale", [&m](std::string_view v) { m.bandwidth_scale = number<double>("bandwidth_scale", v); }},
      {"revision_sharpening",
       [&m](std::string_view v) { m.revision_sharpening = number<double>("revision_sharpening", v); }},
      {"stop_ratio", [&m](std::string_view v) { m.stop_ratio = number<double>("stop_ratio", v); }},
      {"winsor_low", [&m](std::string_view v) { m.winsor_low = number<double>("winsor_low", v); }},
      {"winsor_high", [&m](std::string_view v) { m.winsor_high = number<double>("winsor_high", v); }},
  };
}

std::string join(const auto& items, auto&& fmt_one) {
  std::string out;
  for (const auto& x : items) {
    if (!out.empty()) out += ',';
    out += fmt_one(x);
  }
  return out;
}

}  // namespace

std::vector<RefId> group_representatives() {
  std::vector<RefId> out;
  for (const auto& g : all_groups()) out.push_back(g.representative);
  return out;
}

std::vector<RefId> parse_ref_list(std::string_view text) {
  if (trim(text) == "all-groups") return group_representatives();
  std::vector<RefId> out;
  for (auto item : split_list(text)) out.push_back(parse_ref_or_group(item));
  if (out.empty()) throw ConfigError("refs: at least one REF is required");
  return out;
}

std::vector<double> parse_percent_list(std::string_view text) {
  std::vector<double> out;
  for (auto item : split_list(text)) {
    const double pct = number<double>("nsp1f", item);
    if (!(pct > 0.0 && pct <= 100.0)) throw ConfigError(fmt::format("nsp1f: {} is outside (0, 100]", item));
    out.push_back(pct / 100.0);
  }
  if (out.empty()) throw ConfigError("nsp1f: empty list");
  return out;
}

void ExperimentConfig::validate() const {
  if (refs.empty()) throw ConfigError("refs: at least one REF is required");
  if (nsp1f.empty()) throw ConfigError("nsp1f: empty list");
  for (double f : nsp1f)
    if (!(f > 0.0 && f <= 1.0)) throw ConfigError(fmt::format("nsp1f: fraction {} outside (0, 1]", f));
  try {
    mountain.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  if (corpus != "synthetic" && corpus != "microlang" && corpus.rfind("dir:", 0) != 0)
    throw ConfigError("corpus: expected synthetic, microlang or dir:<path>, got '" + corpus + "'");
  if (corpus == "dir:") throw ConfigError("corpus: dir: needs a path");
  if (!(synthetic.noise >= 0.0 && synthetic.noise < 1.0)) throw ConfigError("synthetic.noise: must lie in [0, 1)");
  if (synthetic.statements < *std::max_element(synthetic.faults.begin(), synthetic.faults.end()))
    throw ConfigError("synthetic.statements: fewer statements than planted faults");
  const auto& s = microlang.shape;
  if (s.min_statements < 4 || s.max_statements < s.min_statements)
    throw ConfigError("microlang: need 4 <= min_statements <= max_statements");
  if (microlang.types.empty()) throw ConfigError("microlang.types: empty list");
}

ExperimentConfig parse_config(std::string_view text) {
  ExperimentConfig cfg;
  cfg.refs = group_representatives();
  auto& syn = cfg.synthetic;
  auto& ml = cfg.microlang;
  bool have_seed = false;
  auto setters = mountain_setters(cfg.mountain);
  setters.insert({
      {"seed",
       [&](std::string_view v) {
         cfg.seed = number<std::uint64_t>("seed", v);
         have_seed = true;
       }},
      {"corpus", [&](std::string_view v) { cfg.corpus = std::string(v); }},
      {"refs", [&](std::string_view v) { cfg.refs = parse_ref_list(v); }},
      {"nsp1f", [&](std::string_view v) { cfg.nsp1f = parse_percent_list(v); }},
      {"out", [&](std::string_view v) { cfg.out = std::string(v); }},
      {"synthetic.faults", [&](std::string_view v) { syn.faults = positive_list("synthetic.faults", v); }},
      {"synthetic.failed_per_fault",
       [&](std::string_view v) { syn.failed_per_fault = positive("synthetic.failed_per_fault", v); }},
      {"synthetic.passed", [&](std::string_view v) { syn.passed = positive("synthetic.passed", v); }},
      {"synthetic.statements", [&](std::string_view v) { syn.statements = positive("synthetic.statements", v); }},
      {"synthetic.noise", [&](std::string_view v) { syn.noise = number<double>("synthetic.noise", v); }},
      {"synthetic.versions", [&](std::string_view v) { syn.versions = positive("synthetic.versions", v); }},
      {"microlang.programs", [&](std::string_view v) { ml.programs = positive("microlang.programs", v); }},
      {"microlang.faults", [&](std::string_view v) { ml.faults = positive_list("microlang.faults", v); }},
      {"microlang.types",
       [&](std::string_view v) {
         ml.types.clear();
         for (auto item : split_list(v)) ml.types.push_back(parse_type(item));
       }},
      {"microlang.versions", [&](std::string_view v) { ml.versions = positive("microlang.versions", v); }},
      {"microlang.suite", [&](std::string_view v) { ml.suite = positive("microlang.suite", v); }},
      {"microlang.min_statements",
       [&](std::string_view v) { ml.shape.min_statements = positive("microlang.min_statements", v); }},
      {"microlang.max_statements",
       [&](std::string_view v) { ml.shape.max_statements = positive("microlang.max_statements", v); }},
      {"microlang.max_depth", [&](std::string_view v) { ml.shape.max_depth = number<int>("microlang.max_depth", v); }},
  });
  read_pairs(text, setters);
  if (!have_seed) throw ConfigError("seed: required");
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

MountainParams parse_mountain_params(std::string_view text) {
  MountainParams m;
  read_pairs(text, mountain_setters(m));
  try {
    m.validate();
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
  return m;
}

std::map<std::string, std::string> config_entries(const ExperimentConfig& cfg) {
  const auto ints = [](const std::vector<int>& v) { return join(v, [](int x) { return std::to_string(x); }); };
  const auto& syn = cfg.synthetic;
  const auto& ml = cfg.microlang;
  return {
      {"seed", std::to_string(cfg.seed)},
      {"corpus", cfg.corpus},
      {"refs", join(cfg.refs, [](RefId r) { return std::string(ref_name(r)); })},
      {"nsp1f", join(cfg.nsp1f, [](double f) { return fmt::format("{:g}", f * 100.0); })},
      {"out", cfg.out},
      {"bandwidth_scale", fmt::format("{:g}", cfg.mountain.bandwidth_scale)},
      {"revision_sharpening", fmt::format("{:g}", cfg.mountain.revision_sharpening)},
      {"stop_ratio", fmt::format("{:g}", cfg.mountain.stop_ratio)},
      {"winsor_low", fmt::format("{:g}", cfg.mountain.winsor_low)},
      {"winsor_high", fmt::format("{:g}", cfg.mountain.winsor_high)},
      {"synthetic.faults", ints(syn.faults)},
      {"synthetic.failed_per_fault", std::to_string(syn.failed_per_fault)},
      {"synthetic.passed", std::to_string(syn.passed)},
      {"synthetic.statements", std::to_string(syn.statements)},
      {"synthetic.noise", fmt::format("{:g}", syn.noise)},
      {"synthetic.versions", std::to_string(syn.versions)},
      {"microlang.programs", std::to_string(ml.programs)},
      {"microlang.faults", ints(ml.faults)},
      {"microlang.types", join(ml.types, [](FaultTypeClass t) { return std::string(type_name(t)); })},
      {"microlang.versions", std::to_string(ml.versions)},
      {"microlang.suite", std::to_string(ml.suite)},
      {"microlang.min_statements", std::to_string(ml.shape.min_statements)},
      {"microlang.max_statements", std::to_string(ml.shape.max_statements)},
      {"microlang.max_depth", std::to_string(ml.shape.max_depth)},
  };
}

}  // namespace failclust
