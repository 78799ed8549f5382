#include "failclust/ref.hpp"

#include "failclust/error.hpp"

#include <cctype>

namespace failclust {

namespace {

constexpr std::array<RefId, kNumRefs> kAllRefs = {
    RefId::Naish1,      RefId::Naish2,         RefId::Jaccard,        RefId::Anderberg,
    RefId::SorensenDice, RefId::Dice,          RefId::Goodman,        RefId::Tarantula,
    RefId::Qe,          RefId::CbiInc,         RefId::Wong2,          RefId::Hamann,
    RefId::SimpleMatching, RefId::Sokal,       RefId::RogersTanimoto, RefId::HammingEtc,
    RefId::Euclid,      RefId::Wong1,          RefId::RusselRao,      RefId::Binary,
    RefId::Scott,       RefId::Rogot1,         RefId::Kulczynski2,    RefId::Ochiai,
    RefId::M2,          RefId::Ample2,         RefId::Wong3,          RefId::ArithmeticMean,
    RefId::Cohen,       RefId::Fleiss,         RefId::Crosstab,       RefId::DStar,
    RefId::GP02,        RefId::GP03,           RefId::GP19};

constexpr std::array<std::string_view, kNumRefs> kNames = {
    "Naish1", "Naish2", "Jaccard", "Anderberg", "SorensenDice", "Dice", "Goodman", "Tarantula",
    "Qe", "CbiInc", "Wong2", "Hamann", "SimpleMatching", "Sokal", "RogersTanimoto", "HammingEtc",
    "Euclid", "Wong1", "RusselRao", "Binary", "Scott", "Rogot1", "Kulczynski2", "Ochiai", "M2",
    "Ample2", "Wong3", "ArithmeticMean", "Cohen", "Fleiss", "Crosstab", "DStar", "GP02", "GP03",
    "GP19"};

// Representative first.
const std::vector<RefGroup>& groups() {
  static const std::vector<RefGroup> g = {
      {1, {RefId::Naish2}, RefId::Naish2},
      {2,
       {RefId::Jaccard, RefId::Anderberg, RefId::SorensenDice, RefId::Dice, RefId::Goodman,
        RefId::M2, RefId::Naish1, RefId::DStar},
       RefId::Jaccard},
      {3, {RefId::Tarantula, RefId::Qe, RefId::CbiInc, RefId::Kulczynski2, RefId::Ochiai},
       RefId::Tarantula},
      {4,
       {RefId::Wong2, RefId::Hamann, RefId::SimpleMatching, RefId::Sokal, RefId::RogersTanimoto,
        RefId::HammingEtc, RefId::Euclid},
       RefId::Wong2},
      {5, {RefId::Wong1, RefId::Binary, RefId::RusselRao}, RefId::Wong1},
      {6, {RefId::Scott, RefId::Rogot1}, RefId::Scott},
      {7, {RefId::Ample2, RefId::ArithmeticMean, RefId::Cohen, RefId::Crosstab}, RefId::Ample2},
      {8, {RefId::Wong3}, RefId::Wong3},
      {9, {RefId::Fleiss}, RefId::Fleiss},
      {10, {RefId::GP02}, RefId::GP02},
      {11, {RefId::GP03}, RefId::GP03},
      {12, {RefId::GP19}, RefId::GP19},
  };
  return g;
}

std::string normalize(std::string_view name) {
  std::string out;
  for (char c : name) {
    if (c == '-' || c == ' ' || c == '_' || c == '&' || c == '.') continue;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

}  // namespace

std::span<const RefId> all_refs() { return kAllRefs; }

std::string_view ref_name(RefId ref) { return kNames[static_cast<std::size_t>(ref)]; }

RefId parse_ref(std::string_view name) {
  const std::string key = normalize(name);
  for (std::size_t i = 0; i < kNames.size(); ++i)
    if (normalize(kNames[i]) == key) return kAllRefs[i];
  throw DomainError("unknown risk evaluation formula: " + std::string(name));
}

const RefGroup& group_of(RefId ref) {
  for (const auto& g : groups())
    for (RefId m : g.members)
      if (m == ref) return g;
  throw DomainError("REF without group");  // unreachable: groups partition all REFs
}

const RefGroup& ref_group(int id) {
  if (id < 1 || id > kNumGroups) throw DomainError("group id out of range: " + std::to_string(id));
  return groups()[static_cast<std::size_t>(id - 1)];
}

std::span<const RefGroup> all_groups() { return groups(); }

RefId parse_ref_or_group(std::string_view name) {
  const std::string key = normalize(name);
  if (key.rfind("group", 0) == 0 && key.size() > 5) {
    int id = 0;
    for (char c : key.substr(5)) {
      if (!std::isdigit(static_cast<unsigned char>(c)))
        throw DomainError("unknown REF group: " + std::string(name));
      id = id * 10 + (c - '0');
    }
    return ref_group(id).representative;
  }
  return parse_ref(name);
}

}  // namespace failclust
