#pragma once

#include "failclust/coverage.hpp"

#include <random>
#include <string>

namespace failclust::test {

inline std::string data_path(const std::string& name) { return std::string(FAILCLUST_TEST_DATA) + "/" + name; }

/// Random coverage record with at least one failed and one passed test.
inline CoverageRecord random_coverage(std::mt19937_64& g, int statements, int tests, double density = 0.5) {
  std::bernoulli_distribution bit(density);
  CoverageMatrix m(statements, tests);
  for (int s = 0; s < statements; ++s)
    for (int t = 0; t < tests; ++t) m(s, t) = bit(g);
  std::vector<Verdict> v(static_cast<std::size_t>(tests));
  for (auto& x : v) x = bit(g) ? Verdict::Fail : Verdict::Pass;
  v.front() = Verdict::Fail;
  if (tests > 1) v.back() = Verdict::Pass;
  return CoverageRecord(std::move(m), std::move(v));
}

}  // namespace failclust::test
