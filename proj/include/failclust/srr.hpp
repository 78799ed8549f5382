#pragma once

#include "failclust/coverage.hpp"
#include "failclust/ref.hpp"

#include <cstdint>
#include <vector>

namespace failclust {

/// Fraction of successful tests paired with each failed test, and the seed of
/// the sampling stream.
struct Nsp1fPolicy {
  double fraction = 1.0;
  std::uint64_t seed = 0;
};

/// Ranking-list proxy of a single failed test.
struct FailureProxy {
  int failed_test_id = -1;
  RefId ref = RefId::Ochiai;
  TestIds sampled_passed_ids;
  SuspiciousnessVector<double> scores;
  RankingList ranking;
};

/// Seed of the per-failed-test sampling stream.
std::uint64_t child_seed(std::uint64_t seed, int failed_test_id);

/// ceil(fraction * |all_passed|) successful tests, uniformly without
/// replacement, returned in their original order.
TestIds sample_passed(const TestIds& all_passed, const Nsp1fPolicy& policy, int failed_test_id);

FailureProxy represent(const CoverageRecord& cov, int failed_test_id, const Nsp1fPolicy& policy,
                       RefId ref);

/// One proxy per failed test of `cov`, in test order.
std::vector<FailureProxy> represent_all(const CoverageRecord& cov, const Nsp1fPolicy& policy,
                                        RefId ref);

}  // namespace failclust
