#include "failclust/srr.hpp"

#include "failclust/error.hpp"
#include "failclust/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace failclust {

std::uint64_t child_seed(std::uint64_t seed, int failed_test_id) {
  return rng::mix(seed, static_cast<std::uint64_t>(failed_test_id));
}

TestIds sample_passed(const TestIds& all_passed, const Nsp1fPolicy& policy, int failed_test_id) {
  if (all_passed.empty()) throw DomainError("no successful tests to sample from");
  if (!(policy.fraction > 0.0 && policy.fraction <= 1.0))
    throw DomainError("sampling fraction must lie in (0, 1]");

  const std::size_t total = all_passed.size();
  // Slack keeps ceil(0.2 * 5) at 1 despite 0.2 * 5 == 1.0000000000000002.
  auto size = static_cast<std::size_t>(std::ceil(policy.fraction * static_cast<double>(total) - 1e-9));
  size = std::clamp<std::size_t>(size, 1, total);
  if (size == total) return all_passed;

  std::mt19937_64 gen(child_seed(policy.seed, failed_test_id));
  std::vector<std::size_t> idx(total);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  for (std::size_t i = 0; i < size; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng::below(gen, total - i));
    std::swap(idx[i], idx[j]);
  }
  idx.resize(size);
  std::sort(idx.begin(), idx.end());

  TestIds out;
  out.reserve(size);
  for (std::size_t i : idx) out.push_back(all_passed[i]);
  return out;
}

FailureProxy represent(const CoverageRecord& cov, int failed_test_id, const Nsp1fPolicy& policy,
                       RefId ref) {
  if (failed_test_id < 0 || failed_test_id >= cov.num_tests())
    throw DomainError("test id out of range: " + std::to_string(failed_test_id));
  if (cov.verdict(failed_test_id) != Verdict::Fail)
    throw DomainError("test " + std::to_string(failed_test_id) + " did not fail");

  FailureProxy proxy;
  proxy.failed_test_id = failed_test_id;
  proxy.ref = ref;
  proxy.sampled_passed_ids = sample_passed(cov.passed_ids(), policy, failed_test_id);
  const SuiteSelection sel(cov, {failed_test_id}, proxy.sampled_passed_ids);
  proxy.scores = suspiciousness<double>(ref, compute_spectrum(cov, sel));
  proxy.ranking = rank(proxy.scores);
  return proxy;
}

std::vector<FailureProxy> represent_all(const CoverageRecord& cov, const Nsp1fPolicy& policy,
                                        RefId ref) {
  std::vector<FailureProxy> proxies;
  for (int t : cov.failed_ids()) proxies.push_back(represent(cov, t, policy, ref));
  return proxies;
}

}  // namespace failclust
