#include "failclust/cluster.hpp"
#include "failclust/error.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>

using namespace failclust;

namespace {

// Points in the plane; Euclidean distances always form a valid matrix.
DistanceMatrix plane(const std::vector<std::pair<double, double>>& pts) {
  const auto n = static_cast<Eigen::Index>(pts.size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      m(i, j) = std::hypot(pts[i].first - pts[j].first, pts[i].second - pts[j].second);
  return DistanceMatrix(m);
}

// Blob b holds sizes[b] points at distance 0 from each other and `gap` from the rest.
DistanceMatrix blobs(const std::vector<int>& sizes, double gap, std::vector<int>* labels) {
  labels->clear();
  for (int b = 0; b < static_cast<int>(sizes.size()); ++b) labels->insert(labels->end(), sizes[b], b);
  const auto n = static_cast<Eigen::Index>(labels->size());
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) m(i, j) = (*labels)[i] == (*labels)[j] ? 0.0 : gap;
  return DistanceMatrix(m);
}

bool same_partition(const std::vector<int>& a, const std::vector<int>& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < a.size(); ++j)
      if ((a[i] == a[j]) != (b[i] == b[j])) return false;
  return true;
}

}  // namespace

TEST(Percentile, InterpolatesBetweenOrderStatistics) {
  EXPECT_DOUBLE_EQ(percentile({4, 1, 3, 2}, 0.0), 1.0);
  EXPECT_DOUBLE_EQ(percentile({4, 1, 3, 2}, 1.0), 4.0);
  EXPECT_DOUBLE_EQ(percentile({4, 1, 3, 2}, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(percentile({10, 20}, 0.25), 12.5);
  EXPECT_THROW(percentile({}, 0.5), DomainError);
}

TEST(Percentile, WinsorizedMeanClipsTails) {
  std::vector<double> v = {0, 1, 1, 1, 1, 1, 1, 1, 1, 100};
  EXPECT_DOUBLE_EQ(winsorized_mean(v, 0.0, 1.0), 10.8);
  const double lo = percentile(v, 0.1), hi = percentile(v, 0.9);
  double want = 0;
  for (double x : v) want += std::min(std::max(x, lo), hi);
  EXPECT_DOUBLE_EQ(winsorized_mean(v, 0.1, 0.9), want / 10);
}

TEST(MountainParams, Validation) {
  EXPECT_NO_THROW(MountainParams{}.validate());
  EXPECT_THROW((MountainParams{0.0, 2.0, 0.15, 0.05, 0.95}.validate()), DomainError);
  EXPECT_THROW((MountainParams{1.0, 2.0, 1.0, 0.05, 0.95}.validate()), DomainError);
  EXPECT_THROW((MountainParams{1.0, 2.0, 0.15, 0.9, 0.1}.validate()), DomainError);
}

TEST(Estimate, DegenerateInputs) {
  EXPECT_THROW(estimate_clusters(DistanceMatrix(Eigen::MatrixXd(0, 0))), DomainError);
  const auto one = estimate_clusters(DistanceMatrix(Eigen::MatrixXd::Zero(1, 1)));
  EXPECT_EQ(one.k, 1);
  EXPECT_EQ(one.initial_medoids, std::vector<int>{0});
  const auto zero = estimate_clusters(DistanceMatrix(Eigen::MatrixXd::Zero(4, 4)));
  EXPECT_EQ(zero.k, 1);
  EXPECT_EQ(zero.initial_medoids, std::vector<int>{0});
}

TEST(Estimate, MotivatingExampleHasTwoClusters) {
  const auto cov = load_coverage(test::data_path("motivating.cov"));
  const auto d = distance_matrix(represent_all(cov, {1.0, 0}, RefId::Ochiai));
  const auto est = estimate_clusters(d);
  EXPECT_EQ(est.k, 2);
  EXPECT_EQ(est.initial_medoids, (std::vector<int>{0, 2}));
  const auto c = kmedoids(d, est);
  EXPECT_TRUE(c.converged);
  // Failed order t3 t4 t5 t7 t8 t10.
  EXPECT_EQ(c.assignment, (std::vector<int>{0, 0, 1, 0, 1, 0}));
}

// Blob sizes stay within the stop ratio of each other: a blob whose own
// potential is below 0.15 of the largest one is absorbed by design.
TEST(EstimateProperty, PlantedBlobsAreRecovered) {
  std::mt19937_64 g(51);
  for (int trial = 0; trial < 200; ++trial) {
    const int nb = 1 + static_cast<int>(g() % 5);
    std::vector<int> sizes(static_cast<std::size_t>(nb));
    for (int& s : sizes) s = nb == 2 ? 2 + static_cast<int>(g() % 5) : 2 + static_cast<int>(g() % 2);
    std::vector<int> labels;
    const auto d = blobs(sizes, 1.0 + static_cast<double>(g() % 50), &labels);
    const auto est = estimate_clusters(d);
    ASSERT_EQ(est.k, nb);
    const auto c = kmedoids(d, est);
    ASSERT_TRUE(same_partition(c.assignment, labels));
    ASSERT_EQ(total_cost(d, c), 0.0);
  }
}

TEST(Estimate, SmallBlobBelowStopRatioIsAbsorbed) {
  std::vector<int> labels;
  const auto d = blobs({1, 8}, 10.0, &labels);
  EXPECT_EQ(estimate_clusters(d).k, 1);
}

TEST(EstimateProperty, Deterministic) {
  std::mt19937_64 g(52);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<std::pair<double, double>> pts(8 + g() % 10);
    for (auto& p : pts) p = {static_cast<double>(g() % 100), static_cast<double>(g() % 100)};
    const auto d = plane(pts);
    const auto a = estimate_clusters(d), b = estimate_clusters(d);
    ASSERT_EQ(a.initial_medoids, b.initial_medoids);
    ASSERT_EQ(a.potential_trace, b.potential_trace);
    ASSERT_EQ(kmedoids(d, a).assignment, kmedoids(d, b).assignment);
    ASSERT_EQ(std::set<int>(a.initial_medoids.begin(), a.initial_medoids.end()).size(), a.initial_medoids.size());
  }
}

TEST(Kmedoids, Errors) {
  const DistanceMatrix d(Eigen::MatrixXd::Zero(2, 2));
  EXPECT_THROW(kmedoids(d, ClusterEstimate{3, {0, 1, 1}, {}, 0}), DomainError);
  EXPECT_THROW(kmedoids(d, ClusterEstimate{2, {0, 0}, {}, 0}), DomainError);
  EXPECT_THROW(kmedoids(d, ClusterEstimate{1, {5}, {}, 0}), DomainError);
  EXPECT_THROW(kmedoids(d, ClusterEstimate{2, {0}, {}, 0}), DomainError);
}

TEST(Kmedoids, EveryPointItsOwnCluster) {
  const auto d = plane({{0, 0}, {1, 0}, {5, 5}});
  const auto c = kmedoids(d, ClusterEstimate{3, {2, 0, 1}, {}, 0});
  EXPECT_EQ(c.assignment, (std::vector<int>{1, 2, 0}));
  EXPECT_EQ(total_cost(d, c), 0.0);
}

TEST(Kmedoids, IdenticalPairPicksSmallestIndex) {
  const DistanceMatrix d(Eigen::MatrixXd::Zero(2, 2));
  const auto c = kmedoids(d, ClusterEstimate{1, {1}, {}, 0});
  EXPECT_EQ(c.medoids, std::vector<int>{0});
  EXPECT_EQ(c.assignment, (std::vector<int>{0, 0}));
}

TEST(KmedoidsProperty, CostNeverIncreasesAndEndsAtFixpoint) {
  std::mt19937_64 g(53);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::pair<double, double>> pts(4 + g() % 12);
    for (auto& p : pts) p = {static_cast<double>(g() % 100), static_cast<double>(g() % 100)};
    const auto d = plane(pts);
    const int n = d.size();
    const int k = 1 + static_cast<int>(g() % std::min(n, 4));
    std::vector<int> init(static_cast<std::size_t>(n));
    std::iota(init.begin(), init.end(), 0);
    std::shuffle(init.begin(), init.end(), g);
    init.resize(static_cast<std::size_t>(k));
    const ClusterEstimate est{k, init, {}, 0};

    const auto final_c = kmedoids(d, est);
    ASSERT_TRUE(final_c.converged);
    double prev = std::numeric_limits<double>::infinity();
    for (int it = 1; it <= final_c.iterations; ++it) {
      const double cost = total_cost(d, kmedoids(d, est, it));
      ASSERT_LE(cost, prev + 1e-9 * std::max(1.0, prev));
      prev = cost;
    }
    // One more round changes nothing.
    const auto again = kmedoids(d, ClusterEstimate{k, final_c.medoids, {}, 0});
    ASSERT_EQ(again.medoids, final_c.medoids);
    ASSERT_EQ(again.assignment, final_c.assignment);
    for (int c = 0; c < k; ++c) ASSERT_EQ(final_c.assignment[final_c.medoids[c]], c);
  }
}
