#pragma once

#include "failclust/error.hpp"
#include "failclust/srr.hpp"

#include <Eigen/Dense>

#include <span>
#include <string>
#include <vector>

namespace failclust {

/// Revised Kendall tau distance between two ranking lists.
///
/// A statement pair is discordant when the two lists order it strictly
/// oppositely; pairs tied in either list contribute nothing. A discordant pair
/// (i, j) contributes 1/a_i + 1/a_j + 1/b_i + 1/b_j, so disagreements near the
/// top of the lists weigh more.
template <typename Scalar = double, typename DerivedA, typename DerivedB>
Scalar revised_kendall(const Eigen::DenseBase<DerivedA>& a, const Eigen::DenseBase<DerivedB>& b) {
  if (a.size() != b.size())
    throw DomainError("ranking lists differ in length: " + std::to_string(a.size()) + " vs " +
                      std::to_string(b.size()));
  const Eigen::Index n = a.size();
  Scalar total = 0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const auto da = a(i) - a(j);
      const auto db = b(i) - b(j);
      if ((da < 0 && db > 0) || (da > 0 && db < 0)) {
        total += Scalar(1) / Scalar(a(i)) + Scalar(1) / Scalar(a(j)) + Scalar(1) / Scalar(b(i)) +
                 Scalar(1) / Scalar(b(j));
      }
    }
  }
  return total;
}

/// Symmetric, zero-diagonal, non-negative matrix of pairwise failure distances.
class DistanceMatrix {
 public:
  DistanceMatrix() = default;
  /// Validates symmetry, zero diagonal, finiteness and non-negativity.
  explicit DistanceMatrix(Eigen::MatrixXd d);

  int size() const noexcept { return static_cast<int>(d_.rows()); }
  double operator()(int i, int j) const { return d_(i, j); }
  const Eigen::MatrixXd& matrix() const noexcept { return d_; }

 private:
  Eigen::MatrixXd d_;
};

DistanceMatrix distance_matrix(std::span<const FailureProxy> proxies);

/// CSV with a header row of failed test ids, then one row per failed test.
std::string format_distance_csv(const DistanceMatrix& d, const TestIds& ids);

}  // namespace failclust
