#include "failclust/distance.hpp"

#include <fmt/format.h>

#include <cmath>

namespace failclust {

DistanceMatrix::DistanceMatrix(Eigen::MatrixXd d) : d_(std::move(d)) {
  if (d_.rows() != d_.cols()) throw DomainError("distance matrix is not square");
  for (Eigen::Index i = 0; i < d_.rows(); ++i) {
    if (d_(i, i) != 0.0) throw DomainError("distance matrix has a non-zero diagonal");
    for (Eigen::Index j = 0; j < d_.cols(); ++j) {
      if (!std::isfinite(d_(i, j)) || d_(i, j) < 0.0)
        throw DomainError("distance matrix entries must be finite and non-negative");
      if (d_(i, j) != d_(j, i)) throw DomainError("distance matrix is not symmetric");
    }
  }
}

DistanceMatrix distance_matrix(std::span<const FailureProxy> proxies) {
  const auto n = static_cast<Eigen::Index>(proxies.size());
  for (const auto& p : proxies) {
    if (p.ref != proxies.front().ref) throw DomainError("proxies built with different REFs");
    if (p.ranking.size() != proxies.front().ranking.size())
      throw DomainError("proxies have different statement counts");
  }
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j)
      d(i, j) = d(j, i) = revised_kendall(proxies[static_cast<std::size_t>(i)].ranking,
                                          proxies[static_cast<std::size_t>(j)].ranking);
  return DistanceMatrix(std::move(d));
}

std::string format_distance_csv(const DistanceMatrix& d, const TestIds& ids) {
  if (static_cast<int>(ids.size()) != d.size())
    throw DomainError("id list does not match the distance matrix size");
  std::string out = "failed_test_id";
  for (int id : ids) out += fmt::format(",{}", id);
  out += '\n';
  for (int i = 0; i < d.size(); ++i) {
    out += std::to_string(ids[static_cast<std::size_t>(i)]);
    for (int j = 0; j < d.size(); ++j) out += fmt::format(",{:.6f}", d(i, j));
    out += '\n';
  }
  return out;
}

}  // namespace failclust
