#pragma once

#include "failclust/distance.hpp"

#include <utility>
#include <vector>

namespace failclust {

/// Constants of the potential (mountain) estimator.
struct MountainParams {
  double bandwidth_scale = 1.0;
  double revision_sharpening = 2.0;
  double stop_ratio = 0.15;
  double winsor_low = 0.05;   // lower percentile, as a fraction
  double winsor_high = 0.95;  // upper percentile, as a fraction

  void validate() const;
};

struct ClusterEstimate {
  int k = 0;
  std::vector<int> initial_medoids;
  /// (chosen point, its potential at the time it was chosen), one per pick.
  std::vector<std::pair<int, double>> potential_trace;
  double bandwidth = 0.0;
};

struct Clustering {
  std::vector<int> assignment;  // point -> cluster id in [0, k)
  std::vector<int> medoids;     // cluster id -> point
  int iterations = 0;
  bool converged = true;

  int k() const noexcept { return static_cast<int>(medoids.size()); }
};

/// Percentile with linear interpolation between order statistics; `p` in [0, 1].
double percentile(std::vector<double> values, double p);

/// Mean of `values` after clipping to the [low, high] percentiles.
double winsorized_mean(const std::vector<double>& values, double low, double high);

/// Picks medoids greedily by potential until the best remaining potential
/// drops below stop_ratio times the first pick's potential.
ClusterEstimate estimate_clusters(const DistanceMatrix& d, const MountainParams& params = {});

/// K-medoids seeded with the estimated medoids. Stops at an assignment
/// fixpoint or after `max_iterations` (then `converged` is false).
Clustering kmedoids(const DistanceMatrix& d, const ClusterEstimate& init, int max_iterations = 100);

/// Sum over points of the distance to their cluster's medoid.
double total_cost(const DistanceMatrix& d, const Clustering& c);

}  // namespace failclust
