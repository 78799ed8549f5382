#include "failclust/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace failclust {

void MountainParams::validate() const {
  if (!(bandwidth_scale > 0.0)) throw DomainError("bandwidth_scale must be positive");
  if (!(revision_sharpening > 0.0)) throw DomainError("revision_sharpening must be positive");
  if (!(stop_ratio > 0.0 && stop_ratio < 1.0)) throw DomainError("stop_ratio must lie in (0, 1)");
  if (!(winsor_low >= 0.0 && winsor_low <= winsor_high && winsor_high <= 1.0))
    throw DomainError("winsor limits must satisfy 0 <= low <= high <= 1");
}

double percentile(std::vector<double> values, double p) {
  if (values.empty()) throw DomainError("percentile of an empty list");
  std::sort(values.begin(), values.end());
  const double pos = p * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

double winsorized_mean(const std::vector<double>& values, double low, double high) {
  const double lo = percentile(values, low);
  const double hi = percentile(values, high);
  double sum = 0.0;
  for (double v : values) sum += std::clamp(v, lo, hi);
  return sum / static_cast<double>(values.size());
}

namespace {

// Potentials and costs are float sums whose value depends on summation order;
// values this close count as tied so the lowest index wins.
constexpr double kTieEps = 1e-9;

bool clearly_less(double a, double b) { return a < b - kTieEps * std::max(1.0, std::abs(b)); }

}  // namespace

ClusterEstimate estimate_clusters(const DistanceMatrix& d, const MountainParams& params) {
  params.validate();
  const int n = d.size();
  if (n == 0) throw DomainError("cannot estimate clusters of zero failures");

  ClusterEstimate est;
  if (n == 1) {
    est.k = 1;
    est.initial_medoids = {0};
    est.potential_trace = {{0, 0.0}};
    return est;
  }

  std::vector<double> pairwise;
  pairwise.reserve(static_cast<std::size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairwise.push_back(d(i, j));
  est.bandwidth =
      params.bandwidth_scale * winsorized_mean(pairwise, params.winsor_low, params.winsor_high);

  if (est.bandwidth <= 0.0) {
    est.k = 1;
    est.initial_medoids = {0};
    est.potential_trace = {{0, static_cast<double>(n - 1)}};
    return est;
  }

  const double sigma = est.bandwidth;
  std::vector<double> potential(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (j != i) {
        const double z = d(i, j) / sigma;
        potential[i] += std::exp(-z * z);
      }

  std::vector<bool> chosen(static_cast<std::size_t>(n), false);
  double first = 0.0;
  while (true) {
    int best = -1;
    for (int i = 0; i < n; ++i)
      if (!chosen[i] && (best < 0 || clearly_less(potential[best], potential[i]))) best = i;
    if (best < 0) break;
    const double peak = potential[best];
    if (est.potential_trace.empty())
      first = peak;
    else if (peak < params.stop_ratio * first)
      break;

    chosen[best] = true;
    est.initial_medoids.push_back(best);
    est.potential_trace.emplace_back(best, peak);
    for (int i = 0; i < n; ++i) {
      const double z = d(i, best) * params.revision_sharpening / sigma;
      potential[i] -= peak * std::exp(-z * z);
    }
  }
  est.k = static_cast<int>(est.initial_medoids.size());
  return est;
}

namespace {

std::vector<int> assign(const DistanceMatrix& d, const std::vector<int>& medoids) {
  const int n = d.size();
  std::vector<int> out(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    int best = 0;
    for (int c = 1; c < static_cast<int>(medoids.size()); ++c)
      if (clearly_less(d(i, medoids[c]), d(i, medoids[best]))) best = c;
    out[i] = best;
  }
  for (int c = 0; c < static_cast<int>(medoids.size()); ++c) out[medoids[c]] = c;
  return out;
}

std::vector<int> update_medoids(const DistanceMatrix& d, const std::vector<int>& assignment,
                                std::vector<int> medoids) {
  const int n = d.size();
  for (int c = 0; c < static_cast<int>(medoids.size()); ++c) {
    double best_cost = 0.0;
    int best = -1;
    for (int i = 0; i < n; ++i) {
      if (assignment[i] != c) continue;
      double cost = 0.0;
      for (int j = 0; j < n; ++j)
        if (assignment[j] == c) cost += d(i, j);
      if (best < 0 || clearly_less(cost, best_cost)) {
        best = i;
        best_cost = cost;
      }
    }
    if (best >= 0) medoids[c] = best;
  }
  return medoids;
}

}  // namespace

Clustering kmedoids(const DistanceMatrix& d, const ClusterEstimate& init, int max_iterations) {
  const int n = d.size();
  if (init.k < 1 || static_cast<int>(init.initial_medoids.size()) != init.k)
    throw DomainError("cluster estimate is inconsistent");
  if (init.k > n) throw DomainError("more clusters than failures");
  std::vector<bool> seen(static_cast<std::size_t>(n), false);
  for (int m : init.initial_medoids) {
    if (m < 0 || m >= n) throw DomainError("initial medoid out of range");
    if (seen[m]) throw DomainError("initial medoids are not distinct");
    seen[m] = true;
  }

  Clustering out;
  out.medoids = init.initial_medoids;
  out.assignment = assign(d, out.medoids);
  out.converged = false;
  for (out.iterations = 0; out.iterations < max_iterations;) {
    ++out.iterations;
    auto medoids = update_medoids(d, out.assignment, out.medoids);
    auto assignment = assign(d, medoids);
    const bool fixpoint = medoids == out.medoids && assignment == out.assignment;
    out.medoids = std::move(medoids);
    out.assignment = std::move(assignment);
    if (fixpoint) {
      out.converged = true;
      break;
    }
  }
  return out;
}

double total_cost(const DistanceMatrix& d, const Clustering& c) {
  double cost = 0.0;
  for (int i = 0; i < static_cast<int>(c.assignment.size()); ++i)
    cost += d(i, c.medoids[c.assignment[i]]);
  return cost;
}

}  // namespace failclust
