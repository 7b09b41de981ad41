#include "axs/points.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace axs {

void PointSet::add(std::span<const double> coords, double weight) {
  if (dim_ == 0 && coords_.empty()) dim_ = coords.size();
  if (coords.size() != dim_) {
    throw std::invalid_argument("point dimension mismatch");
  }
  if (!(weight > 0.0) || !std::isfinite(weight)) {
    throw std::invalid_argument("point weight must be positive and finite");
  }
  for (double v : coords) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite point coordinate");
  }
  coords_.insert(coords_.end(), coords.begin(), coords.end());
  weights_.push_back(weight);
}

void PointSet::append(const PointSet& other) {
  for (std::size_t i = 0; i < other.size(); ++i) {
    add(other.point(i), other.weight(i));
  }
}

double PointSet::total_weight() const {
  double acc = 0.0;
  for (double w : weights_) acc += w;
  return acc;
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    acc += d * d;
  }
  return acc;
}

std::size_t nearest_center(std::span<const double> point, const Centers& centers,
                           double* dist_sq_out) {
  std::size_t best = 0;
  double best_d = squared_distance(point, centers.center(0));
  for (std::size_t j = 1; j < centers.count; ++j) {
    const double d = squared_distance(point, centers.center(j));
    if (d < best_d) {
      best_d = d;
      best = j;
    }
  }
  if (dist_sq_out) *dist_sq_out = best_d;
  return best;
}

double clustering_cost(const PointSet& points, const Centers& centers,
                       ClusterObjective objective) {
  if (centers.count == 0) throw std::logic_error("cost undefined for an empty center set");
  double acc = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    double d_sq = 0.0;
    nearest_center(points.point(i), centers, &d_sq);
    acc += objective == ClusterObjective::means ? points.weight(i) * d_sq
                                                : points.weight(i) * std::sqrt(d_sq);
  }
  return acc;
}

std::uint64_t min_cluster_size(const PointSet& points, const Centers& centers) {
  if (centers.count == 0) throw std::logic_error("assignment undefined for empty center set");
  std::vector<double> assigned(centers.count, 0.0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    assigned[nearest_center(points.point(i), centers)] += points.weight(i);
  }
  double min_w = assigned[0];
  for (double w : assigned) min_w = std::min(min_w, w);
  return static_cast<std::uint64_t>(std::floor(min_w));
}

}  // namespace axs
