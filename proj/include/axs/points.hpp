#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace axs {

enum class ClusterObjective { means, median };

struct WeightedPoint {
  std::vector<double> coordinates;
  double weight = 1.0;
};

// Flat storage for a weighted point set; the workhorse behind coresets,
// solvers and oracles.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::size_t dim) : dim_(dim) {}

  void add(std::span<const double> coords, double weight = 1.0);
  void append(const PointSet& other);

  std::size_t size() const { return weights_.size(); }
  std::size_t dim() const { return dim_; }
  bool empty() const { return weights_.empty(); }

  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * dim_, dim_};
  }
  double weight(std::size_t i) const { return weights_[i]; }
  double& weight(std::size_t i) { return weights_[i]; }
  double total_weight() const;

  const std::vector<double>& coords() const { return coords_; }
  const std::vector<double>& weights() const { return weights_; }

  WeightedPoint weighted_point(std::size_t i) const {
    auto p = point(i);
    return WeightedPoint{{p.begin(), p.end()}, weights_[i]};
  }

  // Memory words for ledger accounting: d coordinates plus one weight each.
  std::uint64_t memory_words() const {
    return static_cast<std::uint64_t>(size()) * (dim_ + 1);
  }

 private:
  std::size_t dim_ = 0;
  std::vector<double> coords_;   // row-major size * dim
  std::vector<double> weights_;
};

// k center vectors in flat row-major storage.
struct Centers {
  std::size_t count = 0;
  std::size_t dim = 0;
  std::vector<double> coords;  // count * dim

  std::span<const double> center(std::size_t j) const {
    return {coords.data() + j * dim, dim};
  }
  std::span<double> center(std::size_t j) { return {coords.data() + j * dim, dim}; }

  static Centers zeros(std::size_t count, std::size_t dim) {
    return Centers{count, dim, std::vector<double>(count * dim, 0.0)};
  }
};

double squared_distance(std::span<const double> a, std::span<const double> b);

// Index of the closest center, ties to the lowest index.
std::size_t nearest_center(std::span<const double> point, const Centers& centers,
                           double* dist_sq_out = nullptr);

// Exact weighted cost: sum w * dist^2 (means) or sum w * dist (median).
// Throws std::logic_error on an empty center set.
double clustering_cost(const PointSet& points, const Centers& centers, ClusterObjective objective);

// Minimum over centers of the floor of the assigned weight, nearest-center
// assignment with ties to the lowest center index.
std::uint64_t min_cluster_size(const PointSet& points, const Centers& centers);

}  // namespace axs
