#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <unordered_map>

#include "axs/clustering.hpp"
#include "axs/points.hpp"

namespace axs {

// Reference computations used by tests and trajectory reports. Everything
// here is deterministic, holds its input in memory, and stays independent of
// the sketching code paths.

inline constexpr std::uint64_t kOracleCap = std::uint64_t{1} << 17;

// Exact item multiplicities; F2 = sum of squared counts.
class ExactCounter {
 public:
  void insert(std::uint64_t item) {
    ++counts_[item];
    ++total_;
  }
  std::uint64_t f2() const {
    std::uint64_t acc = 0;
    for (const auto& [item, c] : counts_) acc += c * c;
    return acc;
  }
  std::uint64_t total() const { return total_; }
  std::size_t distinct() const { return counts_.size(); }

 private:
  std::unordered_map<std::uint64_t, std::uint64_t> counts_;
  std::uint64_t total_ = 0;
};

// Throws std::invalid_argument beyond the desk-scale cap.
std::uint64_t exact_f2(std::span<const std::uint64_t> stream);

struct LeastSquaresSolution {
  Eigen::VectorXd coefficients;
  double residual = 0.0;
};

// Minimum-norm least squares via a dense SVD; exact residual.
LeastSquaresSolution exact_least_squares(const Eigen::MatrixXd& a, const Eigen::VectorXd& b);

// Exact optimum by enumerating every assignment; means uses closed-form
// centroids, median an exact 1-d weighted median or a shrinking grid search
// in higher dimension. Caps: 14 points, k <= 3.
ClusteringResult optimal_clustering_tiny(const PointSet& points, std::size_t k,
                                         ClusterObjective objective);

// A^T B by naive triple loop, kept free of Eigen expression machinery.
Eigen::MatrixXd exact_matmul(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

}  // namespace axs
