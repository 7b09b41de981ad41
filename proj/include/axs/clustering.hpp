#pragma once

#include <cstdint>
#include <optional>

#include "axs/points.hpp"

namespace axs {

struct ClusteringResult {
  Centers centers;
  double cost = 0.0;
  std::uint64_t min_cluster_size = 0;
};

// Portable deterministic uniform double in [0, 1) from a 64-bit generator
// output; used instead of std distributions so solver and generator paths
// reproduce exactly on any stdlib.
inline double to_unit_double(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Weighted k-means: k-means++ seeding plus Lloyd iterations to a stable
// assignment, best of `restarts` seeded attempts. Returns nullopt when the
// set holds fewer than k points (not ready).
std::optional<ClusteringResult> solve_kmeans(const PointSet& points, std::size_t k,
                                             std::size_t restarts, std::uint64_t seed);

// Weighted k-median: distance-weighted seeding, then alternating assignment
// and smoothed Weiszfeld center updates.
std::optional<ClusteringResult> solve_kmedian(const PointSet& points, std::size_t k,
                                              std::size_t restarts, std::uint64_t seed);

std::optional<ClusteringResult> solve_clustering(const PointSet& points, std::size_t k,
                                                 std::size_t restarts, std::uint64_t seed,
                                                 ClusterObjective objective);

// Smoothed geometric median of a weighted set (Weiszfeld iterations with a
// 1e-12 denominator floor). Exposed for the median center updates and tests.
std::vector<double> geometric_median(const PointSet& points,
                                     const std::vector<std::size_t>& member_indices,
                                     std::span<const double> start);

}  // namespace axs
