#include "axs/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "axs/hashing.hpp"

namespace axs {

namespace {

constexpr double kWeiszfeldSmoothing = 1e-12;

// Samples an index proportionally to `weights` using a portable uniform draw.
std::size_t sample_index(const std::vector<double>& weights, double total,
                         std::mt19937_64& rng) {
  if (total <= 0.0) {
    // Degenerate (all weights zero): fall back to a uniform pick.
    return static_cast<std::size_t>(rng() % weights.size());
  }
  const double u = to_unit_double(rng()) * total;
  double acc = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    acc += weights[i];
    if (u < acc) return i;
  }
  return weights.size() - 1;
}

// k-means++ style seeding; sampling uses squared distances for the means
// objective and plain distances for the median one.
Centers seed_centers(const PointSet& pts, std::size_t k, ClusterObjective objective,
                     std::mt19937_64& rng) {
  const std::size_t n = pts.size();
  Centers centers{0, pts.dim(), {}};
  std::vector<double> score(n);
  for (std::size_t i = 0; i < n; ++i) score[i] = pts.weight(i);
  double total = 0.0;
  for (double s : score) total += s;

  std::vector<double> min_d_sq(n, std::numeric_limits<double>::infinity());
  for (std::size_t c = 0; c < k; ++c) {
    const std::size_t pick = sample_index(score, total, rng);
    auto p = pts.point(pick);
    centers.coords.insert(centers.coords.end(), p.begin(), p.end());
    ++centers.count;
    total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = squared_distance(pts.point(i), p);
      min_d_sq[i] = std::min(min_d_sq[i], d);
      score[i] = pts.weight(i) * (objective == ClusterObjective::means
                                      ? min_d_sq[i]
                                      : std::sqrt(min_d_sq[i]));
      total += score[i];
    }
  }
  return centers;
}

void assign(const PointSet& pts, const Centers& centers, std::vector<std::size_t>& out) {
  out.resize(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) out[i] = nearest_center(pts.point(i), centers);
}

// Moves each empty center onto the point farthest from its assigned center.
bool repair_empty(const PointSet& pts, Centers& centers, std::vector<std::size_t>& assignment) {
  std::vector<double> weight_of(centers.count, 0.0);
  for (std::size_t i = 0; i < pts.size(); ++i) weight_of[assignment[i]] += pts.weight(i);
  bool repaired = false;
  for (std::size_t j = 0; j < centers.count; ++j) {
    if (weight_of[j] > 0.0) continue;
    double worst = -1.0;
    std::size_t worst_i = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const double d = squared_distance(pts.point(i), centers.center(assignment[i]));
      if (d > worst) {
        worst = d;
        worst_i = i;
      }
    }
    auto dst = centers.center(j);
    auto src = pts.point(worst_i);
    std::copy(src.begin(), src.end(), dst.begin());
    assignment[worst_i] = j;
    repaired = true;
  }
  if (repaired) assign(pts, centers, assignment);
  return repaired;
}

ClusteringResult run_once(const PointSet& pts, std::size_t k, ClusterObjective objective,
                          std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Centers centers = seed_centers(pts, k, objective, rng);
  std::vector<std::size_t> assignment;
  assign(pts, centers, assignment);
  repair_empty(pts, centers, assignment);

  std::vector<std::size_t> members;
  for (int iter = 0; iter < 100; ++iter) {
    // Center update per cluster.
    for (std::size_t j = 0; j < k; ++j) {
      members.clear();
      for (std::size_t i = 0; i < pts.size(); ++i) {
        if (assignment[i] == j) members.push_back(i);
      }
      if (members.empty()) continue;
      auto dst = centers.center(j);
      if (objective == ClusterObjective::means) {
        std::fill(dst.begin(), dst.end(), 0.0);
        double wsum = 0.0;
        for (std::size_t i : members) {
          const double w = pts.weight(i);
          auto p = pts.point(i);
          for (std::size_t c = 0; c < dst.size(); ++c) dst[c] += w * p[c];
          wsum += w;
        }
        for (double& v : dst) v /= wsum;
      } else {
        const std::vector<double> med = geometric_median(pts, members, dst);
        std::copy(med.begin(), med.end(), dst.begin());
      }
    }
    std::vector<std::size_t> next;
    assign(pts, centers, next);
    const bool repaired = repair_empty(pts, centers, next);
    if (!repaired && next == assignment) break;
    assignment = std::move(next);
  }

  ClusteringResult res;
  res.cost = clustering_cost(pts, centers, objective);
  res.min_cluster_size = min_cluster_size(pts, centers);
  res.centers = std::move(centers);
  return res;
}

std::optional<ClusteringResult> solve(const PointSet& pts, std::size_t k, std::size_t restarts,
                                      std::uint64_t seed, ClusterObjective objective) {
  if (k == 0) throw std::invalid_argument("k must be positive");
  if (restarts == 0) throw std::invalid_argument("restarts must be positive");
  if (pts.size() < k) return std::nullopt;
  std::optional<ClusteringResult> best;
  for (std::size_t r = 0; r < restarts; ++r) {
    std::uint64_t state = seed + r;
    ClusteringResult cand = run_once(pts, k, objective, splitmix64(state));
    if (!best || cand.cost < best->cost) best = std::move(cand);
  }
  return best;
}

}  // namespace

std::vector<double> geometric_median(const PointSet& points,
                                     const std::vector<std::size_t>& member_indices,
                                     std::span<const double> start) {
  std::vector<double> y(start.begin(), start.end());
  std::vector<double> next(y.size());
  for (int iter = 0; iter < 60; ++iter) {
    std::fill(next.begin(), next.end(), 0.0);
    double denom = 0.0;
    for (std::size_t i : member_indices) {
      auto p = points.point(i);
      const double d = std::sqrt(squared_distance(p, y)) + kWeiszfeldSmoothing;
      const double f = points.weight(i) / d;
      for (std::size_t c = 0; c < y.size(); ++c) next[c] += f * p[c];
      denom += f;
    }
    for (double& v : next) v /= denom;
    double move = squared_distance(next, y);
    y.swap(next);
    if (move < 1e-24) break;
  }
  return y;
}

std::optional<ClusteringResult> solve_kmeans(const PointSet& points, std::size_t k,
                                             std::size_t restarts, std::uint64_t seed) {
  return solve(points, k, restarts, seed, ClusterObjective::means);
}

std::optional<ClusteringResult> solve_kmedian(const PointSet& points, std::size_t k,
                                              std::size_t restarts, std::uint64_t seed) {
  return solve(points, k, restarts, seed, ClusterObjective::median);
}

std::optional<ClusteringResult> solve_clustering(const PointSet& points, std::size_t k,
                                                 std::size_t restarts, std::uint64_t seed,
                                                 ClusterObjective objective) {
  return solve(points, k, restarts, seed, objective);
}

}  // namespace axs
