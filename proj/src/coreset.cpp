#include "axs/coreset.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <map>
#include <random>
#include <stdexcept>

#include "axs/hashing.hpp"

namespace axs {

namespace {

// Merges points with bit-identical coordinates, summing weights. Keeps the
// first-seen order so the result is deterministic.
PointSet aggregate_duplicates(const PointSet& pts) {
  const std::size_t d = pts.dim();
  std::map<std::vector<double>, std::size_t> seen;
  PointSet out(d);
  std::vector<double> key(d);
  std::vector<std::size_t> order;
  std::vector<double> weights;
  std::vector<std::vector<double>> coords;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    auto p = pts.point(i);
    key.assign(p.begin(), p.end());
    auto [it, inserted] = seen.emplace(key, coords.size());
    if (inserted) {
      coords.push_back(key);
      weights.push_back(pts.weight(i));
    } else {
      weights[it->second] += pts.weight(i);
    }
  }
  for (std::size_t i = 0; i < coords.size(); ++i) out.add(coords[i], weights[i]);
  return out;
}

void rescale_weights(PointSet& pts, double target_total) {
  const double total = pts.total_weight();
  if (total <= 0.0) return;
  const double f = target_total / total;
  for (std::size_t i = 0; i < pts.size(); ++i) pts.weight(i) *= f;
}

}  // namespace

std::uint64_t coreset_size_g(double eps, std::uint64_t n, std::size_t k, std::size_t d,
                             double delta, double size_constant) {
  if (eps <= 0.0 || eps > 0.5 || delta <= 0.0 || delta > 0.5) {
    throw std::invalid_argument("coreset eps and delta must lie in (0, 1/2]");
  }
  const double raw = std::ceil(size_constant * static_cast<double>(k) * static_cast<double>(d) *
                               std::log(2.0 / delta) / (eps * eps));
  const double capped = std::min(raw, static_cast<double>(n));
  return static_cast<std::uint64_t>(std::max(1.0, capped));
}

PointSet sample_coreset(const PointSet& points, std::size_t k, std::uint64_t target_size,
                        ClusterObjective objective, std::uint64_t seed) {
  if (points.empty()) throw std::invalid_argument("cannot build a coreset of an empty set");
  const std::size_t n = points.size();
  if (k > n || target_size >= n) return aggregate_duplicates(points);

  // Bicriteria solution: one cheap seeded run, few iterations are enough.
  std::uint64_t state = seed ^ 0x9d8f3c1bu;
  const auto bi = solve_clustering(points, k, 1, splitmix64(state), objective);
  const Centers& centers = bi->centers;

  // Per-point sensitivity upper bounds from the bicriteria solution: own
  // cost share, the cluster's average cost share, and the cluster-mass
  // share.
  std::vector<std::size_t> owner(n);
  std::vector<double> contrib(n);
  std::vector<double> cluster_weight(k, 0.0);
  std::vector<double> cluster_cost(k, 0.0);
  double total_cost = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double d_sq = 0.0;
    owner[i] = nearest_center(points.point(i), centers, &d_sq);
    contrib[i] = points.weight(i) *
                 (objective == ClusterObjective::means ? d_sq : std::sqrt(d_sq));
    total_cost += contrib[i];
    cluster_weight[owner[i]] += points.weight(i);
    cluster_cost[owner[i]] += contrib[i];
  }
  std::vector<double> sensitivity(n);
  double total_sens = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t b = owner[i];
    double s = 4.0 * points.weight(i) / cluster_weight[b];
    if (total_cost > 0.0) {
      s += contrib[i] / total_cost +
           2.0 * points.weight(i) * cluster_cost[b] / (cluster_weight[b] * total_cost);
    }
    sensitivity[i] = s;
    total_sens += s;
  }

  // Systematic proportional draws: one uniform offset, stride total/t.
  // Points with sensitivity mass above one stride get their proportional
  // copies outright, so only fractional parts contribute sampling noise.
  std::mt19937_64 rng(splitmix64(state));
  std::map<std::size_t, std::uint64_t> draws;
  const double stride = total_sens / static_cast<double>(target_size);
  double next_tick = to_unit_double(rng()) * stride;
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    acc += sensitivity[i];
    while (next_tick < acc) {
      ++draws[i];
      next_tick += stride;
    }
  }

  PointSet out(points.dim());
  const double t = static_cast<double>(target_size);
  for (const auto& [idx, count] : draws) {
    const double prob = sensitivity[idx] / total_sens;
    const double w = points.weight(idx) * static_cast<double>(count) / (t * prob);
    out.add(points.point(idx), w);
  }
  rescale_weights(out, points.total_weight());
  return aggregate_duplicates(out);
}

PointSet build_coreset(const PointSet& points, std::size_t k, double eps, double delta,
                       ClusterObjective objective, std::uint64_t seed, double size_constant) {
  const std::uint64_t target =
      coreset_size_g(eps, points.size(), k, points.dim(), delta, size_constant);
  return sample_coreset(points, k, target, objective, seed);
}

CoresetSummary::CoresetSummary(Config cfg) : cfg_(cfg), buffer_(cfg.dim) {
  if (cfg_.epsilon0 <= 0.0 || cfg_.epsilon0 > 0.5 || cfg_.delta <= 0.0 || cfg_.delta >= 0.5) {
    throw std::invalid_argument("epsilon0 and delta must lie in (0, 1/2)");
  }
  if (cfg_.k == 0 || cfg_.dim == 0) throw std::invalid_argument("k and dim must be positive");
}

void CoresetSummary::insert(std::span<const double> point) {
  if (point.size() != cfg_.dim) {
    throw std::invalid_argument("point dimension does not match summary dimension");
  }
  buffer_.add(point, 1.0);
  ledger_.allocate(cfg_.dim + 1);
  ++points_total_;
  const std::uint64_t block_capacity = std::uint64_t{1} << next_block_;
  if (buffer_.size() >= block_capacity) seal_block();
}

void CoresetSummary::seal_block() {
  const std::uint32_t i = next_block_;
  const std::uint32_t eff = std::max<std::uint32_t>(1, i);
  const double eps_i = cfg_.epsilon0 / static_cast<double>(eff);
  const double delta_i = cfg_.delta / (2.0 * eff * eff);
  std::uint64_t state = cfg_.seed + 0x7b1a6fe5u * (static_cast<std::uint64_t>(i) + 1);
  const std::uint64_t target =
      coreset_size_g(std::min(eps_i, 0.5), buffer_.size(), cfg_.k, cfg_.dim, delta_i,
                     cfg_.size_constant);
  PointSet core = sample_coreset(buffer_, cfg_.k, target, cfg_.objective, splitmix64(state));

  ledger_.release(buffer_.memory_words());
  ledger_.allocate(core.memory_words());
  blocks_.push_back(BlockCoreset{std::move(core), i, buffer_.size(), eps_i, delta_i});
  buffer_ = PointSet(cfg_.dim);
  ++next_block_;
}

PointSet CoresetSummary::sealed_points() const {
  PointSet out(cfg_.dim);
  for (const auto& b : blocks_) out.append(b.points);
  return out;
}

std::uint64_t CoresetSummary::summary_size() const {
  std::uint64_t acc = 0;
  for (const auto& b : blocks_) acc += b.points.size();
  return acc;
}

std::optional<ClusteringResult> solve_kmeans(const CoresetSummary& summary, std::size_t k,
                                             std::size_t restarts, std::uint64_t seed) {
  return solve_kmeans(summary.sealed_points(), k, restarts, seed);
}

std::optional<ClusteringResult> solve_kmedian(const CoresetSummary& summary, std::size_t k,
                                              std::size_t restarts, std::uint64_t seed) {
  return solve_kmedian(summary.sealed_points(), k, restarts, seed);
}

}  // namespace axs
