#include "axs/oracles.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace axs {

std::uint64_t exact_f2(std::span<const std::uint64_t> stream) {
  if (stream.size() > kOracleCap) {
    throw std::invalid_argument("exact_f2 input exceeds the desk-scale cap");
  }
  ExactCounter counter;
  for (std::uint64_t item : stream) counter.insert(item);
  return counter.f2();
}

LeastSquaresSolution exact_least_squares(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  if (a.rows() == 0) throw std::invalid_argument("least squares needs at least one row");
  if (a.rows() != b.size()) throw std::invalid_argument("row counts of A and b differ");
  if (static_cast<std::uint64_t>(a.rows()) > kOracleCap) {
    throw std::invalid_argument("least squares input exceeds the desk-scale cap");
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  LeastSquaresSolution sol;
  sol.coefficients = svd.solve(b);
  sol.residual = (a * sol.coefficients - b).norm();
  return sol;
}

namespace {

double weighted_median_1d(const PointSet& pts, const std::vector<std::size_t>& members) {
  std::vector<std::pair<double, double>> vals;  // (coordinate, weight)
  vals.reserve(members.size());
  double total = 0.0;
  for (std::size_t i : members) {
    vals.emplace_back(pts.point(i)[0], pts.weight(i));
    total += pts.weight(i);
  }
  std::sort(vals.begin(), vals.end());
  double acc = 0.0;
  for (const auto& [x, w] : vals) {
    acc += w;
    if (2.0 * acc >= total) return x;
  }
  return vals.back().first;
}

double median_part_cost(const PointSet& pts, const std::vector<std::size_t>& members,
                        std::span<const double> center) {
  double acc = 0.0;
  for (std::size_t i : members) {
    acc += pts.weight(i) * std::sqrt(squared_distance(pts.point(i), center));
  }
  return acc;
}

// Derivative-free 1-median: grid search over the member bounding box,
// recentered and shrunk until the pitch is below 1e-3 of the box span.
std::vector<double> grid_median(const PointSet& pts, const std::vector<std::size_t>& members) {
  const std::size_t d = pts.dim();
  std::vector<double> lo(d, std::numeric_limits<double>::infinity());
  std::vector<double> hi(d, -std::numeric_limits<double>::infinity());
  for (std::size_t i : members) {
    auto p = pts.point(i);
    for (std::size_t c = 0; c < d; ++c) {
      lo[c] = std::min(lo[c], p[c]);
      hi[c] = std::max(hi[c], p[c]);
    }
  }
  double span = 0.0;
  for (std::size_t c = 0; c < d; ++c) span = std::max(span, hi[c] - lo[c]);
  std::vector<double> best((lo));
  for (std::size_t c = 0; c < d; ++c) best[c] = 0.5 * (lo[c] + hi[c]);
  if (span == 0.0 || members.size() == 1) {
    return {pts.point(members[0]).begin(), pts.point(members[0]).end()};
  }

  constexpr int kSide = 20;  // grid cells per axis and round
  double pitch = span / kSide;
  std::vector<double> probe(d);
  double best_cost = median_part_cost(pts, members, best);
  while (pitch > 1e-3 * span / kSide) {
    if (d == 1) {
      for (int i0 = -kSide / 2; i0 <= kSide / 2; ++i0) {
        probe[0] = best[0] + i0 * pitch;
        const double c = median_part_cost(pts, members, probe);
        if (c < best_cost) {
          best_cost = c;
          best = probe;
        }
      }
    } else {
      // Probe the first two axes jointly, remaining axes one at a time.
      std::vector<double> anchor = best;
      for (int i0 = -kSide / 2; i0 <= kSide / 2; ++i0) {
        for (int i1 = -kSide / 2; i1 <= kSide / 2; ++i1) {
          probe = anchor;
          probe[0] = anchor[0] + i0 * pitch;
          probe[1] = anchor[1] + i1 * pitch;
          const double c = median_part_cost(pts, members, probe);
          if (c < best_cost) {
            best_cost = c;
            best = probe;
          }
        }
      }
      for (std::size_t ax = 2; ax < d; ++ax) {
        anchor = best;
        for (int i0 = -kSide / 2; i0 <= kSide / 2; ++i0) {
          probe = anchor;
          probe[ax] = anchor[ax] + i0 * pitch;
          const double c = median_part_cost(pts, members, probe);
          if (c < best_cost) {
            best_cost = c;
            best = probe;
          }
        }
      }
    }
    pitch /= 4.0;
  }
  return best;
}

}  // namespace

namespace {

struct PartSolution {
  double cost = 0.0;
  std::vector<double> center;
};

PartSolution solve_part(const PointSet& points, const std::vector<std::size_t>& part,
                        ClusterObjective objective) {
  const std::size_t d = points.dim();
  PartSolution sol;
  if (objective == ClusterObjective::means) {
    sol.center.assign(d, 0.0);
    double wsum = 0.0;
    for (std::size_t i : part) {
      const double w = points.weight(i);
      auto p = points.point(i);
      for (std::size_t c = 0; c < d; ++c) sol.center[c] += w * p[c];
      wsum += w;
    }
    for (double& v : sol.center) v /= wsum;
    for (std::size_t i : part) {
      sol.cost += points.weight(i) * squared_distance(points.point(i), sol.center);
    }
  } else {
    sol.center = d == 1 ? std::vector<double>{weighted_median_1d(points, part)}
                        : grid_median(points, part);
    sol.cost = median_part_cost(points, part, sol.center);
  }
  return sol;
}

}  // namespace

ClusteringResult optimal_clustering_tiny(const PointSet& points, std::size_t k,
                                         ClusterObjective objective) {
  const std::size_t n = points.size();
  if (n == 0 || n > 14) throw std::invalid_argument("tiny oracle handles 1..14 points");
  if (k == 0 || k > 3) throw std::invalid_argument("tiny oracle handles k <= 3");
  const std::size_t d = points.dim();

  std::uint64_t combos = 1;
  for (std::size_t i = 0; i < n; ++i) combos *= k;

  // Parts repeat across assignments, so their optimal centers are memoized
  // by membership bitmask. With n <= 14 there are at most 2^14 of them.
  std::unordered_map<std::uint32_t, PartSolution> memo;
  std::vector<std::size_t> members;
  auto part_solution = [&](std::uint32_t mask) -> const PartSolution& {
    auto it = memo.find(mask);
    if (it != memo.end()) return it->second;
    members.clear();
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::uint32_t{1} << i)) members.push_back(i);
    }
    return memo.emplace(mask, solve_part(points, members, objective)).first->second;
  };

  double best_cost = std::numeric_limits<double>::infinity();
  std::array<std::uint32_t, 3> best_masks{};
  std::vector<std::size_t> assignment(n);
  for (std::uint64_t code = 0; code < combos; ++code) {
    std::uint64_t c = code;
    std::array<std::uint32_t, 3> masks{};
    for (std::size_t i = 0; i < n; ++i) {
      masks[c % k] |= std::uint32_t{1} << i;
      c /= k;
    }
    double cost = 0.0;
    for (std::size_t j = 0; j < k && cost < best_cost; ++j) {
      if (masks[j] != 0) cost += part_solution(masks[j]).cost;
    }
    if (cost < best_cost) {
      best_cost = cost;
      best_masks = masks;
    }
  }

  ClusteringResult res;
  res.centers = Centers{0, d, {}};
  for (std::size_t j = 0; j < k; ++j) {
    if (best_masks[j] == 0) continue;
    const auto& sol = part_solution(best_masks[j]);
    res.centers.coords.insert(res.centers.coords.end(), sol.center.begin(), sol.center.end());
    ++res.centers.count;
  }
  res.cost = best_cost;
  res.min_cluster_size = min_cluster_size(points, res.centers);
  return res;
}

Eigen::MatrixXd exact_matmul(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("A and B must share row counts");
  if (static_cast<std::uint64_t>(a.rows()) > kOracleCap) {
    throw std::invalid_argument("matmul input exceeds the desk-scale cap");
  }
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(a.cols(), b.cols());
  for (Eigen::Index i = 0; i < a.cols(); ++i) {
    for (Eigen::Index j = 0; j < b.cols(); ++j) {
      double acc = 0.0;
      for (Eigen::Index r = 0; r < a.rows(); ++r) acc += a(r, i) * b(r, j);
      out(i, j) = acc;
    }
  }
  return out;
}

}  // namespace axs
