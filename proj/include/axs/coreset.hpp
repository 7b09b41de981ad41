#pragma once

#include <cstdint>
#include <vector>

#include "axs/clustering.hpp"
#include "axs/memory_ledger.hpp"
#include "axs/points.hpp"

namespace axs {

// Target coreset size ceil(C_g * k * d * ln(2/delta) / eps^2), capped at n.
// Throws std::invalid_argument unless eps, delta lie in (0, 1/2].
std::uint64_t coreset_size_g(double eps, std::uint64_t n, std::size_t k, std::size_t d,
                             double delta, double size_constant);

// Sensitivity-based importance sampling down to `target_size` points:
// a cheap bicriteria solution supplies per-point sensitivity upper bounds,
// points are drawn proportionally, inverse-probability weighted, duplicates
// aggregated, and the weights rescaled to sum to the input weight.
// target_size >= n (or k > n) returns the input verbatim with exact
// duplicates merged.
PointSet sample_coreset(const PointSet& points, std::size_t k, std::uint64_t target_size,
                        ClusterObjective objective, std::uint64_t seed);

// Coreset with the size picked by coreset_size_g.
PointSet build_coreset(const PointSet& points, std::size_t k, double eps, double delta,
                       ClusterObjective objective, std::uint64_t seed, double size_constant);

struct BlockCoreset {
  PointSet points;          // S_i
  std::uint32_t block_index = 0;
  std::uint64_t block_size = 0;  // n_i = 2^i
  double precision = 0.0;        // eps_i = eps0 / max(1, i)
  double failure_budget = 0.0;   // delta_i = delta / (2 max(1, i)^2)
};

// Streamed union-of-block-coresets summary. Points are buffered until the
// current block reaches 2^i entries, then compressed with precision eps_i
// and budget delta_i; sealed blocks are never merged or re-compressed.
class CoresetSummary {
 public:
  struct Config {
    std::size_t k = 3;
    std::size_t dim = 2;
    double epsilon0 = 0.5;
    double delta = 0.1;
    double size_constant = 2.0;  // C_g
    std::uint64_t seed = 1;
    ClusterObjective objective = ClusterObjective::means;
  };

  explicit CoresetSummary(Config cfg);

  // Buffers the point; seals a block when the buffer reaches 2^i.
  // Throws std::invalid_argument on dimension mismatch.
  void insert(std::span<const double> point);

  const std::vector<BlockCoreset>& blocks() const { return blocks_; }
  const PointSet& buffer() const { return buffer_; }
  std::uint64_t points_total() const { return points_total_; }

  // Union of all sealed block coresets.
  PointSet sealed_points() const;
  std::uint64_t summary_size() const;

  const MemoryLedger& ledger() const { return ledger_; }
  const Config& config() const { return cfg_; }

 private:
  void seal_block();

  Config cfg_;
  MemoryLedger ledger_;
  std::vector<BlockCoreset> blocks_;
  PointSet buffer_;
  std::uint64_t points_total_ = 0;
  std::uint32_t next_block_ = 0;
};

// Not-ready aware solve on the sealed summary.
std::optional<ClusteringResult> solve_kmeans(const CoresetSummary& summary, std::size_t k,
                                             std::size_t restarts, std::uint64_t seed);
std::optional<ClusteringResult> solve_kmedian(const CoresetSummary& summary, std::size_t k,
                                              std::size_t restarts, std::uint64_t seed);

}  // namespace axs
