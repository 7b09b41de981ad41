#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <span>
#include <vector>

#include "axs/memory_ledger.hpp"
#include "axs/sign_sketch.hpp"

namespace axs {

enum class SketchMode { regression, subspace, matmul };

// Row budget schedule for the per-block sign sketches S = diag(S_1,...,S_l).
// Block i covers 2^i * n0 stream rows; eps_i = eps0 / max(1, i) and
// delta_i = delta / (2 max(1, i)^2). The m_i formula depends on the mode:
//   regression:  ceil(C d i / eps0 * ln(1 / delta_i))
//   subspace:    ceil(C d (i / eps0)^2 * ln(1 / delta))
//   matmul:      ceil(C (i / eps0)^(2 alpha) * ln(d d' / delta_i))
// fixed_precision pins every block at epsilon_fixed instead:
//   ceil(C / epsilon_fixed^2 * ln(d d' / delta_i)).
struct SketchSchedule {
  SketchMode mode = SketchMode::regression;
  double epsilon0 = 0.5;
  double delta = 0.1;
  double alpha = 0.5;  // matmul only
  std::size_t d = 1;
  std::size_t d_prime = 1;
  double C = 2.0;
  std::uint64_t n0 = 64;
  bool fixed_precision = false;
  double epsilon_fixed = 0.25;

  std::size_t block_rows(std::uint32_t i) const;
  std::uint64_t block_capacity(std::uint32_t i) const;  // 2^i * n0
  double epsilon_i(std::uint32_t i) const;
  double delta_i(std::uint32_t i) const;

  bool operator==(const SketchSchedule&) const = default;
};

struct RegressionSolution {
  Eigen::VectorXd coefficients;
  double sketched_residual = 0.0;
  bool rank_deficient = false;
};

// Streamed image of (SA, Sb) under the block-diagonal sign sketch. Each
// incoming row lands in the current block's SignSketch at its within-block
// index; sealed blocks are kept so queries are valid at any time, including
// mid-block (a prefix of a block is sketched exactly like that prefix).
class BlockDiagonalSketch {
 public:
  // `cols` is the streamed matrix width (the row-budget formulas always use
  // the schedule's d and d'); sharing a (schedule, seed) pair across two
  // states of different widths yields the same sign matrix S on both.
  BlockDiagonalSketch(SketchSchedule schedule, std::uint64_t seed, std::size_t cols,
                      bool with_target, MemoryLedger* ledger = nullptr);

  // Throws std::invalid_argument on width mismatch or non-finite entries.
  void ingest_row(std::span<const double> a_row, double b_val = 0.0);

  // Stacked sketch image, sealed blocks plus the partial current block.
  Eigen::MatrixXd sketched_matrix() const;   // SA, (sum m_i) x cols
  Eigen::VectorXd sketched_target() const;   // Sb
  std::size_t image_rows() const;

  std::uint64_t rows_total() const { return rows_total_; }
  std::uint32_t current_block() const { return static_cast<std::uint32_t>(blocks_.size()) - 1; }
  std::size_t sealed_blocks() const;
  const SketchSchedule& schedule() const { return schedule_; }
  std::uint64_t seed() const { return seed_; }
  std::size_t cols() const { return cols_; }
  bool with_target() const { return with_target_; }

  // Entry magnitude guard |entry| <= guard_scale * n^guard_exponent; set
  // before streaming, inspect after.
  void set_entry_guard(double scale, double exponent) {
    guard_scale_ = scale;
    guard_exponent_ = exponent;
  }
  bool entry_guard_violated() const { return guard_violated_; }

  std::uint64_t memory_words() const;

  // Block introspection for the dense block-diagonal oracle in tests.
  struct BlockInfo {
    std::uint32_t index;
    std::uint64_t capacity;
    std::uint64_t filled;
    std::size_t sketch_rows;
  };
  std::vector<BlockInfo> blocks_info() const;
  int block_sign(std::uint32_t block, std::size_t sketch_row, std::uint64_t within_row) const;

 private:
  struct Block {
    SignSketch sketch;
    std::uint64_t capacity;
    std::uint64_t filled = 0;
  };

  void open_block(std::uint32_t index);

  SketchSchedule schedule_;
  std::uint64_t seed_ = 0;
  bool with_target_ = false;
  std::size_t cols_ = 0;   // streamed matrix columns
  std::size_t width_ = 0;  // cols (+1 when with_target)
  std::vector<Block> blocks_;
  std::uint64_t rows_total_ = 0;
  double guard_scale_ = 1e6;
  double guard_exponent_ = 1.0;
  bool guard_violated_ = false;
  MemoryLedger* ledger_ = nullptr;
  std::vector<double> row_buffer_;
};

// Minimum-norm minimizer of ||SAx - Sb|| via a rank-revealing complete
// orthogonal decomposition; flags rank deficiency instead of failing.
// Throws std::logic_error when the sketch has no target, fewer image rows
// than d, or no sealed block yet.
RegressionSolution solve_regression(const BlockDiagonalSketch& state);

// (SA)^T (SB); both states must share schedule, seed and row count.
Eigen::MatrixXd sketched_matmul(const BlockDiagonalSketch& a, const BlockDiagonalSketch& b);

// max over directions of |  ||SAx||^2 / ||Ax||^2 - 1 |, restricted to the
// row space of A. Diagnostic: A_full must be the exact streamed matrix.
double subspace_distortion(const Eigen::MatrixXd& sketched, const Eigen::MatrixXd& a_full);

double min_singular_value_sq(const Eigen::MatrixXd& a_full);

}  // namespace axs
