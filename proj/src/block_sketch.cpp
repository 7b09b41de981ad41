#include "axs/block_sketch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "axs/hashing.hpp"

namespace axs {

double SketchSchedule::epsilon_i(std::uint32_t i) const {
  if (fixed_precision) return epsilon_fixed;
  return epsilon0 / static_cast<double>(std::max<std::uint32_t>(1, i));
}

double SketchSchedule::delta_i(std::uint32_t i) const {
  const double eff = static_cast<double>(std::max<std::uint32_t>(1, i));
  return delta / (2.0 * eff * eff);
}

std::uint64_t SketchSchedule::block_capacity(std::uint32_t i) const {
  if (i >= 63) throw std::overflow_error("block capacity saturates the word size");
  return n0 << i;
}

std::size_t SketchSchedule::block_rows(std::uint32_t i) const {
  const double eff = static_cast<double>(std::max<std::uint32_t>(1, i));
  const double dd = static_cast<double>(d);
  double rows = 0.0;
  if (fixed_precision) {
    rows = C / (epsilon_fixed * epsilon_fixed) *
           std::log(dd * static_cast<double>(d_prime) / delta_i(i));
  } else {
    switch (mode) {
      case SketchMode::regression:
        rows = C * dd * eff / epsilon0 * std::log(1.0 / delta_i(i));
        break;
      case SketchMode::subspace:
        rows = C * dd * (eff / epsilon0) * (eff / epsilon0) * std::log(1.0 / delta);
        break;
      case SketchMode::matmul:
        rows = C * std::pow(eff / epsilon0, 2.0 * alpha) *
               std::log(dd * static_cast<double>(d_prime) / delta_i(i));
        break;
    }
  }
  return static_cast<std::size_t>(std::max(1.0, std::ceil(rows)));
}

BlockDiagonalSketch::BlockDiagonalSketch(SketchSchedule schedule, std::uint64_t seed,
                                         std::size_t cols, bool with_target,
                                         MemoryLedger* ledger)
    : schedule_(schedule), seed_(seed), with_target_(with_target), cols_(cols),
      ledger_(ledger) {
  if (schedule_.d == 0) throw std::invalid_argument("schedule needs a positive column count");
  if (schedule_.n0 == 0) throw std::invalid_argument("schedule needs a positive base block");
  if (cols_ == 0) throw std::invalid_argument("streamed width must be positive");
  width_ = cols_ + (with_target_ ? 1 : 0);
  row_buffer_.resize(width_);
  open_block(0);
}

void BlockDiagonalSketch::open_block(std::uint32_t index) {
  // Block seeds depend only on (state seed, block index) so two states with
  // the same seed share sign rows regardless of width.
  std::uint64_t state = seed_ + 0x2c6fe96eu * (static_cast<std::uint64_t>(index) + 1);
  blocks_.push_back(Block{
      SignSketch(splitmix64(state), schedule_.block_rows(index), width_, kMersenne31, ledger_),
      schedule_.block_capacity(index)});
}

void BlockDiagonalSketch::ingest_row(std::span<const double> a_row, double b_val) {
  if (a_row.size() != cols_) {
    throw std::invalid_argument("row width does not match sketch column count");
  }
  Block* blk = &blocks_.back();
  if (blk->filled == blk->capacity) {
    open_block(static_cast<std::uint32_t>(blocks_.size()));
    blk = &blocks_.back();
  }
  const double guard = guard_scale_ *
      std::pow(static_cast<double>(rows_total_ + 1), guard_exponent_);
  for (double v : a_row) {
    if (std::abs(v) > guard) guard_violated_ = true;
  }
  if (with_target_ && std::abs(b_val) > guard) guard_violated_ = true;

  std::copy(a_row.begin(), a_row.end(), row_buffer_.begin());
  if (with_target_) row_buffer_.back() = b_val;
  blk->sketch.update_row(blk->filled, row_buffer_);
  ++blk->filled;
  ++rows_total_;
}

std::size_t BlockDiagonalSketch::image_rows() const {
  std::size_t acc = 0;
  for (const auto& b : blocks_) acc += b.sketch.rows();
  return acc;
}

std::size_t BlockDiagonalSketch::sealed_blocks() const {
  std::size_t acc = 0;
  for (const auto& b : blocks_) {
    if (b.filled == b.capacity) ++acc;
  }
  return acc;
}

Eigen::MatrixXd BlockDiagonalSketch::sketched_matrix() const {
  Eigen::MatrixXd out(image_rows(), cols_);
  std::size_t r0 = 0;
  for (const auto& b : blocks_) {
    const auto& img = b.sketch.image();
    const std::size_t w = b.sketch.width();
    for (std::size_t r = 0; r < b.sketch.rows(); ++r) {
      for (std::size_t c = 0; c < cols_; ++c) out(r0 + r, c) = img[r * w + c];
    }
    r0 += b.sketch.rows();
  }
  return out;
}

Eigen::VectorXd BlockDiagonalSketch::sketched_target() const {
  if (!with_target_) throw std::logic_error("sketch carries no target column");
  Eigen::VectorXd out(image_rows());
  std::size_t r0 = 0;
  for (const auto& b : blocks_) {
    const auto& img = b.sketch.image();
    const std::size_t w = b.sketch.width();
    for (std::size_t r = 0; r < b.sketch.rows(); ++r) out(r0 + r) = img[r * w + (w - 1)];
    r0 += b.sketch.rows();
  }
  return out;
}

std::uint64_t BlockDiagonalSketch::memory_words() const {
  std::uint64_t acc = 0;
  for (const auto& b : blocks_) acc += b.sketch.memory_words();
  return acc;
}

std::vector<BlockDiagonalSketch::BlockInfo> BlockDiagonalSketch::blocks_info() const {
  std::vector<BlockInfo> out;
  out.reserve(blocks_.size());
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    out.push_back(BlockInfo{static_cast<std::uint32_t>(i), blocks_[i].capacity,
                            blocks_[i].filled, blocks_[i].sketch.rows()});
  }
  return out;
}

int BlockDiagonalSketch::block_sign(std::uint32_t block, std::size_t sketch_row,
                                    std::uint64_t within_row) const {
  return blocks_.at(block).sketch.sign_at(sketch_row, within_row);
}

RegressionSolution solve_regression(const BlockDiagonalSketch& state) {
  if (!state.with_target()) throw std::logic_error("regression needs a target column");
  if (state.sealed_blocks() == 0) throw std::logic_error("regression needs a sealed block");
  const Eigen::MatrixXd sa = state.sketched_matrix();
  const Eigen::VectorXd sb = state.sketched_target();
  if (static_cast<std::size_t>(sa.rows()) < state.cols()) {
    throw std::logic_error("sketch has fewer rows than unknowns");
  }
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(sa);
  RegressionSolution sol;
  sol.coefficients = cod.solve(sb);
  sol.rank_deficient = cod.rank() < static_cast<Eigen::Index>(state.cols());
  sol.sketched_residual = (sa * sol.coefficients - sb).norm();
  return sol;
}

Eigen::MatrixXd sketched_matmul(const BlockDiagonalSketch& a, const BlockDiagonalSketch& b) {
  if (!(a.schedule() == b.schedule()) || a.seed() != b.seed()) {
    throw std::logic_error("matmul states must share schedule and seeds");
  }
  if (a.rows_total() != b.rows_total()) {
    throw std::logic_error("matmul states must cover the same stream rows");
  }
  const Eigen::MatrixXd sa = a.sketched_matrix();
  const Eigen::MatrixXd sb = b.sketched_matrix();
  return sa.transpose() * sb;
}

double subspace_distortion(const Eigen::MatrixXd& sketched, const Eigen::MatrixXd& a_full) {
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a_full, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) <= 0.0) return 0.0;
  const double tol = sv(0) * 1e-12;
  Eigen::Index rank = 0;
  while (rank < sv.size() && sv(rank) > tol) ++rank;
  if (rank == 0) return 0.0;
  // Columns of SA * V_r * Sigma_r^{-1} approximate an orthonormal basis of
  // the sketched row space; its singular values carry the distortion.
  Eigen::MatrixXd m = sketched * svd.matrixV().leftCols(rank);
  for (Eigen::Index c = 0; c < rank; ++c) m.col(c) /= sv(c);
  Eigen::BDCSVD<Eigen::MatrixXd> msvd(m);
  const auto& ms = msvd.singularValues();
  const double hi = ms(0) * ms(0) - 1.0;
  const double lo = 1.0 - ms(ms.size() - 1) * ms(ms.size() - 1);
  return std::max(hi, lo);
}

double min_singular_value_sq(const Eigen::MatrixXd& a_full) {
  if (a_full.rows() < a_full.cols()) {
    throw std::invalid_argument("need at least as many rows as columns");
  }
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a_full);
  const double s = svd.singularValues()(a_full.cols() - 1);
  return s * s;
}

}  // namespace axs
