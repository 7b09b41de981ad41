#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "axs/hashing.hpp"
#include "axs/memory_ledger.hpp"

namespace axs {

// A seeded random-sign projection S = R / sqrt(m) applied incrementally to a
// streamed vector or row-streamed matrix. R is never materialized: each of
// the m rows is a FourWiseHash descriptor evaluated on demand. The image is
// kept rescaled by 1/sqrt(m) so images from different sketches are directly
// comparable.
class SignSketch {
 public:
  // width == 1 gives a vector sketch (image m x 1), width > 1 a matrix
  // sketch (image m x width). rows must be >= 1.
  SignSketch(std::uint64_t seed, std::size_t rows, std::size_t width = 1,
             std::uint64_t prime_modulus = kMersenne31, MemoryLedger* ledger = nullptr);

  SignSketch(const SignSketch& other);
  SignSketch(SignSketch&& other) noexcept;
  SignSketch& operator=(const SignSketch&) = delete;
  SignSketch& operator=(SignSketch&& other) noexcept;
  ~SignSketch();

  // S * (x + weight * e_index), vector sketches only.
  // Throws std::invalid_argument on non-finite weight, std::logic_error on a
  // matrix-image sketch, std::out_of_range when index >= p.
  void update(std::uint64_t index, double weight);

  // Same effect as calling update() per entry, but makes a single pass over
  // the rows; the batched form keeps large flushes memory-bound instead of
  // re-streaming the hash table once per item.
  void update_batch(std::span<const std::uint64_t> indices, std::span<const double> weights);

  // Adds sign(r, row_index) * row / sqrt(m) to every image row r, ascending.
  // Throws std::invalid_argument on width mismatch or non-finite entries.
  void update_row(std::uint64_t row_index, std::span<const double> row);

  // Squared Euclidean length of the image; vector sketches only.
  double norm_sq() const;

  int sign_at(std::size_t row, std::uint64_t index) const {
    return row_hashes_.at(row).sign_at(index);
  }

  std::size_t rows() const { return rows_; }
  std::size_t width() const { return width_; }
  std::uint64_t items_seen() const { return items_seen_; }
  std::uint64_t prime_modulus() const { return prime_; }

  // Row-major m x width image.
  const std::vector<double>& image() const { return image_; }

  // m * width image words plus 5 descriptor words per row (4 coefficients
  // and a seed; the modulus is shared).
  std::uint64_t memory_words() const {
    return static_cast<std::uint64_t>(rows_) * width_ + 5 * static_cast<std::uint64_t>(rows_);
  }

 private:
  std::size_t rows_ = 0;
  std::size_t width_ = 1;
  std::uint64_t prime_ = kMersenne31;
  std::uint64_t items_seen_ = 0;
  double inv_sqrt_rows_ = 0.0;
  std::vector<FourWiseHash> row_hashes_;
  std::vector<double> image_;
  MemoryLedger* ledger_ = nullptr;
};

}  // namespace axs
