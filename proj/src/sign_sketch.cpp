#include "axs/sign_sketch.hpp"

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>

namespace axs {

SignSketch::SignSketch(std::uint64_t seed, std::size_t rows, std::size_t width,
                       std::uint64_t prime_modulus, MemoryLedger* ledger)
    : rows_(rows), width_(width), prime_(prime_modulus), ledger_(ledger) {
  if (rows == 0) throw std::invalid_argument("sketch needs at least one row");
  if (width == 0) throw std::invalid_argument("sketch width must be positive");
  inv_sqrt_rows_ = 1.0 / std::sqrt(static_cast<double>(rows));
  row_hashes_.reserve(rows);
  std::uint64_t state = seed;
  // Coefficients come straight off the splitmix stream; constructing a full
  // generator per row would dominate spawn time for large sketches.
  if (!is_prime(prime_modulus) || prime_modulus >= (std::uint64_t{1} << 32)) {
    throw std::invalid_argument("sketch modulus must be a prime below 2^32");
  }
  for (std::size_t r = 0; r < rows; ++r) {
    std::array<std::uint64_t, 4> coef;
    for (auto& c : coef) c = splitmix64(state) % prime_modulus;
    row_hashes_.push_back(FourWiseHash::from_trusted(coef, prime_modulus));
  }
  image_.assign(rows * width, 0.0);
  if (ledger_) ledger_->allocate(memory_words());
}

SignSketch::SignSketch(const SignSketch& other)
    : rows_(other.rows_),
      width_(other.width_),
      prime_(other.prime_),
      items_seen_(other.items_seen_),
      inv_sqrt_rows_(other.inv_sqrt_rows_),
      row_hashes_(other.row_hashes_),
      image_(other.image_),
      ledger_(other.ledger_) {
  if (ledger_) ledger_->allocate(memory_words());
}

SignSketch::SignSketch(SignSketch&& other) noexcept
    : rows_(other.rows_),
      width_(other.width_),
      prime_(other.prime_),
      items_seen_(other.items_seen_),
      inv_sqrt_rows_(other.inv_sqrt_rows_),
      row_hashes_(std::move(other.row_hashes_)),
      image_(std::move(other.image_)),
      ledger_(other.ledger_) {
  other.ledger_ = nullptr;
  other.rows_ = 0;
}

SignSketch& SignSketch::operator=(SignSketch&& other) noexcept {
  if (this != &other) {
    if (ledger_ && rows_ > 0) ledger_->release(memory_words());
    rows_ = other.rows_;
    width_ = other.width_;
    prime_ = other.prime_;
    items_seen_ = other.items_seen_;
    inv_sqrt_rows_ = other.inv_sqrt_rows_;
    row_hashes_ = std::move(other.row_hashes_);
    image_ = std::move(other.image_);
    ledger_ = other.ledger_;
    other.ledger_ = nullptr;
    other.rows_ = 0;
  }
  return *this;
}

SignSketch::~SignSketch() {
  if (ledger_ && rows_ > 0) ledger_->release(memory_words());
}

void SignSketch::update(std::uint64_t index, double weight) {
  if (width_ != 1) throw std::logic_error("update() requires a vector-image sketch");
  if (!std::isfinite(weight)) throw std::invalid_argument("non-finite update weight");
  if (index >= prime_) throw std::out_of_range("update index not below hash modulus");
  const double scaled = weight * inv_sqrt_rows_;
  for (std::size_t r = 0; r < rows_; ++r) {
    image_[r] += row_hashes_[r].sign_at_unchecked(index) * scaled;
  }
  if (weight == 1.0) ++items_seen_;
}

void SignSketch::update_batch(std::span<const std::uint64_t> indices,
                              std::span<const double> weights) {
  if (width_ != 1) throw std::logic_error("update_batch() requires a vector-image sketch");
  if (indices.size() != weights.size()) {
    throw std::invalid_argument("index and weight spans differ in length");
  }
  for (std::size_t j = 0; j < indices.size(); ++j) {
    if (!std::isfinite(weights[j])) throw std::invalid_argument("non-finite update weight");
    if (indices[j] >= prime_) throw std::out_of_range("update index not below hash modulus");
  }
  for (std::size_t r = 0; r < rows_; ++r) {
    const FourWiseHash& h = row_hashes_[r];
    double acc = 0.0;
    for (std::size_t j = 0; j < indices.size(); ++j) {
      acc += h.sign_at_unchecked(indices[j]) * weights[j];
    }
    image_[r] += acc * inv_sqrt_rows_;
  }
  for (double w : weights) {
    if (w == 1.0) ++items_seen_;
  }
}

void SignSketch::update_row(std::uint64_t row_index, std::span<const double> row) {
  if (row.size() != width_) {
    throw std::invalid_argument("row width " + std::to_string(row.size()) +
                                " does not match sketch width " + std::to_string(width_));
  }
  for (double v : row) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite row entry");
  }
  if (row_index >= prime_) throw std::out_of_range("row index not below hash modulus");
  for (std::size_t r = 0; r < rows_; ++r) {
    const double s = row_hashes_[r].sign_at_unchecked(row_index) * inv_sqrt_rows_;
    double* out = image_.data() + r * width_;
    for (std::size_t c = 0; c < width_; ++c) out[c] += s * row[c];
  }
}

double SignSketch::norm_sq() const {
  if (width_ != 1) throw std::logic_error("norm_sq() requires a vector-image sketch");
  double acc = 0.0;
  for (double v : image_) acc += v * v;
  return acc;
}

}  // namespace axs
