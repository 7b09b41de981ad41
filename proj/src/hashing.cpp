#include "axs/hashing.hpp"

#include <random>
#include <stdexcept>
#include <string>

namespace axs {

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  if (n % 2 == 0) return n == 2;
  for (std::uint64_t d = 3; d * d <= n; d += 2) {
    if (n % d == 0) return false;
  }
  return true;
}

namespace {

// x < 2^62; reduce mod 2^31 - 1 by folding.
inline std::uint64_t mersenne31_reduce(std::uint64_t x) {
  x = (x & kMersenne31) + (x >> 31);
  x = (x & kMersenne31) + (x >> 31);
  if (x >= kMersenne31) x -= kMersenne31;
  return x;
}

inline std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  // a, b < p < 2^32, so the product fits in 64 bits.
  const std::uint64_t t = a * b;
  return p == kMersenne31 ? mersenne31_reduce(t) : t % p;
}

inline std::uint64_t addmod(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
  std::uint64_t s = a + b;
  if (s >= p) s -= p;
  return s;
}

void validate_prime(std::uint64_t p) {
  if (p >= (std::uint64_t{1} << 32)) {
    throw std::invalid_argument("hash modulus must be < 2^32, got " + std::to_string(p));
  }
  if (!is_prime(p)) {
    throw std::invalid_argument("hash modulus must be prime, got " + std::to_string(p));
  }
}

}  // namespace

FourWiseHash::FourWiseHash(std::uint64_t seed, std::uint64_t prime_modulus) {
  validate_prime(prime_modulus);
  p_ = prime_modulus;
  seed_ = seed;
  std::mt19937_64 rng(seed);
  for (auto& c : coef_) c = rng() % p_;
}

FourWiseHash FourWiseHash::from_coefficients(const std::array<std::uint64_t, 4>& coefficients,
                                             std::uint64_t prime_modulus) {
  validate_prime(prime_modulus);
  FourWiseHash h;
  h.p_ = prime_modulus;
  for (std::size_t i = 0; i < 4; ++i) {
    if (coefficients[i] >= prime_modulus) {
      throw std::invalid_argument("hash coefficient not in [0, p)");
    }
    h.coef_[i] = coefficients[i];
  }
  return h;
}

std::uint64_t FourWiseHash::poly_eval(std::uint64_t x) const {
  // Horner: ((c3 x + c2) x + c1) x + c0 mod p.
  std::uint64_t v = coef_[3];
  v = addmod(mulmod(v, x, p_), coef_[2], p_);
  v = addmod(mulmod(v, x, p_), coef_[1], p_);
  v = addmod(mulmod(v, x, p_), coef_[0], p_);
  return v;
}

void FourWiseHash::check_index(std::uint64_t index) const {
  if (index >= p_) {
    throw std::out_of_range("hash index " + std::to_string(index) +
                            " not below modulus " + std::to_string(p_));
  }
}

}  // namespace axs
