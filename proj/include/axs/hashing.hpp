#pragma once

#include <array>
#include <cstdint>

namespace axs {

// Default field modulus for sign hashing: the Mersenne prime 2^31 - 1.
inline constexpr std::uint64_t kMersenne31 = (std::uint64_t{1} << 31) - 1;

// splitmix64 step; used to derive independent per-row and per-block seeds
// from a single base seed.
std::uint64_t splitmix64(std::uint64_t& state);

bool is_prime(std::uint64_t n);

// Degree-3 polynomial hash over F_p mapped to a sign in {-1,+1}.
// Signs at any 4 distinct points are 4-wise independent when the
// coefficients are drawn uniformly; the sign rule (+1 iff 2v < p) has a
// marginal bias of 1/p, which is negligible at p = 2^31 - 1.
class FourWiseHash {
 public:
  // Draws the four coefficients deterministically from `seed`.
  // Throws std::invalid_argument if `prime_modulus` is not prime or >= 2^32.
  FourWiseHash(std::uint64_t seed, std::uint64_t prime_modulus);

  // Exact coefficient control, used by the enumeration tests.
  static FourWiseHash from_coefficients(const std::array<std::uint64_t, 4>& coefficients,
                                        std::uint64_t prime_modulus);

  // Caller guarantees the modulus is a valid prime and coefficients are
  // reduced; lets bulk row construction skip per-row validation.
  static FourWiseHash from_trusted(const std::array<std::uint64_t, 4>& coefficients,
                                   std::uint64_t prime_modulus) {
    FourWiseHash h;
    h.p_ = prime_modulus;
    h.coef_ = coefficients;
    return h;
  }

  // Throws std::out_of_range if index >= p.
  int sign_at(std::uint64_t index) const {
    check_index(index);
    return sign_at_unchecked(index);
  }

  int sign_at_unchecked(std::uint64_t index) const {
    const std::uint64_t v = poly_eval(index);
    return (2 * v < p_) ? 1 : -1;
  }

  std::uint64_t poly_eval(std::uint64_t x) const;

  std::uint64_t prime_modulus() const { return p_; }
  std::uint64_t seed() const { return seed_; }
  const std::array<std::uint64_t, 4>& coefficients() const { return coef_; }

 private:
  FourWiseHash() = default;
  void check_index(std::uint64_t index) const;

  std::uint64_t p_ = 0;
  std::array<std::uint64_t, 4> coef_{};  // c0 + c1 x + c2 x^2 + c3 x^3 mod p
  std::uint64_t seed_ = 0;
};

}  // namespace axs
