#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace qcmce::gf2x {

/// Unreduced polynomial in F2[x], bit i = coefficient of x^i.
/// Internal helper for Euclid (ring inversion) and BCH generator construction;
/// the trailing words are kept normalised (no zero high words).
class Poly {
 public:
  Poly() = default;
  static Poly from_mask(std::uint64_t mask);
  static Poly monomial(std::size_t e);
  static Poly from_words(std::vector<std::uint64_t> words);

  bool is_zero() const noexcept { return words_.empty(); }
  /// Degree; -1 for the zero polynomial.
  long degree() const noexcept;
  bool coeff(std::size_t i) const noexcept;
  void set(std::size_t i, bool value);
  std::size_t weight() const noexcept;
  std::span<const std::uint64_t> words() const noexcept { return words_; }

  /// this ^= other * x^shift
  void add_shifted(const Poly& other, std::size_t shift);

  Poly operator+(const Poly& other) const;
  Poly operator*(const Poly& other) const;
  bool operator==(const Poly& other) const = default;

 private:
  void trim();
  std::vector<std::uint64_t> words_;
};

struct DivMod {
  Poly quotient;
  Poly remainder;
};

DivMod divmod(const Poly& a, const Poly& b);
Poly gcd(Poly a, Poly b);

/// x^n + 1
Poly x_pow_n_minus_one(std::size_t n);

}  // namespace qcmce::gf2x
