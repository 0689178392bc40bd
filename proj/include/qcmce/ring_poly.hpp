#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qcmce {

/// Element of R_p = F2[x]/(x^p - 1), bit-packed with the coefficient of x^i at
/// bit i. Doubles as the first row of a p x p binary circulant matrix.
class RingPoly {
 public:
  RingPoly() = default;
  explicit RingPoly(std::size_t p);

  static RingPoly zero(std::size_t p) { return RingPoly(p); }
  static RingPoly one(std::size_t p) { return monomial(p, 0); }
  /// x^(e mod p)
  static RingPoly monomial(std::size_t p, std::size_t e);
  /// Exponents are reduced mod p; repeated exponents cancel.
  static RingPoly from_exponents(std::size_t p, std::span<const std::size_t> exponents);
  /// Reads p bits starting at bit `offset` of a packed word array.
  static RingPoly from_bits(std::size_t p, std::span<const std::uint64_t> words,
                            std::size_t offset = 0);

  std::size_t modulus() const noexcept { return p_; }
  bool coeff(std::size_t i) const noexcept { return (words_[i / 64] >> (i % 64)) & 1U; }
  void set(std::size_t i, bool value);
  void flip(std::size_t i) { words_[i / 64] ^= std::uint64_t{1} << (i % 64); }

  std::size_t weight() const noexcept;
  bool is_zero() const noexcept;
  /// Value at x = 1, i.e. weight parity.
  bool eval_at_one() const noexcept { return (weight() & 1U) != 0; }
  std::vector<std::size_t> support() const;
  /// Smallest exponent in the support; p for the zero polynomial.
  std::size_t min_exponent() const noexcept;

  /// x^k * this (negative k allowed).
  RingPoly shifted(long k) const;

  std::span<const std::uint64_t> words() const noexcept { return words_; }

  RingPoly& operator+=(const RingPoly& other);
  friend RingPoly operator+(RingPoly a, const RingPoly& b) { return a += b; }
  friend RingPoly operator*(const RingPoly& a, const RingPoly& b);
  friend bool operator==(const RingPoly& a, const RingPoly& b) = default;

 private:
  std::size_t p_ = 0;
  std::vector<std::uint64_t> words_;
};

RingPoly ring_mul(const RingPoly& u, const RingPoly& v);
/// Inverse modulo x^p - 1 by extended Euclid; throws NotInvertible carrying the gcd.
RingPoly ring_inv(const RingPoly& u);
bool is_invertible(const RingPoly& u);
/// Coefficient-wise product; support is the intersection of supports.
RingPoly star(const RingPoly& u, const RingPoly& v);
/// x^p * m(1/x): the first column of the circulant whose first row is m.
RingPoly reciprocal(const RingPoly& m);

/// Exponent-list view of a RingPoly.
struct Support {
  std::size_t p = 0;
  std::vector<std::size_t> exponents;  // strictly increasing, each < p

  static Support of(const RingPoly& v) { return {v.modulus(), v.support()}; }
  RingPoly to_poly() const { return RingPoly::from_exponents(p, exponents); }
  friend bool operator==(const Support&, const Support&) = default;
};

/// "[ e1, e2, ..., ek ]"
std::string format_support(const RingPoly& v);
/// Parses "[ e1, e2, ... ]" with arbitrary whitespace. Exponents must be strictly
/// increasing and below p.
RingPoly parse_support(std::string_view text, std::size_t p);

}  // namespace qcmce
