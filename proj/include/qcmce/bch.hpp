#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "qcmce/bin_matrix.hpp"
#include "qcmce/gf2x.hpp"

namespace qcmce {

/// GF(2^m) with log/antilog tables over a primitive polynomial.
class GaloisField {
 public:
  /// Throws InvalidField unless prim_poly is a primitive polynomial of degree m.
  GaloisField(unsigned m, std::uint32_t prim_poly);

  unsigned ext_degree() const noexcept { return m_; }
  std::uint32_t prim_poly() const noexcept { return prim_poly_; }
  std::uint32_t order() const noexcept { return order_; }  // 2^m - 1

  /// alpha^e, any e >= 0.
  std::uint32_t alpha_pow(std::uint64_t e) const noexcept { return antilog_[e % order_]; }
  /// Discrete log of a nonzero element.
  std::uint32_t log(std::uint32_t a) const { return log_[a]; }
  std::uint32_t mul(std::uint32_t a, std::uint32_t b) const noexcept;

 private:
  unsigned m_;
  std::uint32_t prim_poly_;
  std::uint32_t order_;
  std::vector<std::uint32_t> antilog_;
  std::vector<std::uint32_t> log_;
};

/// "0x..." lowercase.
std::string format_hex(std::uint32_t mask);
/// Accepts an optional 0x prefix.
std::uint32_t parse_hex(std::string_view text);

/// Whether x has multiplicative order 2^m - 1 modulo `poly` (degree m).
bool is_primitive(std::uint32_t poly, unsigned m);

/// All primitive polynomials of degree m, ascending as bitmasks; 2 <= m <= 16.
std::vector<std::uint32_t> enumerate_primitive_polys(unsigned m);

/// Narrow-sense primitive binary BCH code of length 2^m - 1.
struct BchCode {
  unsigned ext_degree = 0;
  unsigned designed_errors = 0;
  std::uint32_t prim_poly = 0;
  gf2x::Poly generator;
  std::size_t n = 0;
  std::size_t dim = 0;
  /// 2t*m rows (redundant rows kept), n columns.
  BinMatrix parity_check;
};

/// Generator = lcm of the minimal polynomials of alpha, ..., alpha^(2t).
BchCode bch_generator(unsigned m, unsigned t, std::uint32_t prim_poly);

/// Rows j*m .. j*m+m-1 hold the bits of alpha^((j+1)*i), i = 0..n-1.
BinMatrix bch_parity_check(const BchCode& code);

/// Minimal polynomial of alpha^j over F2.
gf2x::Poly minimal_polynomial(const GaloisField& field, std::uint32_t j);

/// Codeword as message(x) * generator(x); message degree < dim.
BitVec bch_encode(const BchCode& code, const gf2x::Poly& message);

}  // namespace qcmce
