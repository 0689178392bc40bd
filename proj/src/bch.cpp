#include "qcmce/bch.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <sstream>
#include <string>

#include "qcmce/error.hpp"

namespace qcmce {

namespace {

constexpr unsigned kMinDegree = 2;
constexpr unsigned kMaxDegree = 16;

unsigned poly_degree(std::uint64_t poly) {
  return poly == 0 ? 0 : 63U - static_cast<unsigned>(std::countl_zero(poly));
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t f, unsigned m) {
  std::uint64_t r = 0;
  while (b != 0) {
    if (b & 1U) r ^= a;
    b >>= 1;
    a <<= 1;
    if ((a >> m) & 1U) a ^= f;
  }
  return r;
}

std::uint64_t x_pow_mod(std::uint64_t e, std::uint64_t f, unsigned m) {
  std::uint64_t result = 1;
  std::uint64_t base = 2;  // x
  if (m == 1) base = 0;
  while (e != 0) {
    if (e & 1U) result = mulmod(result, base, f, m);
    base = mulmod(base, base, f, m);
    e >>= 1;
  }
  return result;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d != 0) continue;
    out.push_back(d);
    while (n % d == 0) n /= d;
  }
  if (n > 1) out.push_back(n);
  return out;
}

}  // namespace

std::string format_hex(std::uint32_t mask) {
  std::ostringstream out;
  out << "0x" << std::hex << mask;
  return out.str();
}

std::uint32_t parse_hex(std::string_view text) {
  std::string s(text);
  std::size_t used = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(s, &used, 16);
  } catch (const std::exception&) {
    throw ParseError("invalid hex mask '" + s + "'");
  }
  if (used != s.size() || v > 0xffffffffUL) throw ParseError("invalid hex mask '" + s + "'");
  return static_cast<std::uint32_t>(v);
}

bool is_primitive(std::uint32_t poly, unsigned m) {
  if (m < 1 || m > 31 || poly_degree(poly) != m || (poly & 1U) == 0) return false;
  const std::uint64_t order = (std::uint64_t{1} << m) - 1;
  if (x_pow_mod(order, poly, m) != 1) return false;
  for (auto r : prime_factors(order)) {
    if (x_pow_mod(order / r, poly, m) == 1) return false;
  }
  return true;
}

std::vector<std::uint32_t> enumerate_primitive_polys(unsigned m) {
  if (m < kMinDegree || m > kMaxDegree) {
    throw OutOfRange("enumerate_primitive_polys: degree must be in [2, 16], got " +
                     std::to_string(m));
  }
  std::vector<std::uint32_t> out;
  const std::uint32_t lo = (1U << m) | 1U;
  const std::uint32_t hi = 1U << (m + 1);
  for (std::uint32_t f = lo; f < hi; f += 2) {
    if (is_primitive(f, m)) out.push_back(f);
  }
  return out;
}

GaloisField::GaloisField(unsigned m, std::uint32_t prim_poly)
    : m_(m), prim_poly_(prim_poly), order_((1U << m) - 1) {
  if (m < kMinDegree || m > kMaxDegree || !is_primitive(prim_poly, m)) {
    throw InvalidField("GaloisField: " + format_hex(prim_poly) +
                       " is not a primitive polynomial of degree " + std::to_string(m));
  }
  antilog_.resize(order_);
  log_.assign(std::size_t{order_} + 1, 0);
  std::uint32_t a = 1;
  for (std::uint32_t e = 0; e < order_; ++e) {
    antilog_[e] = a;
    log_[a] = e;
    a <<= 1;
    if ((a >> m) & 1U) a ^= prim_poly;
  }
}

std::uint32_t GaloisField::mul(std::uint32_t a, std::uint32_t b) const noexcept {
  if (a == 0 || b == 0) return 0;
  return antilog_[(log_[a] + log_[b]) % order_];
}

gf2x::Poly minimal_polynomial(const GaloisField& field, std::uint32_t j) {
  const std::uint32_t n = field.order();
  std::set<std::uint32_t> coset;
  for (std::uint32_t e = j % n; coset.insert(e).second; e = (2 * e) % n) {
  }
  // Multiply out prod (x + alpha^e) with GF(2^m) coefficients, low degree first.
  std::vector<std::uint32_t> coeffs{1};
  for (auto e : coset) {
    const std::uint32_t root = field.alpha_pow(e);
    std::vector<std::uint32_t> next(coeffs.size() + 1, 0);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
      next[i + 1] ^= coeffs[i];
      next[i] ^= field.mul(coeffs[i], root);
    }
    coeffs = std::move(next);
  }
  gf2x::Poly out;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] > 1) throw InvalidField("minimal_polynomial: coefficient outside F2");
    if (coeffs[i] == 1) out.set(i, true);
  }
  return out;
}

BchCode bch_generator(unsigned m, unsigned t, std::uint32_t prim_poly) {
  const GaloisField field(m, prim_poly);
  const std::size_t n = field.order();
  if (t == 0 || 2 * std::size_t{t} >= n) {
    throw OutOfRange("bch_generator: need 0 < 2t < 2^m - 1");
  }
  BchCode code;
  code.ext_degree = m;
  code.designed_errors = t;
  code.prim_poly = prim_poly;
  code.n = n;
  std::set<std::uint32_t> seen_cosets;
  gf2x::Poly g = gf2x::Poly::monomial(0);
  for (std::uint32_t j = 1; j <= 2 * t; ++j) {
    // Coset leader = smallest element of the cyclotomic coset of j.
    std::uint32_t leader = j;
    for (std::uint32_t e = (2 * j) % n; e != j; e = (2 * e) % n) leader = std::min(leader, e);
    if (!seen_cosets.insert(leader).second) continue;
    g = g * minimal_polynomial(field, j);
  }
  code.generator = std::move(g);
  code.dim = n - static_cast<std::size_t>(code.generator.degree());
  code.parity_check = bch_parity_check(code);
  return code;
}

BinMatrix bch_parity_check(const BchCode& code) {
  const GaloisField field(code.ext_degree, code.prim_poly);
  const unsigned m = code.ext_degree;
  const std::size_t rows = 2 * std::size_t{code.designed_errors} * m;
  BinMatrix h(rows, code.n);
  for (std::size_t j = 1; j <= 2 * std::size_t{code.designed_errors}; ++j) {
    for (std::size_t i = 0; i < code.n; ++i) {
      const std::uint32_t v = field.alpha_pow(std::uint64_t{j} * i);
      for (unsigned b = 0; b < m; ++b) {
        if ((v >> b) & 1U) h.set((j - 1) * m + b, i, true);
      }
    }
  }
  return h;
}

BitVec bch_encode(const BchCode& code, const gf2x::Poly& message) {
  if (message.degree() >= static_cast<long>(code.dim)) {
    throw OutOfRange("bch_encode: message degree must be below the code dimension");
  }
  const gf2x::Poly c = message * code.generator;
  BitVec out(code.n);
  for (long i = 0; i <= c.degree(); ++i) {
    if (c.coeff(static_cast<std::size_t>(i))) out.set(static_cast<std::size_t>(i), true);
  }
  return out;
}

}  // namespace qcmce
