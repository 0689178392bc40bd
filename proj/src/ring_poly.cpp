#include "qcmce/ring_poly.hpp"

#include <cctype>
#include <sstream>

#include "bits.hpp"
#include "qcmce/error.hpp"
#include "qcmce/gf2x.hpp"

namespace qcmce {

namespace {

void require_same_modulus(const RingPoly& a, const RingPoly& b) {
  if (a.modulus() != b.modulus()) throw ModulusMismatch(a.modulus(), b.modulus());
}

// Folds a 2p-bit unreduced product back into p bits (x^p = 1).
RingPoly fold(std::size_t p, std::span<const std::uint64_t> wide) {
  RingPoly r = RingPoly::from_bits(p, wide, 0);
  auto hi = RingPoly::from_bits(p, wide, p);
  r += hi;
  return r;
}

// acc ^= src * x^shift over an unbounded buffer.
void add_shifted(std::span<std::uint64_t> acc, std::span<const std::uint64_t> src,
                 std::size_t shift) {
  const std::size_t wo = shift / 64;
  const unsigned bo = shift % 64;
  for (std::size_t i = 0; i < src.size(); ++i) {
    acc[i + wo] ^= src[i] << bo;
    if (bo != 0) acc[i + wo + 1] ^= src[i] >> (64 - bo);
  }
}

}  // namespace

RingPoly::RingPoly(std::size_t p) : p_(p), words_(bits::words_for(p), 0) {
  if (p == 0) throw OutOfRange("RingPoly: modulus must be positive");
}

RingPoly RingPoly::monomial(std::size_t p, std::size_t e) {
  RingPoly r(p);
  r.set(e % p, true);
  return r;
}

RingPoly RingPoly::from_exponents(std::size_t p, std::span<const std::size_t> exponents) {
  RingPoly r(p);
  for (auto e : exponents) r.flip(e % p);
  return r;
}

RingPoly RingPoly::from_bits(std::size_t p, std::span<const std::uint64_t> words,
                             std::size_t offset) {
  RingPoly r(p);
  bits::xor_range(r.words_, 0, words, offset, p);
  return r;
}

void RingPoly::set(std::size_t i, bool value) {
  const std::uint64_t bit = std::uint64_t{1} << (i % 64);
  if (value) {
    words_[i / 64] |= bit;
  } else {
    words_[i / 64] &= ~bit;
  }
}

std::size_t RingPoly::weight() const noexcept { return bits::popcount(words_); }

bool RingPoly::is_zero() const noexcept {
  for (auto w : words_) {
    if (w != 0) return false;
  }
  return true;
}

std::vector<std::size_t> RingPoly::support() const {
  std::vector<std::size_t> out;
  bits::for_each_set_bit(words_, [&](std::size_t i) { out.push_back(i); });
  return out;
}

std::size_t RingPoly::min_exponent() const noexcept {
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if (words_[w] != 0) return 64 * w + static_cast<std::size_t>(std::countr_zero(words_[w]));
  }
  return p_;
}

RingPoly RingPoly::shifted(long k) const {
  const auto p = static_cast<long>(p_);
  const auto s = static_cast<std::size_t>(((k % p) + p) % p);
  if (s == 0) return *this;
  // Rotate left by s: low p-s bits move up, high s bits wrap to the bottom.
  RingPoly r(p_);
  bits::xor_range(r.words_, s, words_, 0, p_ - s);
  bits::xor_range(r.words_, 0, words_, p_ - s, s);
  return r;
}

RingPoly& RingPoly::operator+=(const RingPoly& other) {
  require_same_modulus(*this, other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
  return *this;
}

RingPoly operator*(const RingPoly& a, const RingPoly& b) {
  require_same_modulus(a, b);
  const std::size_t p = a.p_;
  const bool a_sparser = a.weight() <= b.weight();
  const RingPoly& sparse = a_sparser ? a : b;
  const RingPoly& dense = a_sparser ? b : a;
  std::vector<std::uint64_t> acc(bits::words_for(2 * p) + 1, 0);
  bits::for_each_set_bit(sparse.words_, [&](std::size_t e) { add_shifted(acc, dense.words_, e); });
  return fold(p, acc);
}

RingPoly ring_mul(const RingPoly& u, const RingPoly& v) { return u * v; }

RingPoly ring_inv(const RingPoly& u) {
  const std::size_t p = u.modulus();
  // Invariant: s_i * u == r_i (mod x^p - 1).
  gf2x::Poly r0 = gf2x::x_pow_n_minus_one(p);
  gf2x::Poly r1 = gf2x::Poly::from_words({u.words().begin(), u.words().end()});
  gf2x::Poly s0;
  gf2x::Poly s1 = gf2x::Poly::monomial(0);
  while (!r1.is_zero()) {
    const long d1 = r1.degree();
    for (long d0 = r0.degree(); d0 >= d1; d0 = r0.degree()) {
      const auto shift = static_cast<std::size_t>(d0 - d1);
      r0.add_shifted(r1, shift);
      s0.add_shifted(s1, shift);
    }
    std::swap(r0, r1);
    std::swap(s0, s1);
  }
  if (r0.degree() != 0) {
    std::vector<std::size_t> g;
    for (long i = 0; i <= r0.degree(); ++i) {
      if (r0.coeff(static_cast<std::size_t>(i))) g.push_back(static_cast<std::size_t>(i));
    }
    throw NotInvertible(std::move(g));
  }
  // deg(s0) < p, but reduce anyway.
  RingPoly inv(p);
  for (long i = 0; i <= s0.degree(); ++i) {
    if (s0.coeff(static_cast<std::size_t>(i))) inv.flip(static_cast<std::size_t>(i) % p);
  }
  return inv;
}

bool is_invertible(const RingPoly& u) {
  if (!u.eval_at_one()) return false;  // x - 1 divides every even-weight polynomial
  const gf2x::Poly g = gf2x::gcd(gf2x::x_pow_n_minus_one(u.modulus()),
                                 gf2x::Poly::from_words({u.words().begin(), u.words().end()}));
  return g.degree() == 0;
}

RingPoly star(const RingPoly& u, const RingPoly& v) {
  require_same_modulus(u, v);
  std::vector<std::uint64_t> w(u.words().begin(), u.words().end());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] &= v.words()[i];
  return RingPoly::from_bits(u.modulus(), w);
}

RingPoly reciprocal(const RingPoly& m) {
  const std::size_t p = m.modulus();
  RingPoly r(p);
  bits::for_each_set_bit(m.words(), [&](std::size_t i) { r.set((p - i) % p, true); });
  return r;
}

std::string format_support(const RingPoly& v) {
  std::ostringstream out;
  out << "[";
  bool first = true;
  for (auto e : v.support()) {
    out << (first ? " " : ", ") << e;
    first = false;
  }
  out << " ]";
  return out.str();
}

RingPoly parse_support(std::string_view text, std::size_t p) {
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  auto fail = [&](const std::string& why) -> ParseError {
    return ParseError("exponent list: " + why + " in '" + std::string(text) + "'");
  };
  skip_ws();
  if (i >= text.size() || text[i] != '[') throw fail("expected '['");
  ++i;
  RingPoly r(p);
  bool have_prev = false;
  std::size_t prev = 0;
  skip_ws();
  if (i < text.size() && text[i] == ']') {
    ++i;
  } else {
    for (;;) {
      skip_ws();
      if (i >= text.size() || !std::isdigit(static_cast<unsigned char>(text[i]))) {
        throw fail("expected exponent");
      }
      std::size_t e = 0;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        e = 10 * e + static_cast<std::size_t>(text[i] - '0');
        if (e >= p) throw fail("exponent out of range");
        ++i;
      }
      if (have_prev && e <= prev) throw fail("exponents not strictly increasing");
      r.set(e, true);
      prev = e;
      have_prev = true;
      skip_ws();
      if (i < text.size() && text[i] == ',') {
        ++i;
        continue;
      }
      if (i < text.size() && text[i] == ']') {
        ++i;
        break;
      }
      throw fail("expected ',' or ']'");
    }
  }
  skip_ws();
  if (i != text.size()) throw fail("trailing characters");
  return r;
}

}  // namespace qcmce
