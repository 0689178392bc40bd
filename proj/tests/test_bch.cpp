#include <doctest.h>

#include <numeric>

#include "qcmce/bch.hpp"
#include "qcmce/error.hpp"
#include "qcmce/rng.hpp"

using namespace qcmce;

namespace {

// Order of x modulo f by repeated multiplication on a plain integer mask.
std::uint32_t order_of_x(std::uint32_t f, unsigned m) {
  std::uint32_t v = 1;
  for (std::uint32_t k = 1; k <= (1U << m); ++k) {
    v <<= 1;
    if (v & (1U << m)) v ^= f;
    if (v == 1) return k;
  }
  return 0;
}

std::size_t euler_phi(std::size_t n) {
  std::size_t count = 0;
  for (std::size_t k = 1; k <= n; ++k) count += std::gcd(k, n) == 1 ? 1 : 0;
  return count;
}

BitVec pad(const gf2x::Poly& g, std::size_t n, std::size_t shift) {
  BitVec v(n);
  for (long i = 0; i <= g.degree(); ++i) {
    if (g.coeff(static_cast<std::size_t>(i))) v.set((static_cast<std::size_t>(i) + shift) % n, true);
  }
  return v;
}

}  // namespace

TEST_SUITE("bch") {

TEST_CASE("enumerate_primitive_polys") {
  CHECK(enumerate_primitive_polys(2) == std::vector<std::uint32_t>{0x7});
  CHECK(enumerate_primitive_polys(11).size() == 176);
  for (unsigned m = 2; m <= 10; ++m) {
    const auto polys = enumerate_primitive_polys(m);
    CHECK(polys.size() == euler_phi((std::size_t{1} << m) - 1) / m);
    CHECK(std::is_sorted(polys.begin(), polys.end()));
  }
  const auto six = enumerate_primitive_polys(6);
  CHECK(six.size() == 6);
  for (auto f : six) CHECK(order_of_x(f, 6) == 63);
  CHECK_THROWS_AS(enumerate_primitive_polys(1), OutOfRange);
  CHECK_THROWS_AS(enumerate_primitive_polys(17), OutOfRange);
}

TEST_CASE("primitivity agrees with the brute-force order") {
  for (std::uint32_t f = 1U << 6; f < (1U << 7); ++f) {
    CHECK(is_primitive(f, 6) == (order_of_x(f, 6) == 63));
  }
}

TEST_CASE("hex text form") {
  CHECK(format_hex(0x43) == "0x43");
  CHECK(parse_hex("0x43") == 0x43);
  CHECK(parse_hex("43") == 0x43);
  CHECK_THROWS_AS(parse_hex("0xg1"), ParseError);
}

TEST_CASE("bch_generator dimensions") {
  const auto ham = bch_generator(4, 1, 0x13);
  CHECK(ham.generator.degree() == 4);
  CHECK(ham.dim == 11);
  CHECK(bch_generator(4, 2, 0x13).dim == 7);
  CHECK(bch_generator(6, 2, 0x43).dim == 51);
  CHECK_THROWS_AS(bch_generator(4, 1, 0x1f), InvalidField);  // x^4+x^3+x^2+x+1 has order 5
}

TEST_CASE("generator divides x^n - 1 for every field polynomial") {
  for (auto f : enumerate_primitive_polys(6)) {
    const auto code = bch_generator(6, 2, f);
    CHECK(gf2x::divmod(gf2x::x_pow_n_minus_one(63), code.generator).remainder.is_zero());
    CHECK(code.dim == 63 - static_cast<std::size_t>(code.generator.degree()));
    CHECK(code.dim >= 63 - 12);
    CHECK(code.parity_check.rows() == 24);
    CHECK(rank(code.parity_check) == 63 - code.dim);
  }
}

TEST_CASE("parity check annihilates codewords") {
  const auto ham = bch_generator(4, 1, 0x13);
  for (std::size_t s = 0; s < 15; ++s) {
    CHECK(mat_vec_mul(ham.parity_check, pad(ham.generator, 15, s)).is_zero());
  }
  const auto code = bch_generator(6, 2, 0x43);
  Rng rng(41);
  for (int trial = 0; trial < 30; ++trial) {
    gf2x::Poly msg;
    for (std::size_t e = 0; e < code.dim; ++e) {
      if (rng.coin()) msg.set(e, true);
    }
    const auto c = bch_encode(code, msg);
    CHECK(c == pad(msg * code.generator, 63, 0));
    CHECK(mat_vec_mul(code.parity_check, c).is_zero());
  }
  const auto two = bch_generator(4, 2, 0x13);
  for (std::size_t i = 0; i < 15; ++i) {
    BitVec e(15);
    e.set(i, true);
    CHECK_FALSE(mat_vec_mul(two.parity_check, e).is_zero());
  }
}

TEST_CASE("minimal polynomials vanish at their root") {
  const GaloisField f(6, 0x43);
  for (std::uint32_t j : {1U, 3U, 9U, 21U}) {
    const auto mp = minimal_polynomial(f, j);
    std::uint32_t acc = 0;
    for (long i = 0; i <= mp.degree(); ++i) {
      if (mp.coeff(static_cast<std::size_t>(i))) acc ^= f.alpha_pow(static_cast<std::uint64_t>(i) * j);
    }
    CHECK(acc == 0);
  }
  CHECK(minimal_polynomial(f, 9).degree() == 3);
  CHECK(minimal_polynomial(f, 21).degree() == 2);
}

}  // TEST_SUITE
