#include <doctest.h>

#include <cmath>
#include <fstream>

#include "qcmce/attack_qcldpc.hpp"
#include "qcmce/probabilities.hpp"
#include "test_util.hpp"

using namespace qcmce;
using qcmce::testing::random_poly;
using qcmce::testing::random_weight_poly;

namespace {

const QcLdpcParams kDesk = QcLdpcParams::preset("desk");

BlockVec view_row(const InverseKeyView& v, std::size_t i) {
  BlockVec row;
  for (std::size_t j = 0; j < v.g.block_cols(); ++j) row.push_back(v.g.at(i, j));
  return row;
}

std::vector<std::size_t> row_weights(const QcLdpcParams& pr, std::size_t i) {
  std::vector<std::size_t> w;
  for (std::size_t j = 0; j + 1 < pr.n0; ++j) w.push_back(s_block_weight(pr, i, j));
  return w;
}

RowFactorization planted_row(const QcLdpcSecret& s, std::size_t i) {
  RowFactorization f;
  f.q = s.q[i];
  for (std::size_t j = 0; j < s.s.block_cols(); ++j) f.s_row.push_back(s.s.at(i, j));
  return canonicalize(f);
}

QcLdpcKeyFile load_fixture() {
  std::ifstream in(QCMCE_TEST_DATA "/ldpc_p4032.key");
  REQUIRE(in.good());
  return read_qcldpc_key(in);
}

}  // namespace

TEST_SUITE("attack-qcldpc") {

TEST_CASE("prefix inverse of the identity hook") {
  Rng rng(1);
  QcLdpcSecret sec;
  for (std::size_t j = 0; j < 4; ++j) sec.h.push_back(random_weight_poly(rng, 101, 5));
  while (!is_invertible(sec.h[3])) sec.h[3] = random_weight_poly(rng, 101, 5);
  sec.s = BlockCirculantMatrix::identity(101, 3);
  sec.q.assign(4, RingPoly::one(101));
  const auto view = invert_public_prefix(public_from_secret(sec));
  CHECK(view.g == BlockCirculantMatrix::identity(101, 3));
  CHECK(view.max_weight == 1);
}

TEST_CASE("singular prefix is a precondition failure") {
  BlockCirculantMatrix g(101, 3, 4);
  CHECK_THROWS_AS(invert_public_prefix(g), AttackFailed);
}

TEST_CASE("example key material satisfies the product identity") {
  const auto fx = load_fixture();
  CHECK(fx.params == QcLdpcParams::preset("paper-ldpc"));
  const auto rep = check_product_identity(fx.params, fx.secret);
  CHECK(rep.all_hold());
  CHECK(rep.max_weight <= 49);
  CHECK(rep.pattern_ok);
  CHECK(fx.secret.s.at(1, 1).weight() == 6);
  CHECK(fx.secret.s.at(2, 0).weight() == 6);
}

TEST_CASE("canonical rotation") {
  const std::size_t a[] = {3, 10, 50};
  const auto q = RingPoly::from_exponents(101, a);
  const auto c = canonical_rotation(q);
  CHECK(c.coeff(0));
  for (long l : {1L, -7L, 55L, 100L}) CHECK(canonical_rotation(q.shifted(l)) == c);
  // Gaps 7, 40, 54 around the circle: the smallest support starts after
  // the largest gap, i.e. at 3 -> {0, 7, 47}.
  const std::size_t e[] = {0, 7, 47};
  CHECK(c == RingPoly::from_exponents(101, e));
  CHECK(canonical_rotation(RingPoly(101)).is_zero());
}

TEST_CASE("shift equivalence canonicalizes to one representative") {
  Rng rng(4);
  RowFactorization f;
  f.q = random_weight_poly(rng, 101, 3);
  for (int j = 0; j < 3; ++j) f.s_row.push_back(random_weight_poly(rng, 101, 3));
  const auto c = canonicalize(f);
  for (long l : {1L, 17L, 99L}) {
    RowFactorization g = f;
    g.q = g.q.shifted(l);
    for (auto& s : g.s_row) s = s.shifted(-l);
    const auto cg = canonicalize(g);
    CHECK(cg.q == c.q);
    CHECK(cg.s_row == c.s_row);
  }
  for (std::size_t j = 0; j < 3; ++j) CHECK(c.q * c.s_row[j] == f.q * f.s_row[j]);
}

TEST_CASE("first strategy on planted rows") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto key = keygen_qcldpc(kDesk, seed);
    const auto view = invert_public_prefix(key.public_g);
    for (std::size_t i = 0; i < 3; ++i) {
      const auto row = view_row(view, i);
      const auto w = row_weights(kDesk, i);
      const auto f = strategy1_factor(row, w, 3);
      CHECK(verify_factorization(f, row, w, 3));
      const auto expect = planted_row(key.secret, i);
      CHECK(f.q == expect.q);
      CHECK(f.s_row == expect.s_row);
      // Cost stays within C(m^2, m) candidates per source block.
      CHECK(f.candidates_tested <= 3 * 84);
    }
  }
}

TEST_CASE("first strategy with monomial q") {
  Rng rng(2);
  const auto q = RingPoly::monomial(7, 4);
  BlockVec s{random_weight_poly(rng, 7, 3), random_weight_poly(rng, 7, 3)};
  BlockVec g{q * s[0], q * s[1]};
  const std::vector<std::size_t> w{3, 3};
  const auto f = strategy1_factor(g, w, 1);
  CHECK(f.q == RingPoly::one(7));
  CHECK(f.s_row[0] == g[0]);
  CHECK(f.candidates_tested == 1);
}

TEST_CASE("first strategy fails when no factor exists") {
  Rng rng(3);
  BlockVec g;
  for (int j = 0; j < 3; ++j) g.push_back(random_weight_poly(rng, 101, 9));
  const std::vector<std::size_t> w{3, 3, 3};
  CHECK_THROWS_AS(strategy1_factor(g, w, 3), StrategyFailure);
}

TEST_CASE("second strategy on planted rows") {
  CHECK(s_row_weight(QcLdpcParams::preset("paper-ldpc"), 0) == 21);
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto key = keygen_qcldpc(kDesk, seed);
    const auto view = invert_public_prefix(key.public_g);
    for (std::size_t i = 0; i < 3; ++i) {
      const auto row = view_row(view, i);
      const auto w = row_weights(kDesk, i);
      const auto f = strategy2_factor(row, w, 3, {2, 10, 5000}, seed * 10 + i);
      CHECK(verify_factorization(f, row, w, 3));
      CHECK(f.q == planted_row(key.secret, i).q);
      CHECK(f.stern_iterations >= 1);
    }
  }
}

TEST_CASE("every shift of the S row lies in the searched code") {
  const auto key = keygen_qcldpc(kDesk, 7);
  const auto view = invert_public_prefix(key.public_g);
  const auto row = view_row(view, 0);
  const RingPoly inv = ring_inv(row[0]);
  for (std::size_t l = 0; l < 101; l += 10) {
    const auto u = key.secret.s.at(0, 0).shifted(static_cast<long>(l));
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(u * (row[j] * inv) == key.secret.s.at(0, j).shifted(static_cast<long>(l)));
    }
  }
}

TEST_CASE("ratio identity for the extraction code") {
  const auto key = keygen_qcldpc(kDesk, 8);
  const auto view = invert_public_prefix(key.public_g);
  BlockVec a;
  for (std::size_t i = 0; i < 3; ++i) {
    RingPoly l(101);
    for (std::size_t j = 0; j < 3; ++j) l += view.g.at(i, j) * key.public_g.at(j, 3);
    a.push_back(l * ring_inv(key.secret.q[i]));
  }
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      if (i == j || !is_invertible(key.secret.h[j])) continue;
      const RingPoly b = reciprocal(a[i] * ring_inv(a[j]));
      CHECK(key.secret.h[j] * b == key.secret.h[i]);
    }
  }
}

TEST_CASE("extraction on planted factorizations") {
  const auto key = keygen_qcldpc(kDesk, 9);
  const auto view = invert_public_prefix(key.public_g);
  std::vector<RowFactorization> rows;
  for (std::size_t i = 0; i < 3; ++i) rows.push_back(planted_row(key.secret, i));
  const auto ex = extract_secret(key.public_g, view, rows, kDesk, {2, 10, 5000}, 3);
  CHECK(verify_recovered_key(key.public_g, ex.secret, kDesk));
  CHECK(same_code_up_to_shift(ex.secret.h, key.secret.h));
  // The recovered key reproduces the public key exactly.
  CHECK(public_from_secret(ex.secret) == key.public_g);
}

TEST_CASE("extraction with wrong factorizations reports partial progress") {
  const auto key = keygen_qcldpc(kDesk, 10);
  const auto other = keygen_qcldpc(kDesk, 11);
  const auto view = invert_public_prefix(key.public_g);
  std::vector<RowFactorization> rows;
  for (std::size_t i = 0; i < 3; ++i) rows.push_back(planted_row(other.secret, i));
  try {
    extract_secret(key.public_g, view, rows, kDesk, {2, 10, 20}, 1);
    FAIL("extraction should not succeed");
  } catch (const ExtractionFailure& e) {
    CHECK(e.stage() == "extract_secret");
    CHECK(e.recovered().q.size() == 3);
  }
}

TEST_CASE("same-code oracle") {
  const auto a = keygen_qcldpc(kDesk, 12);
  const auto b = keygen_qcldpc(kDesk, 13);
  BlockVec shifted;
  for (std::size_t j = 0; j < 4; ++j) shifted.push_back(a.secret.h[j].shifted(static_cast<long>(5 * j + 1)));
  CHECK(same_code_up_to_shift(a.secret.h, shifted));
  CHECK_FALSE(same_code_up_to_shift(a.secret.h, b.secret.h));
}

TEST_CASE("end-to-end recovery and cross-strategy agreement") {
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const auto key = keygen_qcldpc(kDesk, seed);
    QcLdpcAttackOptions o2;
    o2.seed = seed;
    const auto r2 = attack_qcldpc(key.public_g, kDesk, o2);
    CHECK(r2.verified);
    CHECK(same_code_up_to_shift(r2.extraction.secret.h, key.secret.h));
    QcLdpcAttackOptions o1 = o2;
    o1.strategy = 1;
    const auto r1 = attack_qcldpc(key.public_g, kDesk, o1);
    CHECK(r1.extraction.secret.h == r2.extraction.secret.h);
    CHECK(r1.extraction.secret.q == r2.extraction.secret.q);
    CHECK(r1.extraction.secret.s == r2.extraction.secret.s);

    // The recovered key decrypts.
    Rng rng(seed, "test.attack.msg");
    BlockVec x;
    for (int i = 0; i < 3; ++i) x.push_back(random_poly(rng, 101));
    const auto c = encrypt_qcldpc(key.public_g, x, 0, seed);
    CHECK(decrypt_qcldpc(r2.extraction.secret, c) == x);
  }
}

TEST_CASE("mismatched parameters fail before any work") {
  const auto key = keygen_qcldpc(kDesk, 1);
  QcLdpcParams wrong = kDesk;
  wrong.p = 103;
  CHECK_THROWS_AS(attack_qcldpc(key.public_g, wrong), AttackFailed);
  QcLdpcAttackOptions o;
  o.strategy = 3;
  CHECK_THROWS_AS(attack_qcldpc(key.public_g, kDesk, o), AttackFailed);
}

TEST_CASE("analytic probability bounds") {
  CHECK(containment_bound(4032, 7) == doctest::Approx(std::pow(1 - 42.0 / 4031, 6)));
  CHECK(containment_bound(4032, 7) >= 0.939);
  CHECK(full_weight_bound(4032, 7) >= 0.79);
  CHECK(collision_bound(4032, 7, 1) == doctest::Approx(42.0 / 4031));
  CHECK(collision_bound(101, 3, 2) == doctest::Approx(12.0 / 99));
  CHECK_THROWS_AS(containment_bound(5, 5), DegenerateParameters);
}

TEST_CASE("Monte Carlo agrees with the bounds") {
  const auto st = simulate_products(4032, 7, 10000, 1);
  CHECK(st.collision.trials == 10000);
  CHECK(st.collision.value() <= collision_bound(4032, 7, 1) + 3 * st.collision.sigma());
  CHECK(st.containment.value() >= containment_bound(4032, 7) - 3 * st.containment.sigma());
  CHECK(st.full_weight.value() >= 0.79 - 3 * st.full_weight.sigma());
  CHECK(st.full_weight.value() >= full_weight_bound(4032, 7) - 3 * st.full_weight.sigma());
  // Desk scale: weight q*s is m^2 unless shifts collide.
  const auto desk = simulate_products(101, 3, 4000, 2);
  CHECK(desk.full_weight.value() >= full_weight_bound(101, 3) - 3 * desk.full_weight.sigma());
}

}  // TEST_SUITE
