#include <doctest.h>

#include <numeric>
#include <set>
#include <sstream>

#include "qcmce/attack_qcbch.hpp"
#include "qcmce/error.hpp"
#include "qcmce/qcbch.hpp"
#include "test_util.hpp"

using namespace qcmce;

namespace {

const QcBchParams kDesk = QcBchParams::preset("desk");
constexpr std::uint32_t kDeskPoly = 0x43;

std::vector<std::size_t> identity_perm(std::size_t n) {
  std::vector<std::size_t> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

BitVec flatten_inverse(std::span<const std::size_t> perm) {
  const std::size_t n0 = perm.size();
  BitVec x(n0 * n0);
  for (std::size_t j = 0; j < n0; ++j) x.set(j * n0 + perm[j], true);
  return x;
}

}  // namespace

TEST_SUITE("scheme-qcbch") {

TEST_CASE("params and presets") {
  CHECK_NOTHROW(kDesk.validate());
  CHECK_NOTHROW(QcBchParams::preset("paper-a").validate());
  CHECK_NOTHROW(QcBchParams::preset("paper-b").validate());
  CHECK_THROWS_AS((QcBchParams{6, 2, 7, 9, 6}).validate(), DegenerateParameters);  // p < n0
  CHECK_THROWS_AS((QcBchParams{6, 2, 9, 6, 5}).validate(), DegenerateParameters);
  CHECK_THROWS_AS(QcBchParams::preset("nope"), OutOfRange);
}

TEST_CASE("block_reorder") {
  CHECK(block_reorder(0, 9, 7) == 0);
  CHECK(block_reorder(7, 9, 7) == 1);
  std::vector<std::size_t> full;
  for (std::size_t i = 0; i < 6; ++i) full.push_back(block_reorder(i, 3, 2));
  CHECK(full == std::vector<std::size_t>{0, 3, 1, 4, 2, 5});
  std::set<std::size_t> image;
  for (std::size_t i = 0; i < 63; ++i) {
    image.insert(block_reorder(i, 9, 7));
    CHECK(block_reorder_inverse(block_reorder(i, 9, 7), 9, 7) == i);
  }
  CHECK(image.size() == 63);
  CHECK_THROWS_AS(block_reorder(6, 3, 2), OutOfRange);
}

TEST_CASE("shift_orbit_subcode") {
  std::vector<RingPoly> unit(7, RingPoly(9));
  unit[0] = RingPoly::one(9);
  const auto e = expand(shift_orbit_subcode(unit));
  for (std::size_t r = 0; r < 9; ++r) {
    BitVec expect(63);
    expect.set(r, true);
    CHECK(e.row(r) == expect);
  }

  const auto code = bch_generator(6, 2, kDeskPoly);
  Rng rng(51);
  gf2x::Poly msg;
  for (std::size_t i = 0; i < code.dim; ++i) {
    if (rng.coin()) msg.set(i, true);
  }
  const auto blocks = to_blocks(bch_encode(code, msg), 9, 7);
  CHECK(from_blocks(blocks) == bch_encode(code, msg));
  const auto orbit = expand(shift_orbit_subcode(blocks));
  for (std::size_t r = 0; r < 9; ++r) {
    // Blocked row r back in cyclic coordinates is in the BCH code.
    BitVec cyc(63);
    for (auto c : orbit.row(r).support()) cyc.set(block_reorder_inverse(c, 9, 7), true);
    CHECK(mat_vec_mul(code.parity_check, cyc).is_zero());
    // Shifting every block once more lands on the next row.
    std::vector<RingPoly> next;
    for (std::size_t j = 0; j < 7; ++j) next.push_back(RingPoly::from_bits(9, orbit.row(r).words(), j * 9).shifted(1));
    std::vector<RingPoly> expect;
    for (std::size_t j = 0; j < 7; ++j) expect.push_back(RingPoly::from_bits(9, orbit.row((r + 1) % 9).words(), j * 9));
    CHECK(next == expect);
  }
}

TEST_CASE("max_subcode_dimension") {
  // Residues 3 and 6 mod 9 hold only four nonzeros each: 5 + 2*4 + 6*5.
  CHECK(max_subcode_dimension(kDesk) == 43);
  CHECK(max_subcode_dimension(QcBchParams{6, 2, 9, 7, 5}) == 36);
  // Rank oracle: the maximum is attained by random generators.
  const auto code = bch_generator(6, 2, kDeskPoly);
  Rng rng(50);
  for (std::size_t k0 : {2, 3, 4, 5, 6}) {
    std::size_t best = 0;
    for (int trial = 0; trial < 5; ++trial) {
      BlockCirculantMatrix g(9, k0 - 1, 7);
      for (std::size_t i = 0; i + 1 < k0; ++i) {
        gf2x::Poly msg;
        for (std::size_t e = 0; e < code.dim; ++e) {
          if (rng.coin()) msg.set(e, true);
        }
        const auto blocks = to_blocks(bch_encode(code, msg), 9, 7);
        for (std::size_t j = 0; j < 7; ++j) g.at(i, j) = blocks[j];
      }
      best = std::max(best, rank(expand(g)));
    }
    CHECK(best == max_subcode_dimension(QcBchParams{6, 2, 9, 7, k0}));
  }
}

TEST_CASE("keygen: identity permutation and rank") {
  const auto key = keygen_qcbch(kDesk, kDeskPoly, 1, identity_perm(7));
  CHECK(key.public_gen == key.secret_gen);
  const auto key2 = keygen_qcbch(kDesk, kDeskPoly, 1);
  CHECK(key2.dimension == 43);
  CHECK(rank(expand(key2.public_gen)) == key2.dimension);
  CHECK(key.secret_gen == key2.secret_gen);
}

TEST_CASE("keygen: public rows un-permuted lie in the BCH code") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto key = keygen_qcbch(kDesk, kDeskPoly, seed);
    CHECK(verify_qcbch_perm(key.code.parity_check, key.public_gen, key.perm));
    // expand(G^pi) = expand(G) * (Pi x I_p).
    CHECK(expand(key.public_gen) ==
          expand(key.secret_gen) * block_permutation_matrix(key.perm, 9));
  }
}

TEST_CASE("keygen: quasi-cyclic shift closure of the public code") {
  const auto key = keygen_qcbch(kDesk, kDeskPoly, 3);
  const auto g = expand(key.public_gen);
  Rng rng(52);
  for (int trial = 0; trial < 10; ++trial) {
    BitVec x(g.rows());
    for (std::size_t i = 0; i < g.rows(); ++i) x.set(i, rng.coin());
    const auto c = vec_mat_mul(x, g);
    BitVec shifted(63);
    for (auto i : c.support()) shifted.set((i / 9) * 9 + (i % 9 + 1) % 9, true);
    BinMatrix stacked(g.rows() + 1, 63);
    for (std::size_t r = 0; r < g.rows(); ++r) stacked.set_row(r, g.row(r));
    stacked.set_row(g.rows(), shifted);
    CHECK(rank(stacked) == key.dimension);
  }
}

TEST_CASE("keygen rejects infeasible dimensions") {
  CHECK_THROWS_AS(keygen_qcbch(QcBchParams::preset("paper-b"), 0x805, 1), DegenerateParameters);
  CHECK_THROWS_AS(keygen_qcbch(kDesk, 0x7f, 1), InvalidField);
}

TEST_CASE("key file round trip") {
  const auto key = keygen_qcbch(kDesk, kDeskPoly, 4);
  QcBchKeyFile file{kDesk, kDeskPoly, key.perm, key.public_gen};
  std::stringstream ss;
  write_qcbch_key(ss, file);
  CHECK(ss.str().rfind("qcbch 6 2 9 7 6 0x43\n", 0) == 0);
  const auto back = read_qcbch_key(ss);
  CHECK(back.params == kDesk);
  CHECK(back.prim_poly == kDeskPoly);
  CHECK(back.perm == key.perm);
  CHECK(back.public_gen == key.public_gen);

  std::stringstream bad("qcbch 6 2 9 7 6 0x43\n1 2 3 4 5 6 6\n");
  CHECK_THROWS_AS(read_qcbch_key(bad), ParseError);
  std::stringstream short_rows("qcbch 6 2 9 7 6 0x43\n-\n[ 0 ] [ ]\n");
  CHECK_THROWS_AS(read_qcbch_key(short_rows), ParseError);
}

TEST_CASE("encrypt_qcbch adds exactly the requested error weight") {
  const auto key = keygen_qcbch(kDesk, kDeskPoly, 5);
  BitVec msg(45);
  msg.set(3, true);
  const auto clean = vec_mat_mul(msg, expand(key.public_gen));
  const auto c = encrypt_qcbch(key.public_gen, msg, 2, 9);
  CHECK((c ^ clean).weight() == 2);
}

}  // TEST_SUITE

TEST_SUITE("attack-qcbch") {

TEST_CASE("system_dimensions") {
  const auto b = system_dimensions(QcBchParams::preset("paper-b"));
  CHECK(b.unknowns == 529);
  CHECK(b.equations == 316840);
  const auto a = system_dimensions(QcBchParams::preset("paper-a"));
  CHECK(a.unknowns == 2025);
  CHECK(a.equations == 695604);
  const auto d = system_dimensions(kDesk);
  CHECK(d.unknowns == 49);
  CHECK(d.equations == 405);
}

TEST_CASE("planted inverse satisfies every equation") {
  const auto key = keygen_qcbch(kDesk, kDeskPoly, 7);
  const auto hb = reorder_columns(key.code.parity_check, 9, 7);
  const auto sys = build_perm_system(hb, key.public_gen);
  CHECK(sys.equations_emitted == hb.rows() * 45);  // 45 expanded public rows
  CHECK(sys.h_rows == 24);
  CHECK(sys.equations_emitted >= system_dimensions(kDesk).equations);
  CHECK(sys.basis.rank() >= 48);
  const auto x = flatten_inverse(key.perm);
  const auto g = expand(key.public_gen);
  for (std::size_t r = 0; r < g.rows(); r += 4) {
    for (std::size_t h = 0; h < hb.rows(); ++h) {
      CHECK_FALSE(perm_equation(hb.row(h), g.row(r), 9, 7).dot(x));
    }
  }
  const auto sols = solve_perm(sys);
  REQUIRE(sols.size() == 1);
  CHECK(sols[0] == key.perm);
}

TEST_CASE("perm_equation is bilinear") {
  Rng rng(53);
  for (int trial = 0; trial < 20; ++trial) {
    BitVec h(63), g(63), u(49), v(49);
    for (std::size_t i = 0; i < 63; ++i) {
      h.set(i, rng.coin());
      g.set(i, rng.coin());
    }
    for (std::size_t i = 0; i < 49; ++i) {
      u.set(i, rng.coin());
      v.set(i, rng.coin());
    }
    const auto eq = perm_equation(h, g, 9, 7);
    CHECK(eq.dot(u ^ v) == (eq.dot(u) != eq.dot(v)));
  }
}

TEST_CASE("perm_from_inverse_matrix filters non-permutations") {
  const std::vector<std::size_t> perm{2, 0, 1};
  CHECK(perm_from_inverse_matrix(flatten_inverse(perm), 3) == perm);
  BitVec two_in_row(9);
  two_in_row.set(0, true);
  two_in_row.set(1, true);
  two_in_row.set(5, true);
  CHECK_FALSE(perm_from_inverse_matrix(two_in_row, 3).has_value());
  BitVec all(9);
  for (std::size_t i = 0; i < 9; ++i) all.set(i, true);
  CHECK_FALSE(perm_from_inverse_matrix(all, 3).has_value());
}

TEST_CASE("solve_perm reports the nullspace dimension on failure") {
  // Equations forcing X = J (all ones) up to scale: x_i + x_0 = 0.
  PermSystem sys;
  sys.n0 = 3;
  sys.basis = IncrementalBasis(9);
  for (std::size_t i = 1; i < 9; ++i) {
    BitVec eq(9);
    eq.set(0, true);
    eq.set(i, true);
    sys.basis.insert(eq);
  }
  try {
    solve_perm(sys);
    FAIL("expected AttackFailed");
  } catch (const AttackFailed& e) {
    CHECK(e.nullspace_dim() == 1);
  }
}

TEST_CASE("end-to-end on a planted desk key") {
  const auto key = keygen_qcbch(kDesk, kDeskPoly, 1);
  const auto report = attack_qcbch(key.public_gen, kDesk);
  CHECK(report.success);
  CHECK(report.perm == key.perm);
  CHECK(report.prim_poly == kDeskPoly);
  CHECK(report.candidates.back().nullspace_dim == 1);
  CHECK(verify_qcbch_perm(key.code.parity_check, key.public_gen, report.perm));
  const auto parallel = attack_qcbch(key.public_gen, kDesk, 3);
  CHECK(parallel.perm == report.perm);
  CHECK(parallel.prim_poly == report.prim_poly);
  CHECK(parallel.candidates.size() == report.candidates.size());
}

TEST_CASE("wrong field size fails") {
  const auto key = keygen_qcbch(kDesk, kDeskPoly, 2);
  QcBchParams wrong = kDesk;
  wrong.m = 7;
  CHECK_THROWS_AS(attack_qcbch(key.public_gen, wrong), AttackFailed);
  const auto rep = run_attack_qcbch(key.public_gen, wrong);
  CHECK_FALSE(rep.success);
  CHECK_FALSE(rep.failure.empty());
}

}  // TEST_SUITE
