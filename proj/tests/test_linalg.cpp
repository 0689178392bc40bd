#include <doctest.h>

#include <bit>
#include <unordered_set>

#include "qcmce/bin_matrix.hpp"
#include "qcmce/block_circulant.hpp"
#include "qcmce/error.hpp"
#include "test_util.hpp"

using namespace qcmce;
using qcmce::testing::random_block;
using qcmce::testing::random_matrix;
using qcmce::testing::random_poly;
using qcmce::testing::random_weight_poly;

namespace {

// |row space| by Gray-code enumeration of all 2^rows combinations (cols <= 64).
std::size_t row_space_rank(const BinMatrix& m) {
  std::unordered_set<std::uint64_t> seen;
  std::uint64_t acc = 0;
  seen.insert(acc);
  for (std::uint64_t i = 1; i < (std::uint64_t{1} << m.rows()); ++i) {
    const auto flip = static_cast<std::size_t>(std::countr_zero(i));
    acc ^= m.row_words(flip)[0];
    seen.insert(acc);
  }
  return static_cast<std::size_t>(std::bit_width(seen.size()) - 1);
}

}  // namespace

TEST_SUITE("f2-linalg") {

TEST_CASE("rref of identity and zero") {
  const auto id = BinMatrix::identity(37);
  const auto r = rref(id);
  CHECK(r.rank == 37);
  CHECK(r.reduced == id);
  const BinMatrix z(5, 9);
  const auto rz = rref(z);
  CHECK(rz.rank == 0);
  CHECK(rz.reduced == z);
  CHECK(rz.pivots.empty());
}

TEST_CASE("rank matches row-space enumeration") {
  Rng rng(21);
  for (int trial = 0; trial < 4; ++trial) {
    BinMatrix m = random_matrix(rng, 20, 30);
    // Force some dependence in half the trials.
    if (trial % 2 == 0) {
      m.set_row(19, m.row(0) ^ m.row(1));
      m.set_row(18, m.row(2));
    }
    CHECK(rank(m) == row_space_rank(m));
  }
}

TEST_CASE("rref output is reduced echelon and row-equivalent") {
  Rng rng(22);
  for (int trial = 0; trial < 10; ++trial) {
    const BinMatrix m = random_matrix(rng, 1 + rng.uniform(40), 1 + rng.uniform(140));
    const auto r = rref(m);
    CHECK(r.rank == qcmce::testing::naive_rank(m));
    for (std::size_t i = 0; i < r.rank; ++i) {
      for (std::size_t k = 0; k < r.reduced.rows(); ++k) {
        CHECK(r.reduced.get(k, r.pivots[i]) == (k == i));
      }
    }
    // Row equivalence: stacking does not raise the rank.
    BinMatrix stacked(m.rows() + r.reduced.rows(), m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i) stacked.set_row(i, m.row(i));
    for (std::size_t i = 0; i < r.reduced.rows(); ++i) stacked.set_row(m.rows() + i, r.reduced.row(i));
    CHECK(rank(stacked) == r.rank);
  }
}

TEST_CASE("nullspace") {
  CHECK(nullspace(BinMatrix::identity(10)).empty());
  CHECK(nullspace(BinMatrix(4, 7)).size() == 7);
  Rng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const BinMatrix m = random_matrix(rng, 10, 15);
    const auto basis = nullspace(m);
    CHECK(basis.size() == 15 - rank(m));
    for (const auto& v : basis) CHECK(mat_vec_mul(m, v).is_zero());
    CHECK(rank(BinMatrix::from_rows(basis, 15)) == basis.size());
  }
}

TEST_CASE("inverse") {
  Rng rng(24);
  int found = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const BinMatrix m = random_matrix(rng, 70, 70);
    if (rank(m) < 70) {
      CHECK_THROWS_AS(inverse(m), Singular);
      continue;
    }
    const auto inv = inverse(m);
    CHECK(m * inv == BinMatrix::identity(70));
    CHECK(inv * m == BinMatrix::identity(70));
    ++found;
  }
  CHECK(found > 0);
}

TEST_CASE("incremental basis agrees with batch rank") {
  Rng rng(25);
  const BinMatrix m = random_matrix(rng, 40, 30);
  IncrementalBasis basis(30);
  std::size_t grown = 0;
  for (std::size_t r = 0; r < m.rows(); ++r) grown += basis.insert(m.row(r)) ? 1 : 0;
  CHECK(grown == rank(m));
  CHECK(basis.rank() == rank(m));
  CHECK(basis.nullspace().size() == 30 - rank(m));
  for (const auto& v : basis.nullspace()) CHECK(mat_vec_mul(m, v).is_zero());
}

TEST_CASE("expand: identity and shift") {
  BlockCirculantMatrix one(3, 1, 1);
  one.at(0, 0) = RingPoly::one(3);
  CHECK(expand(one) == BinMatrix::identity(3));
  BlockCirculantMatrix x(3, 1, 1);
  x.at(0, 0) = RingPoly::monomial(3, 1);
  BinMatrix shift(3, 3);
  shift.set(0, 1, true);
  shift.set(1, 2, true);
  shift.set(2, 0, true);
  CHECK(expand(x) == shift);
}

TEST_CASE("expand is a homomorphism for block products") {
  Rng rng(26);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = random_block(rng, 5, 2, 3);
    const auto b = random_block(rng, 5, 3, 4);
    CHECK(expand(a) * expand(b) == expand(block_mul(a, b)));
    const auto c = random_block(rng, 5, 2, 3);
    CHECK(expand(a) + expand(c) == expand(a + c));
  }
}

TEST_CASE("collapse") {
  Rng rng(27);
  const auto b = random_block(rng, 6, 3, 2);
  CHECK(collapse(expand(b), 6) == b);
  const auto id = collapse(BinMatrix::identity(8), 4);
  CHECK(id == BlockCirculantMatrix::identity(4, 2));
  BinMatrix bad = expand(b);
  bad.flip(7, 9);  // row 1 of block row 1, column 3 of block column 1
  try {
    collapse(bad, 6);
    FAIL("expected NotBlockCirculant");
  } catch (const NotBlockCirculant& e) {
    CHECK(e.block_row() == 1);
    CHECK(e.block_col() == 1);
  }
  CHECK_THROWS_AS(collapse(BinMatrix(7, 12), 6), DimensionMismatch);
}

TEST_CASE("block_inverse") {
  CHECK(block_inverse(BlockCirculantMatrix::identity(7, 3)) == BlockCirculantMatrix::identity(7, 3));
  Rng rng(28);
  // All-odd-weight 3x3: x - 1 divides the determinant.
  BlockCirculantMatrix all_odd(11, 3, 3);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) all_odd.at(i, j) = random_weight_poly(rng, 11, 3);
  }
  CHECK_THROWS_AS(block_inverse(all_odd), Singular);
  CHECK_THROWS_AS(block_inverse_adjugate(all_odd), Singular);

  // The nonsingular weight-parity pattern at p = 101.
  const int pattern[3][3] = {{1, 1, 1}, {1, 0, 1}, {0, 1, 1}};
  int checked = 0;
  for (int trial = 0; trial < 5; ++trial) {
    BlockCirculantMatrix s(101, 3, 3);
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) s.at(i, j) = random_weight_poly(rng, 101, pattern[i][j] ? 7 : 6);
    }
    if (!is_invertible(poly_det(s))) continue;
    const auto inv = block_inverse(s);
    CHECK(block_mul(s, inv) == BlockCirculantMatrix::identity(101, 3));
    CHECK(block_mul(inv, s) == BlockCirculantMatrix::identity(101, 3));
    CHECK(block_inverse_adjugate(s) == inv);
    ++checked;
  }
  CHECK(checked > 0);
}

TEST_CASE("poly_det") {
  CHECK(poly_det(BlockCirculantMatrix::identity(9, 4)) == RingPoly::one(9));
  Rng rng(29);
  BlockCirculantMatrix one(9, 1, 1);
  one.at(0, 0) = random_poly(rng, 9);
  CHECK(poly_det(one) == one.at(0, 0));
  CHECK_THROWS_AS(poly_det(BlockCirculantMatrix::identity(9, 5)), UnsupportedSize);
  // det is a unit iff the expansion is nonsingular.
  int singular = 0;
  int regular = 0;
  for (int trial = 0; trial < 40; ++trial) {
    const auto b = random_block(rng, 7, 3, 3);
    const bool unit = is_invertible(poly_det(b));
    CHECK(unit == (rank(expand(b)) == 21));
    (unit ? regular : singular)++;
  }
  CHECK(singular > 0);
  CHECK(regular > 0);
}

TEST_CASE("2x2 determinant equals the explicit formula") {
  Rng rng(30);
  const auto b = random_block(rng, 13, 2, 2);
  CHECK(poly_det(b) == b.at(0, 0) * b.at(1, 1) + b.at(0, 1) * b.at(1, 0));
}

TEST_CASE("property: weight-parity lemma") {
  Rng rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t p = 2 + rng.uniform(60);
    const auto b = random_block(rng, p, 3, 3);
    CHECK(f2_det(weight_parity_pattern(b)) == poly_det(b).eval_at_one());
  }
}

}  // TEST_SUITE
