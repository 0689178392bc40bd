#include "qcmce/block_circulant.hpp"

#include <string>

#include "bits.hpp"
#include "qcmce/error.hpp"

namespace qcmce {

namespace {

void require_square(const BlockCirculantMatrix& b, const char* what) {
  if (b.block_rows() != b.block_cols()) {
    throw DimensionMismatch(std::string(what) + ": matrix is not square in blocks");
  }
}

constexpr std::size_t kMaxCofactorSize = 4;

RingPoly det_rec(const BlockCirculantMatrix& b, std::vector<std::size_t>& rows,
                 std::vector<std::size_t>& cols) {
  const std::size_t p = b.modulus();
  if (rows.size() == 1) return b.at(rows[0], cols[0]);
  // Expand along the first remaining row; signs vanish in characteristic 2.
  RingPoly acc(p);
  const std::size_t r = rows.front();
  rows.erase(rows.begin());
  for (std::size_t k = 0; k < cols.size(); ++k) {
    const RingPoly& entry = b.at(r, cols[k]);
    if (entry.is_zero()) continue;
    const std::size_t c = cols[k];
    cols.erase(cols.begin() + static_cast<std::ptrdiff_t>(k));
    acc += entry * det_rec(b, rows, cols);
    cols.insert(cols.begin() + static_cast<std::ptrdiff_t>(k), c);
  }
  rows.insert(rows.begin(), r);
  return acc;
}

RingPoly minor_det(const BlockCirculantMatrix& b, std::size_t skip_row, std::size_t skip_col) {
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
  for (std::size_t i = 0; i < b.block_rows(); ++i) {
    if (i != skip_row) rows.push_back(i);
    if (i != skip_col) cols.push_back(i);
  }
  return det_rec(b, rows, cols);
}

}  // namespace

BlockCirculantMatrix::BlockCirculantMatrix(std::size_t p, std::size_t block_rows,
                                           std::size_t block_cols)
    : p_(p), rows_(block_rows), cols_(block_cols), blocks_(block_rows * block_cols, RingPoly(p)) {}

BlockCirculantMatrix BlockCirculantMatrix::identity(std::size_t p, std::size_t n) {
  BlockCirculantMatrix m(p, n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = RingPoly::one(p);
  return m;
}

BlockCirculantMatrix BlockCirculantMatrix::slice(std::size_t r0, std::size_t nr, std::size_t c0,
                                                 std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) throw OutOfRange("BlockCirculantMatrix::slice");
  BlockCirculantMatrix out(p_, nr, nc);
  for (std::size_t i = 0; i < nr; ++i) {
    for (std::size_t j = 0; j < nc; ++j) out.at(i, j) = at(r0 + i, c0 + j);
  }
  return out;
}

BlockCirculantMatrix operator+(const BlockCirculantMatrix& a, const BlockCirculantMatrix& b) {
  if (a.p_ != b.p_) throw ModulusMismatch(a.p_, b.p_);
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) {
    throw DimensionMismatch("block sum: shapes differ");
  }
  BlockCirculantMatrix out = a;
  for (std::size_t i = 0; i < out.blocks_.size(); ++i) out.blocks_[i] += b.blocks_[i];
  return out;
}

BlockCirculantMatrix operator*(const BlockCirculantMatrix& a, const BlockCirculantMatrix& b) {
  if (a.p_ != b.p_) throw ModulusMismatch(a.p_, b.p_);
  if (a.cols_ != b.rows_) throw DimensionMismatch("block product: inner dimensions differ");
  BlockCirculantMatrix out(a.p_, a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t j = 0; j < b.cols_; ++j) {
      RingPoly acc(a.p_);
      for (std::size_t k = 0; k < a.cols_; ++k) {
        if (a.at(i, k).is_zero() || b.at(k, j).is_zero()) continue;
        acc += a.at(i, k) * b.at(k, j);
      }
      out.at(i, j) = std::move(acc);
    }
  }
  return out;
}

BlockCirculantMatrix block_mul(const BlockCirculantMatrix& a, const BlockCirculantMatrix& b) {
  return a * b;
}

BinMatrix circulant(const RingPoly& m) {
  BlockCirculantMatrix b(m.modulus(), 1, 1);
  b.at(0, 0) = m;
  return expand(b);
}

BinMatrix expand(const BlockCirculantMatrix& b) {
  const std::size_t p = b.modulus();
  BinMatrix out(b.block_rows() * p, b.block_cols() * p);
  for (std::size_t i = 0; i < b.block_rows(); ++i) {
    for (std::size_t j = 0; j < b.block_cols(); ++j) {
      const RingPoly& m = b.at(i, j);
      if (m.is_zero()) continue;
      for (std::size_t r = 0; r < p; ++r) {
        const RingPoly row = m.shifted(static_cast<long>(r));
        bits::xor_range(out.row_words(i * p + r), j * p, row.words(), 0, p);
      }
    }
  }
  return out;
}

BlockCirculantMatrix collapse(const BinMatrix& m, std::size_t p) {
  if (p == 0 || m.rows() % p != 0 || m.cols() % p != 0) {
    throw DimensionMismatch("collapse: dimensions not divisible by block size");
  }
  BlockCirculantMatrix out(p, m.rows() / p, m.cols() / p);
  for (std::size_t i = 0; i < out.block_rows(); ++i) {
    for (std::size_t j = 0; j < out.block_cols(); ++j) {
      const RingPoly first = RingPoly::from_bits(p, m.row_words(i * p), j * p);
      for (std::size_t r = 1; r < p; ++r) {
        const RingPoly row = RingPoly::from_bits(p, m.row_words(i * p + r), j * p);
        if (row != first.shifted(static_cast<long>(r))) throw NotBlockCirculant(i, j);
      }
      out.at(i, j) = first;
    }
  }
  return out;
}

BlockCirculantMatrix block_inverse(const BlockCirculantMatrix& b) {
  require_square(b, "block_inverse");
  BinMatrix inv;
  try {
    inv = inverse(expand(b));
  } catch (const Singular&) {
    throw Singular("block_inverse: block matrix is singular");
  }
  return collapse(inv, b.modulus());
}

RingPoly poly_det(const BlockCirculantMatrix& b) {
  require_square(b, "poly_det");
  if (b.block_rows() == 0 || b.block_rows() > kMaxCofactorSize) {
    throw UnsupportedSize("poly_det: supports 1 to 4 block rows, got " +
                          std::to_string(b.block_rows()));
  }
  std::vector<std::size_t> rows;
  std::vector<std::size_t> cols;
  for (std::size_t i = 0; i < b.block_rows(); ++i) {
    rows.push_back(i);
    cols.push_back(i);
  }
  return det_rec(b, rows, cols);
}

BlockCirculantMatrix block_inverse_adjugate(const BlockCirculantMatrix& b) {
  const RingPoly det = poly_det(b);
  RingPoly det_inv;
  try {
    det_inv = ring_inv(det);
  } catch (const NotInvertible&) {
    throw Singular("block_inverse_adjugate: determinant is not a unit of R_p");
  }
  const std::size_t n = b.block_rows();
  if (n == 1) {
    BlockCirculantMatrix out(b.modulus(), 1, 1);
    out.at(0, 0) = det_inv;
    return out;
  }
  BlockCirculantMatrix out(b.modulus(), n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out.at(i, j) = det_inv * minor_det(b, j, i);
  }
  return out;
}

BinMatrix weight_parity_pattern(const BlockCirculantMatrix& b) {
  BinMatrix out(b.block_rows(), b.block_cols());
  for (std::size_t i = 0; i < b.block_rows(); ++i) {
    for (std::size_t j = 0; j < b.block_cols(); ++j) out.set(i, j, b.at(i, j).eval_at_one());
  }
  return out;
}

bool f2_det(const BinMatrix& m) {
  if (m.rows() != m.cols()) throw DimensionMismatch("f2_det: matrix is not square");
  return rank(m) == m.rows();
}

}  // namespace qcmce
