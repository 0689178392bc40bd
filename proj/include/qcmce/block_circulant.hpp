#pragma once

#include <cstddef>
#include <vector>

#include "qcmce/bin_matrix.hpp"
#include "qcmce/ring_poly.hpp"

namespace qcmce {

/// Matrix over R_p; equivalently a binary matrix made of p x p circulant blocks.
class BlockCirculantMatrix {
 public:
  BlockCirculantMatrix() = default;
  BlockCirculantMatrix(std::size_t p, std::size_t block_rows, std::size_t block_cols);
  static BlockCirculantMatrix identity(std::size_t p, std::size_t n);

  std::size_t modulus() const noexcept { return p_; }
  std::size_t block_rows() const noexcept { return rows_; }
  std::size_t block_cols() const noexcept { return cols_; }

  RingPoly& at(std::size_t i, std::size_t j) { return blocks_[i * cols_ + j]; }
  const RingPoly& at(std::size_t i, std::size_t j) const { return blocks_[i * cols_ + j]; }

  /// Sub-matrix of blocks [r0, r0+nr) x [c0, c0+nc).
  BlockCirculantMatrix slice(std::size_t r0, std::size_t nr, std::size_t c0,
                             std::size_t nc) const;

  friend BlockCirculantMatrix operator+(const BlockCirculantMatrix& a,
                                        const BlockCirculantMatrix& b);
  friend BlockCirculantMatrix operator*(const BlockCirculantMatrix& a,
                                        const BlockCirculantMatrix& b);
  friend bool operator==(const BlockCirculantMatrix&, const BlockCirculantMatrix&) = default;

 private:
  std::size_t p_ = 0;
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<RingPoly> blocks_;
};

/// Binary circulant whose row r is x^r * m(x).
BinMatrix circulant(const RingPoly& m);
BinMatrix expand(const BlockCirculantMatrix& b);
/// Inverse of expand; throws NotBlockCirculant naming the first offending block.
BlockCirculantMatrix collapse(const BinMatrix& m, std::size_t p);
BlockCirculantMatrix block_mul(const BlockCirculantMatrix& a, const BlockCirculantMatrix& b);

/// Inverse via binary expansion, Gauss-Jordan and collapse (the collapse
/// re-checks circulant structure). Throws Singular.
BlockCirculantMatrix block_inverse(const BlockCirculantMatrix& b);
/// Inverse as det^-1 * adjugate over R_p; block_rows <= 4. Usable at sizes where
/// the binary expansion is too large to eliminate. Throws Singular.
BlockCirculantMatrix block_inverse_adjugate(const BlockCirculantMatrix& b);

/// Determinant in R_p by cofactor expansion; block_rows <= 4.
RingPoly poly_det(const BlockCirculantMatrix& b);

/// Entrywise weight parities (S-tilde).
BinMatrix weight_parity_pattern(const BlockCirculantMatrix& b);
/// Determinant over F2 of a square binary matrix.
bool f2_det(const BinMatrix& m);

}  // namespace qcmce
