#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace qcmce {

/// Packed binary vector; trailing bits of the last word are always zero.
class BitVec {
 public:
  BitVec() = default;
  explicit BitVec(std::size_t size) : size_(size), words_((size + 63) / 64, 0) {}
  static BitVec from_support(std::size_t size, std::span<const std::size_t> positions);

  std::size_t size() const noexcept { return size_; }
  bool get(std::size_t i) const noexcept { return (words_[i / 64] >> (i % 64)) & 1U; }
  void set(std::size_t i, bool value);
  void flip(std::size_t i) { words_[i / 64] ^= std::uint64_t{1} << (i % 64); }

  std::size_t weight() const noexcept;
  bool is_zero() const noexcept;
  std::vector<std::size_t> support() const;
  /// Parity of the coordinate-wise product.
  bool dot(const BitVec& other) const;

  std::span<std::uint64_t> words() noexcept { return words_; }
  std::span<const std::uint64_t> words() const noexcept { return words_; }

  BitVec& operator^=(const BitVec& other);
  friend BitVec operator^(BitVec a, const BitVec& b) { return a ^= b; }
  friend bool operator==(const BitVec&, const BitVec&) = default;

 private:
  std::size_t size_ = 0;
  std::vector<std::uint64_t> words_;
};

/// Dense row-major bit-packed matrix over F2.
class BinMatrix {
 public:
  BinMatrix() = default;
  BinMatrix(std::size_t rows, std::size_t cols);
  static BinMatrix identity(std::size_t n);
  static BinMatrix from_rows(std::span<const BitVec> rows, std::size_t cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t stride() const noexcept { return stride_; }

  bool get(std::size_t r, std::size_t c) const noexcept {
    return (data_[r * stride_ + c / 64] >> (c % 64)) & 1U;
  }
  void set(std::size_t r, std::size_t c, bool value);
  void flip(std::size_t r, std::size_t c) {
    data_[r * stride_ + c / 64] ^= std::uint64_t{1} << (c % 64);
  }

  std::span<std::uint64_t> row_words(std::size_t r) noexcept {
    return {data_.data() + r * stride_, stride_};
  }
  std::span<const std::uint64_t> row_words(std::size_t r) const noexcept {
    return {data_.data() + r * stride_, stride_};
  }
  BitVec row(std::size_t r) const;
  void set_row(std::size_t r, const BitVec& v);
  void xor_row(std::size_t dst, std::size_t src);
  void swap_rows(std::size_t a, std::size_t b);
  std::size_t row_weight(std::size_t r) const;

  BinMatrix transpose() const;
  bool is_zero() const noexcept;

  friend BinMatrix operator*(const BinMatrix& a, const BinMatrix& b);
  friend BinMatrix operator+(const BinMatrix& a, const BinMatrix& b);
  friend bool operator==(const BinMatrix&, const BinMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::size_t stride_ = 0;
  std::vector<std::uint64_t> data_;
};

struct RrefResult {
  BinMatrix reduced;
  std::size_t rank = 0;
  std::vector<std::size_t> pivots;  // pivot column of each of the first `rank` rows
};

/// Reduced row-echelon form; first-set-bit pivoting, left to right.
RrefResult rref(BinMatrix m);
std::size_t rank(const BinMatrix& m);
/// Basis of {v : m * v^T = 0}; size cols - rank.
std::vector<BitVec> nullspace(const BinMatrix& m);
/// Throws Singular.
BinMatrix inverse(const BinMatrix& m);

/// v * m (v has m.rows() entries).
BitVec vec_mat_mul(const BitVec& v, const BinMatrix& m);
/// m * v^T (v has m.cols() entries), as a vector of m.rows() entries.
BitVec mat_vec_mul(const BinMatrix& m, const BitVec& v);

/// Echelon basis built one vector at a time, for systems too large to
/// materialise before eliminating.
class IncrementalBasis {
 public:
  explicit IncrementalBasis(std::size_t cols) : cols_(cols) {}

  /// Returns true if `v` was independent of the basis (rank grew).
  bool insert(BitVec v);
  std::size_t rank() const noexcept { return rows_.size(); }
  std::size_t cols() const noexcept { return cols_; }
  BinMatrix as_matrix() const;
  std::vector<BitVec> nullspace() const;

 private:
  std::size_t cols_;
  std::vector<BitVec> rows_;
  std::vector<std::size_t> pivots_;
};

}  // namespace qcmce
