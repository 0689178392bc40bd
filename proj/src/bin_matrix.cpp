#include "qcmce/bin_matrix.hpp"

#include <string>
#include <utility>

#include "bits.hpp"
#include "qcmce/error.hpp"

namespace qcmce {

BitVec BitVec::from_support(std::size_t size, std::span<const std::size_t> positions) {
  BitVec v(size);
  for (auto i : positions) {
    if (i >= size) throw OutOfRange("BitVec: position " + std::to_string(i) + " out of range");
    v.set(i, true);
  }
  return v;
}

void BitVec::set(std::size_t i, bool value) {
  const std::uint64_t bit = std::uint64_t{1} << (i % 64);
  if (value) {
    words_[i / 64] |= bit;
  } else {
    words_[i / 64] &= ~bit;
  }
}

std::size_t BitVec::weight() const noexcept { return bits::popcount(words_); }

bool BitVec::is_zero() const noexcept {
  for (auto w : words_) {
    if (w != 0) return false;
  }
  return true;
}

std::vector<std::size_t> BitVec::support() const {
  std::vector<std::size_t> out;
  bits::for_each_set_bit(words_, [&](std::size_t i) { out.push_back(i); });
  return out;
}

bool BitVec::dot(const BitVec& other) const {
  if (size_ != other.size_) throw DimensionMismatch("BitVec::dot: size mismatch");
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < words_.size(); ++i) acc ^= words_[i] & other.words_[i];
  return (std::popcount(acc) & 1) != 0;
}

BitVec& BitVec::operator^=(const BitVec& other) {
  if (size_ != other.size_) throw DimensionMismatch("BitVec: size mismatch");
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] ^= other.words_[i];
  return *this;
}

BinMatrix::BinMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), stride_(bits::words_for(cols)), data_(rows * stride_, 0) {}

BinMatrix BinMatrix::identity(std::size_t n) {
  BinMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, true);
  return m;
}

BinMatrix BinMatrix::from_rows(std::span<const BitVec> rows, std::size_t cols) {
  BinMatrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) m.set_row(r, rows[r]);
  return m;
}

void BinMatrix::set(std::size_t r, std::size_t c, bool value) {
  const std::uint64_t bit = std::uint64_t{1} << (c % 64);
  auto& w = data_[r * stride_ + c / 64];
  w = value ? (w | bit) : (w & ~bit);
}

BitVec BinMatrix::row(std::size_t r) const {
  BitVec v(cols_);
  auto src = row_words(r);
  std::copy(src.begin(), src.end(), v.words().begin());
  return v;
}

void BinMatrix::set_row(std::size_t r, const BitVec& v) {
  if (v.size() != cols_) throw DimensionMismatch("BinMatrix::set_row: size mismatch");
  std::copy(v.words().begin(), v.words().end(), row_words(r).begin());
}

void BinMatrix::xor_row(std::size_t dst, std::size_t src) {
  std::uint64_t* d = data_.data() + dst * stride_;
  const std::uint64_t* s = data_.data() + src * stride_;
  for (std::size_t i = 0; i < stride_; ++i) d[i] ^= s[i];
}

void BinMatrix::swap_rows(std::size_t a, std::size_t b) {
  if (a == b) return;
  std::swap_ranges(data_.begin() + static_cast<std::ptrdiff_t>(a * stride_),
                   data_.begin() + static_cast<std::ptrdiff_t>((a + 1) * stride_),
                   data_.begin() + static_cast<std::ptrdiff_t>(b * stride_));
}

std::size_t BinMatrix::row_weight(std::size_t r) const { return bits::popcount(row_words(r)); }

BinMatrix BinMatrix::transpose() const {
  BinMatrix t(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r) {
    bits::for_each_set_bit(row_words(r), [&](std::size_t c) { t.set(c, r, true); });
  }
  return t;
}

bool BinMatrix::is_zero() const noexcept {
  for (auto w : data_) {
    if (w != 0) return false;
  }
  return true;
}

BinMatrix operator*(const BinMatrix& a, const BinMatrix& b) {
  if (a.cols_ != b.rows_) throw DimensionMismatch("BinMatrix product: inner dimensions differ");
  BinMatrix out(a.rows_, b.cols_);
  for (std::size_t r = 0; r < a.rows_; ++r) {
    std::uint64_t* dst = out.data_.data() + r * out.stride_;
    bits::for_each_set_bit(a.row_words(r), [&](std::size_t k) {
      const std::uint64_t* src = b.data_.data() + k * b.stride_;
      for (std::size_t i = 0; i < b.stride_; ++i) dst[i] ^= src[i];
    });
  }
  return out;
}

BinMatrix operator+(const BinMatrix& a, const BinMatrix& b) {
  if (a.rows_ != b.rows_ || a.cols_ != b.cols_) {
    throw DimensionMismatch("BinMatrix sum: shapes differ");
  }
  BinMatrix out = a;
  for (std::size_t i = 0; i < out.data_.size(); ++i) out.data_[i] ^= b.data_[i];
  return out;
}

RrefResult rref(BinMatrix m) {
  RrefResult out;
  const std::size_t rows = m.rows();
  std::size_t r = 0;
  for (std::size_t c = 0; c < m.cols() && r < rows; ++c) {
    std::size_t pivot = r;
    while (pivot < rows && !m.get(pivot, c)) ++pivot;
    if (pivot == rows) continue;
    m.swap_rows(r, pivot);
    // The pivot row is zero left of c, so only words from c/64 on change.
    const std::size_t w0 = c / 64;
    const auto prow = m.row_words(r);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || !m.get(i, c)) continue;
      auto dst = m.row_words(i);
      for (std::size_t w = w0; w < m.stride(); ++w) dst[w] ^= prow[w];
    }
    out.pivots.push_back(c);
    ++r;
  }
  out.rank = r;
  out.reduced = std::move(m);
  return out;
}

std::size_t rank(const BinMatrix& m) { return rref(m).rank; }

std::vector<BitVec> nullspace(const BinMatrix& m) {
  const RrefResult red = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : red.pivots) is_pivot[c] = true;
  std::vector<BitVec> basis;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    BitVec v(m.cols());
    v.set(f, true);
    for (std::size_t r = 0; r < red.rank; ++r) {
      if (red.reduced.get(r, f)) v.set(red.pivots[r], true);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

BinMatrix inverse(const BinMatrix& m) {
  const std::size_t n = m.rows();
  if (m.cols() != n) throw DimensionMismatch("inverse: matrix is not square");
  BinMatrix aug(n, 2 * n);
  for (std::size_t r = 0; r < n; ++r) {
    bits::xor_range(aug.row_words(r), 0, m.row_words(r), 0, n);
    aug.set(r, n + r, true);
  }
  const RrefResult red = rref(std::move(aug));
  if (red.rank < n || red.pivots[n - 1] != n - 1) throw Singular("inverse: matrix is singular");
  BinMatrix inv(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    bits::xor_range(inv.row_words(r), 0, red.reduced.row_words(r), n, n);
  }
  return inv;
}

BitVec vec_mat_mul(const BitVec& v, const BinMatrix& m) {
  if (v.size() != m.rows()) throw DimensionMismatch("vec_mat_mul: size mismatch");
  BitVec out(m.cols());
  auto dst = out.words();
  bits::for_each_set_bit(v.words(), [&](std::size_t r) {
    const auto src = m.row_words(r);
    for (std::size_t i = 0; i < src.size(); ++i) dst[i] ^= src[i];
  });
  return out;
}

BitVec mat_vec_mul(const BinMatrix& m, const BitVec& v) {
  if (v.size() != m.cols()) throw DimensionMismatch("mat_vec_mul: size mismatch");
  BitVec out(m.rows());
  for (std::size_t r = 0; r < m.rows(); ++r) {
    const auto row = m.row_words(r);
    std::uint64_t acc = 0;
    for (std::size_t i = 0; i < row.size(); ++i) acc ^= row[i] & v.words()[i];
    if (std::popcount(acc) & 1) out.set(r, true);
  }
  return out;
}

bool IncrementalBasis::insert(BitVec v) {
  if (v.size() != cols_) throw DimensionMismatch("IncrementalBasis: size mismatch");
  // Each stored row is zero at the pivots of all rows inserted before it.
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    if (v.get(pivots_[i])) v ^= rows_[i];
  }
  std::size_t pivot = cols_;
  for (std::size_t w = 0; w < v.words().size(); ++w) {
    if (v.words()[w] != 0) {
      pivot = 64 * w + static_cast<std::size_t>(std::countr_zero(v.words()[w]));
      break;
    }
  }
  if (pivot == cols_) return false;
  rows_.push_back(std::move(v));
  pivots_.push_back(pivot);
  return true;
}

BinMatrix IncrementalBasis::as_matrix() const { return BinMatrix::from_rows(rows_, cols_); }

std::vector<BitVec> IncrementalBasis::nullspace() const { return qcmce::nullspace(as_matrix()); }

}  // namespace qcmce
