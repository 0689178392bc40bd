#pragma once

// Shared generators and brute-force oracles. Oracles here deliberately avoid the
// library's packed arithmetic: they work on plain std::vector<int> coefficients.

#include <cstddef>
#include <vector>

#include "qcmce/bin_matrix.hpp"
#include "qcmce/block_circulant.hpp"
#include "qcmce/ring_poly.hpp"
#include "qcmce/rng.hpp"

namespace qcmce::testing {

inline RingPoly random_poly(Rng& rng, std::size_t p) {
  RingPoly r(p);
  for (std::size_t i = 0; i < p; ++i) r.set(i, rng.coin());
  return r;
}

inline RingPoly random_weight_poly(Rng& rng, std::size_t p, std::size_t w) {
  auto s = rng.sample_subset(p, w);
  return RingPoly::from_exponents(p, s);
}

inline BinMatrix random_matrix(Rng& rng, std::size_t rows, std::size_t cols) {
  BinMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) m.set(r, c, rng.coin());
  }
  return m;
}

inline BlockCirculantMatrix random_block(Rng& rng, std::size_t p, std::size_t r, std::size_t c) {
  BlockCirculantMatrix b(p, r, c);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) b.at(i, j) = random_poly(rng, p);
  }
  return b;
}

inline std::vector<int> coeffs(const RingPoly& v) {
  std::vector<int> out(v.modulus());
  for (std::size_t i = 0; i < v.modulus(); ++i) out[i] = v.coeff(i) ? 1 : 0;
  return out;
}

/// Schoolbook convolution then reduction mod x^p - 1.
inline std::vector<int> convolve_mod(const std::vector<int>& a, const std::vector<int>& b) {
  const std::size_t p = a.size();
  std::vector<int> full(2 * p, 0);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) full[i + j] ^= a[i] & b[j];
  }
  std::vector<int> out(p, 0);
  for (std::size_t i = 0; i < 2 * p; ++i) out[i % p] ^= full[i];
  return out;
}

/// Rank by elementary integer elimination on a copy held as vector<vector<int>>.
inline std::size_t naive_rank(const BinMatrix& m) {
  std::vector<std::vector<int>> a(m.rows(), std::vector<int>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) a[r][c] = m.get(r, c) ? 1 : 0;
  }
  std::size_t rank = 0;
  for (std::size_t c = 0; c < m.cols() && rank < m.rows(); ++c) {
    std::size_t piv = rank;
    while (piv < m.rows() && a[piv][c] == 0) ++piv;
    if (piv == m.rows()) continue;
    std::swap(a[piv], a[rank]);
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r != rank && a[r][c] != 0) {
        for (std::size_t k = 0; k < m.cols(); ++k) a[r][k] ^= a[rank][k];
      }
    }
    ++rank;
  }
  return rank;
}

}  // namespace qcmce::testing
