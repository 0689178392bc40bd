#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "qcmce/bch.hpp"
#include "qcmce/bin_matrix.hpp"
#include "qcmce/block_circulant.hpp"

namespace qcmce {

/// McEliece variant over a quasi-cyclic subcode of a primitive BCH code.
struct QcBchParams {
  unsigned m = 0;  // extension degree, n = 2^m - 1
  unsigned t = 0;  // designed error count of the BCH code
  std::size_t p = 0;
  std::size_t n0 = 0;
  std::size_t k0 = 0;

  std::size_t n() const noexcept { return p * n0; }
  /// Throws DegenerateParameters unless p*n0 = 2^m - 1, p > n0 and 2 <= k0 < n0.
  void validate() const;
  /// "paper-a", "paper-b" or "desk".
  static QcBchParams preset(std::string_view name);
  friend bool operator==(const QcBchParams&, const QcBchParams&) = default;
};

/// index = a*n0 + b  ->  b*p + a.
std::size_t block_reorder(std::size_t index, std::size_t p, std::size_t n0);
std::size_t block_reorder_inverse(std::size_t index, std::size_t p, std::size_t n0);

/// Splits a length-p*n0 word of the cyclic code into its n0 reordered blocks.
std::vector<RingPoly> to_blocks(const BitVec& word, std::size_t p, std::size_t n0);
/// Inverse of to_blocks.
BitVec from_blocks(std::span<const RingPoly> blocks);
/// Columns moved into the blocked coordinate system: out[:, reorder(i)] = h[:, i].
BinMatrix reorder_columns(const BinMatrix& h, std::size_t p, std::size_t n0);

/// The 1 x n0 block row whose p expanded rows are c and its block-wise shifts.
BlockCirculantMatrix shift_orbit_subcode(std::span<const RingPoly> c);

/// Public block column j is secret block column perm[j] (0-based perm).
BlockCirculantMatrix apply_block_permutation(const BlockCirculantMatrix& g,
                                             std::span<const std::size_t> perm);
/// Binary (Pi (x) I_p) with Pi[perm[j]][j] = 1, so expand(G) * result = expand(G^pi).
BinMatrix block_permutation_matrix(std::span<const std::size_t> perm, std::size_t p);

/// Largest F2 dimension a sum of k0-1 shift-orbit subcodes of the BCH code can
/// reach: sum over residues d mod p of min(k0-1, #{nonzeros e of C0 : e = d mod p}).
/// Equals p(k0-1) only when every residue class has at least k0-1 nonzeros.
std::size_t max_subcode_dimension(const QcBchParams& params);

struct QcBchKeyPair {
  QcBchParams params;
  BlockCirculantMatrix public_gen;  // (k0-1) x n0
  std::vector<std::size_t> perm;    // 0-based secret block permutation
  BlockCirculantMatrix secret_gen;
  BchCode code;
  std::size_t dimension = 0;  // rank of expand(public_gen)
  std::size_t redraws = 0;    // rank-deficient draws rejected
};

inline constexpr std::size_t kDefaultRedrawBudget = 100;

/// `perm` overrides the secret permutation (test hook; identity gives public = secret).
QcBchKeyPair keygen_qcbch(const QcBchParams& params, std::uint32_t prim_poly, std::uint64_t seed,
                          std::optional<std::vector<std::size_t>> perm = std::nullopt,
                          std::size_t redraw_budget = kDefaultRedrawBudget);

/// x * expand(G) + e with a uniformly drawn weight-`errors` e. Not decryptable here.
BitVec encrypt_qcbch(const BlockCirculantMatrix& public_gen, const BitVec& message,
                     std::size_t errors, std::uint64_t seed);

/// Contents of a qcbch key file.
struct QcBchKeyFile {
  QcBchParams params;
  std::uint32_t prim_poly = 0;
  std::vector<std::size_t> perm;  // 0-based; empty when unknown
  BlockCirculantMatrix public_gen;
};

void write_qcbch_key(std::ostream& out, const QcBchKeyFile& key);
QcBchKeyFile read_qcbch_key(std::istream& in);

}  // namespace qcmce
