#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "qcmce/bin_matrix.hpp"
#include "qcmce/block_circulant.hpp"
#include "qcmce/ring_poly.hpp"

namespace qcmce {

/// A word of n0 (or n0-1) blocks of p bits each.
using BlockVec = std::vector<RingPoly>;

/// McEliece variant over a QC-LDPC code with H = (H_1 | ... | H_n0), diagonal Q.
struct QcLdpcParams {
  std::size_t p = 0;
  std::size_t n0 = 0;
  std::size_t dv = 0;        // weight of every H_j
  std::size_t q_weight = 0;  // weight m of the q_i, base weight of the S blocks
  std::size_t t = 0;         // decoder capability estimate
  std::size_t t_prime = 0;   // encryption error weight

  std::size_t n() const noexcept { return p * n0; }
  std::size_t k() const noexcept { return p * (n0 - 1); }
  /// Throws DegenerateParameters.
  void validate() const;
  /// "paper-ldpc" or "desk".
  static QcLdpcParams preset(std::string_view name);
  friend bool operator==(const QcLdpcParams&, const QcLdpcParams&) = default;
};

/// Weight-parity pattern used for S: the 3x3 matrix [[1,1,1],[1,0,1],[0,1,1]],
/// and for other sizes the upper unitriangular all-ones matrix. Both have F2
/// determinant 1.
BinMatrix s_tilde_pattern(std::size_t size);
/// Weight of block S_{i,j}: q_weight where the pattern is 1, q_weight - 1 where 0.
std::size_t s_block_weight(const QcLdpcParams& params, std::size_t i, std::size_t j);
/// Sum of the block weights of row i of S.
std::size_t s_row_weight(const QcLdpcParams& params, std::size_t i);

struct QcLdpcSecret {
  BlockVec h;              // H_1 .. H_n0
  BlockCirculantMatrix s;  // (n0-1) x (n0-1)
  BlockVec q;              // diagonal of Q
};

struct QcLdpcKeyPair {
  QcLdpcParams params;
  QcLdpcSecret secret;
  BlockCirculantMatrix public_g;  // (n0-1) x n0, S^-1 G' Q^-1
  std::size_t h_redraws = 0;
  std::size_t s_redraws = 0;
  std::size_t q_redraws = 0;
};

inline constexpr std::size_t kLdpcRedrawBudget = 1000;

/// Block-matrix inverse: binary elimination for small expansions, adjugate otherwise.
BlockCirculantMatrix invert_block_matrix(const BlockCirculantMatrix& b);

/// G' = (I_k | P) with P_i = (H_n0^-1 H_i)^T. Throws NotInvertible if H_n0 is not.
BlockCirculantMatrix systematic_generator(std::span<const RingPoly> h);

/// Public key from given secrets, after checking that H_n0, S and every q_i
/// are invertible. Weights are not checked, so S = I, Q = I is allowed.
BlockCirculantMatrix public_from_secret(const QcLdpcSecret& secret);

QcLdpcKeyPair keygen_qcldpc(const QcLdpcParams& params, std::uint64_t seed,
                            std::size_t redraw_budget = kLdpcRedrawBudget);

/// x * M for a block row vector x and block matrix M.
BlockVec vec_block_mul(std::span<const RingPoly> x, const BlockCirculantMatrix& m);
/// Flattens blocks into one binary word (block j occupies bits j*p .. j*p+p-1).
BitVec flatten(std::span<const RingPoly> blocks);
BlockVec unflatten(const BitVec& word, std::size_t p);

/// c = x G + e with a uniform weight-t_prime e drawn from `seed`.
BlockVec encrypt_qcldpc(const BlockCirculantMatrix& public_g, std::span<const RingPoly> x,
                        std::size_t t_prime, std::uint64_t seed);

/// Syndrome H y^T as a polynomial: sum of y_j * reciprocal(h_j).
RingPoly ldpc_syndrome(std::span<const RingPoly> h, std::span<const RingPoly> y);

struct DecodeResult {
  BlockVec word;
  std::size_t iterations = 0;
};

enum class FlipRule {
  majority,   // flip every position with more than dv/2 unsatisfied checks
  max_count,  // flip the positions with the most unsatisfied checks
};

struct DecodeOptions {
  std::size_t max_iter = 50;  // rounds per attempt
  FlipRule rule = FlipRule::max_count;
  /// Extra attempts after a failed first one. On a restart each position that
  /// meets the rule is flipped with probability 1/2 (fixed seed, so decoding
  /// stays deterministic).
  std::size_t restarts = 50;
};

/// Gallager bit flipping. Throws DecodeFailure once every attempt has run out
/// of rounds or stalled; `iterations` counts rounds over all attempts.
DecodeResult bitflip_decode(std::span<const RingPoly> h, std::span<const RingPoly> y,
                            const DecodeOptions& opts = {});

/// Decode c * Q with H, take the systematic part z and return z * S.
BlockVec decrypt_qcldpc(const QcLdpcSecret& secret, std::span<const RingPoly> c,
                        const DecodeOptions& opts = {});

/// Secret key file: header `qcldpc p n0 dv m t tprime`, then H_1..H_n0, the
/// S blocks row by row, and Q_1..Q_n0, one exponent list each.
void write_qcldpc_key(std::ostream& out, const QcLdpcParams& params, const QcLdpcSecret& secret);
struct QcLdpcKeyFile {
  QcLdpcParams params;
  QcLdpcSecret secret;
};
QcLdpcKeyFile read_qcldpc_key(std::istream& in);

/// Public key file: header `qcldpc-pub p n0 dv m t tprime`, then the blocks of
/// G row by row.
void write_qcldpc_public(std::ostream& out, const QcLdpcParams& params,
                         const BlockCirculantMatrix& public_g);
struct QcLdpcPublicFile {
  QcLdpcParams params;
  BlockCirculantMatrix public_g;
};
QcLdpcPublicFile read_qcldpc_public(std::istream& in);

/// Block-vector file (messages, ciphertexts): header `<tag> p blocks`, then the lists.
void write_block_vec(std::ostream& out, std::string_view tag, std::span<const RingPoly> v);
BlockVec read_block_vec(std::istream& in, std::string_view tag);

/// Every `[ ... ]` group in the stream, in order.
std::vector<RingPoly> read_support_lists(std::istream& in, std::size_t p);

}  // namespace qcmce
