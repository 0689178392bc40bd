#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qcmce/block_circulant.hpp"
#include "qcmce/error.hpp"
#include "qcmce/isd.hpp"
#include "qcmce/qcldpc.hpp"

namespace qcmce {

/// Blocks g_{i,j} of the inverse of the first k columns of the public key;
/// g_{i,j} = q_i * s_{i,j} for a key built as S^-1 G' Q^-1.
struct InverseKeyView {
  BlockCirculantMatrix g;
  std::size_t max_weight = 0;
};

/// Throws AttackFailed if the prefix is singular.
InverseKeyView invert_public_prefix(const BlockCirculantMatrix& public_g);

/// One row of the product identity: q * s_row[j] = g_{i,j} for every j.
struct RowFactorization {
  RingPoly q;
  BlockVec s_row;
  std::size_t candidates_tested = 0;  // subsets tried (first strategy)
  std::size_t stern_iterations = 0;   // second strategy
};

/// x^-e * v for the e in supp(v) that makes the support lexicographically smallest.
/// Returns the shift e (0 for the zero polynomial).
std::size_t canonical_shift(const RingPoly& v);
RingPoly canonical_rotation(const RingPoly& v);

/// Rotates (q, s) to (x^-e q, x^e s) with e = canonical_shift(q).
RowFactorization canonicalize(RowFactorization f);

/// Whether q * s_row[j] = g_row[j] for all j, with weight(q) = q_weight and
/// weight(s_row[j]) = s_weights[j].
bool verify_factorization(const RowFactorization& f, std::span<const RingPoly> g_row,
                          std::span<const std::size_t> s_weights, std::size_t q_weight);

/// First strategy: q_weight-subsets u of supp(g_row[c]) in lexicographic order,
/// for c = 0, 1, ... until one is accepted: u invertible and
/// weight(u^-1 g_row[j]) = s_weights[j] for all j. Throws StrategyFailure.
RowFactorization strategy1_factor(std::span<const RingPoly> g_row, std::span<const std::size_t> s_weights,
                                  std::size_t q_weight);

/// Second strategy: with pivot c the first invertible block, searches the code
/// generated by (g_row[j] / g_row[c])_j for a codeword of weight sum(s_weights)
/// and reads s_row off its blocks. Finds that fail verification are discarded
/// and the search is repeated on a new stream. Throws StrategyFailure.
RowFactorization strategy2_factor(std::span<const RingPoly> g_row, std::span<const std::size_t> s_weights,
                                  std::size_t q_weight, const SternParams& stern, std::uint64_t seed,
                                  std::size_t workers = 1);

struct ExtractionReport {
  QcLdpcSecret secret;  // H', S', Q' consistent with the public key
  std::size_t pivot = 0;
  std::size_t stern_iterations = 0;
  std::size_t stern_runs = 0;
  std::size_t factor_candidates = 0;
};

/// Raised when extraction stops part way; `recovered` holds the blocks found.
class ExtractionFailure : public PartialResult {
 public:
  ExtractionFailure(std::string stage, const std::string& what, QcLdpcSecret recovered)
      : PartialResult(std::move(stage), what), recovered_(std::move(recovered)) {}
  const QcLdpcSecret& recovered() const noexcept { return recovered_; }

 private:
  QcLdpcSecret recovered_;
};

/// Recovers H_1..H_n0 and Q_n0 from the public key and the row factorizations.
/// A_i = (G_<=k^-1 G_last)_i / q_i gives B_{i,c} = reciprocal(A_i / A_c), a weight
/// (n0-1)dv search in (B_{i,c})_i gives the H_i, and f = (A_i / reciprocal(H_i))^-1
/// is split into weights (m, dv) by subset enumeration.
ExtractionReport extract_secret(const BlockCirculantMatrix& public_g, const InverseKeyView& view,
                                std::span<const RowFactorization> rows, const QcLdpcParams& params,
                                const SternParams& stern, std::uint64_t seed, std::size_t workers = 1);

/// Weights are right and H' annihilates S' G Q'.
bool verify_recovered_key(const BlockCirculantMatrix& public_g, const QcLdpcSecret& key,
                          const QcLdpcParams& params);

/// Both parity-check rows define the same code once each block is rotated to
/// its canonical position (rank of the stacked expansions).
bool same_code_up_to_shift(std::span<const RingPoly> h1, std::span<const RingPoly> h2);

struct ProductIdentityReport {
  std::vector<bool> holds;           // row-major over the (n0-1)^2 blocks
  std::vector<std::size_t> weights;  // weight of each g_{i,j}
  std::size_t max_weight = 0;
  bool pattern_ok = false;  // S block weights follow the parity pattern
  bool all_hold() const;
};

/// Rebuilds the public key from a full secret key and checks
/// g_{i,j} = q_i * s_{i,j} block by block.
ProductIdentityReport check_product_identity(const QcLdpcParams& params, const QcLdpcSecret& secret);

struct QcLdpcAttackOptions {
  int strategy = 2;
  SternParams row_stern{2, 10, 20000};
  SternParams extract_stern{2, 10, 20000};
  std::uint64_t seed = 1;
  std::size_t workers = 1;
};

struct QcLdpcAttackReport {
  int strategy = 2;
  std::size_t prefix_max_weight = 0;
  std::vector<RowFactorization> rows;
  ExtractionReport extraction;
  bool verified = false;
};

/// Full key recovery. Throws AttackFailed on a parameter mismatch or singular
/// prefix, PartialResult (or ExtractionFailure) when a later stage fails.
QcLdpcAttackReport attack_qcldpc(const BlockCirculantMatrix& public_g, const QcLdpcParams& params,
                                 const QcLdpcAttackOptions& options = {});

}  // namespace qcmce
