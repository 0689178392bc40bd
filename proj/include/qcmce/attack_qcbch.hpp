#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qcmce/bin_matrix.hpp"
#include "qcmce/block_circulant.hpp"
#include "qcmce/qcbch.hpp"

namespace qcmce {

struct SystemSize {
  std::uint64_t unknowns = 0;
  std::uint64_t equations = 0;
};

/// n0^2 unknowns and p^2 (k0-1)(n0-k0) equations.
SystemSize system_dimensions(const QcBchParams& params);

/// Linear system on the entries of X = Pi^-1, flattened row-major: column
/// s*n0 + r holds X[s][r]. Only independent equations are kept.
struct PermSystem {
  std::size_t p = 0;
  std::size_t n0 = 0;
  std::size_t h_rows = 0;
  std::size_t g_rows = 0;
  std::size_t equations_emitted = 0;
  IncrementalBasis basis{0};

  std::size_t unknowns() const noexcept { return n0 * n0; }
  BinMatrix coeff() const { return basis.as_matrix(); }
};

/// Equation contributed by one H0 row and one public row, both in blocked
/// coordinates: the coefficient of X[s][r] is <h block r, g block s>.
BitVec perm_equation(const BitVec& h_row, const BitVec& g_row, std::size_t p, std::size_t n0);

/// `h_blocked` is H0 with columns already moved by block_reorder.
/// Emits every (public row, H0 row) equation.
PermSystem build_perm_system(const BinMatrix& h_blocked, const BlockCirculantMatrix& gpub);

/// Reads X as a block permutation: returns perm with X[j][perm[j]] = 1, or
/// nothing if X is not a permutation matrix.
std::optional<std::vector<std::size_t>> perm_from_inverse_matrix(const BitVec& x, std::size_t n0);

/// Permutations in the solution space. The span is screened when its
/// dimension exceeds one (up to 2^20 vectors). Throws AttackFailed if none.
std::vector<std::vector<std::size_t>> solve_perm(const PermSystem& system);

/// Whether undoing `perm` on every public row gives a codeword of the code
/// with parity-check matrix `h0` (cyclic coordinates). Checked by multiplication.
bool verify_qcbch_perm(const BinMatrix& h0, const BlockCirculantMatrix& gpub,
                       std::span<const std::size_t> perm);

struct QcBchCandidateReport {
  std::uint32_t prim_poly = 0;
  std::size_t equations_used = 0;
  std::size_t rank = 0;
  std::size_t nullspace_dim = 0;
  bool verified = false;
};

struct QcBchAttackReport {
  bool success = false;
  std::vector<std::size_t> perm;  // recovered secret permutation, 0-based
  std::uint32_t prim_poly = 0;
  std::size_t candidates_total = 0;
  std::vector<QcBchCandidateReport> candidates;  // those examined, in order
  std::string failure;
};

/// Attack one candidate field polynomial with incremental early termination.
QcBchCandidateReport attack_qcbch_candidate(const BlockCirculantMatrix& gpub,
                                            const QcBchParams& params, std::uint32_t prim_poly,
                                            std::vector<std::size_t>* perm_out);

/// Tries every primitive polynomial of degree m in ascending order; the first
/// verified one wins. workers > 1 attacks candidates concurrently with the same
/// outcome. Does not throw on failure: see `success`.
QcBchAttackReport run_attack_qcbch(const BlockCirculantMatrix& gpub, const QcBchParams& params,
                                   std::size_t workers = 1);

/// As run_attack_qcbch but throws AttackFailed when no candidate verifies.
QcBchAttackReport attack_qcbch(const BlockCirculantMatrix& gpub, const QcBchParams& params,
                               std::size_t workers = 1);

}  // namespace qcmce
