#include "qcmce/attack_qcbch.hpp"

#include <atomic>
#include <bit>
#include <thread>

#include "qcmce/bch.hpp"
#include "qcmce/error.hpp"

namespace qcmce {

SystemSize system_dimensions(const QcBchParams& params) {
  const std::uint64_t p = params.p;
  const std::uint64_t n0 = params.n0;
  const std::uint64_t k0 = params.k0;
  const std::uint64_t rest = n0 >= k0 ? n0 - k0 : 0;
  return {n0 * n0, p * p * (k0 >= 1 ? k0 - 1 : 0) * rest};
}

namespace {

using Blocks = std::vector<RingPoly>;

Blocks split_blocks(const BitVec& v, std::size_t p, std::size_t n0) {
  Blocks out;
  out.reserve(n0);
  for (std::size_t b = 0; b < n0; ++b) out.push_back(RingPoly::from_bits(p, v.words(), b * p));
  return out;
}

bool inner_parity(const RingPoly& a, const RingPoly& b) {
  const auto wa = a.words();
  const auto wb = b.words();
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < wa.size(); ++i) acc ^= wa[i] & wb[i];
  return (std::popcount(acc) & 1) != 0;
}

BitVec equation_from_blocks(const Blocks& h, const Blocks& g) {
  const std::size_t n0 = h.size();
  BitVec eq(n0 * n0);
  for (std::size_t s = 0; s < n0; ++s) {
    for (std::size_t r = 0; r < n0; ++r) {
      if (inner_parity(h[r], g[s])) eq.set(s * n0 + r, true);
    }
  }
  return eq;
}

/// Blocks of expanded public row i*p + shift.
Blocks public_row_blocks(const BlockCirculantMatrix& gpub, std::size_t i, std::size_t shift) {
  Blocks out;
  out.reserve(gpub.block_cols());
  for (std::size_t s = 0; s < gpub.block_cols(); ++s) {
    out.push_back(gpub.at(i, s).shifted(static_cast<long>(shift)));
  }
  return out;
}

std::vector<Blocks> h_blocks(const BinMatrix& h_blocked, std::size_t p, std::size_t n0) {
  std::vector<Blocks> out;
  out.reserve(h_blocked.rows());
  for (std::size_t r = 0; r < h_blocked.rows(); ++r) {
    out.push_back(split_blocks(h_blocked.row(r), p, n0));
  }
  return out;
}

constexpr std::size_t kMaxScreenDim = 20;

std::vector<std::vector<std::size_t>> screen_span(const std::vector<BitVec>& basis,
                                                  std::size_t n0) {
  std::vector<std::vector<std::size_t>> found;
  if (basis.empty() || basis.size() > kMaxScreenDim) return found;
  BitVec acc(n0 * n0);
  // Gray-code walk over all nonzero combinations.
  for (std::uint64_t i = 1; i < (std::uint64_t{1} << basis.size()); ++i) {
    acc ^= basis[static_cast<std::size_t>(std::countr_zero(i))];
    if (auto perm = perm_from_inverse_matrix(acc, n0)) found.push_back(std::move(*perm));
  }
  return found;
}

}  // namespace

BitVec perm_equation(const BitVec& h_row, const BitVec& g_row, std::size_t p, std::size_t n0) {
  if (h_row.size() != p * n0 || g_row.size() != p * n0) {
    throw DimensionMismatch("perm_equation: rows must have p*n0 entries");
  }
  return equation_from_blocks(split_blocks(h_row, p, n0), split_blocks(g_row, p, n0));
}

PermSystem build_perm_system(const BinMatrix& h_blocked, const BlockCirculantMatrix& gpub) {
  const std::size_t p = gpub.modulus();
  const std::size_t n0 = gpub.block_cols();
  if (h_blocked.cols() != p * n0) {
    throw DimensionMismatch("build_perm_system: H0 has " + std::to_string(h_blocked.cols()) +
                            " columns, public code length is " + std::to_string(p * n0));
  }
  PermSystem sys;
  sys.p = p;
  sys.n0 = n0;
  sys.h_rows = h_blocked.rows();
  sys.g_rows = gpub.block_rows() * p;
  sys.basis = IncrementalBasis(n0 * n0);
  const auto hb = h_blocks(h_blocked, p, n0);
  for (std::size_t i = 0; i < gpub.block_rows(); ++i) {
    for (std::size_t shift = 0; shift < p; ++shift) {
      const auto g = public_row_blocks(gpub, i, shift);
      for (const auto& h : hb) {
        sys.basis.insert(equation_from_blocks(h, g));
        ++sys.equations_emitted;
      }
    }
  }
  return sys;
}

std::optional<std::vector<std::size_t>> perm_from_inverse_matrix(const BitVec& x, std::size_t n0) {
  if (x.size() != n0 * n0 || x.weight() != n0) return std::nullopt;
  std::vector<std::size_t> perm(n0, n0);
  std::vector<bool> col_used(n0, false);
  for (auto idx : x.support()) {
    const std::size_t row = idx / n0;
    const std::size_t col = idx % n0;
    if (perm[row] != n0 || col_used[col]) return std::nullopt;
    perm[row] = col;
    col_used[col] = true;
  }
  return perm;
}

std::vector<std::vector<std::size_t>> solve_perm(const PermSystem& system) {
  const auto basis = system.basis.nullspace();
  std::vector<std::vector<std::size_t>> found;
  if (basis.size() == 1) {
    if (auto perm = perm_from_inverse_matrix(basis[0], system.n0)) found.push_back(*perm);
  } else {
    found = screen_span(basis, system.n0);
  }
  if (found.empty()) {
    throw AttackFailed("no permutation matrix in a solution space of dimension " +
                           std::to_string(basis.size()),
                       basis.size());
  }
  return found;
}

bool verify_qcbch_perm(const BinMatrix& h0, const BlockCirculantMatrix& gpub,
                       std::span<const std::size_t> perm) {
  const std::size_t p = gpub.modulus();
  const std::size_t n0 = gpub.block_cols();
  if (perm.size() != n0 || h0.cols() != p * n0) return false;
  // G = G^pi * Pi^-1 with Pi^-1 = Pi^T.
  const BinMatrix secret = expand(gpub) * block_permutation_matrix(perm, p).transpose();
  // Back to cyclic coordinates: blocked column c came from index reorder^-1(c).
  BinMatrix cyclic(secret.rows(), secret.cols());
  for (std::size_t r = 0; r < secret.rows(); ++r) {
    for (auto c : secret.row(r).support()) cyclic.set(r, block_reorder_inverse(c, p, n0), true);
  }
  return (h0 * cyclic.transpose()).is_zero();
}

QcBchCandidateReport attack_qcbch_candidate(const BlockCirculantMatrix& gpub,
                                            const QcBchParams& params, std::uint32_t prim_poly,
                                            std::vector<std::size_t>* perm_out) {
  QcBchCandidateReport rep;
  rep.prim_poly = prim_poly;
  const std::size_t p = gpub.modulus();
  const std::size_t n0 = gpub.block_cols();
  const std::size_t unknowns = n0 * n0;

  const BchCode code = bch_generator(params.m, params.t, prim_poly);
  const BinMatrix h_blocked = reorder_columns(code.parity_check, p, n0);
  const auto hb = h_blocks(h_blocked, p, n0);

  IncrementalBasis basis(unknowns);
  std::size_t checked_rank = 0;
  auto try_solution = [&]() -> bool {
    const auto ns = basis.nullspace();
    rep.rank = basis.rank();
    rep.nullspace_dim = ns.size();
    if (ns.size() != 1) return false;
    auto perm = perm_from_inverse_matrix(ns[0], n0);
    if (!perm || !verify_qcbch_perm(code.parity_check, gpub, *perm)) return false;
    rep.verified = true;
    if (perm_out) *perm_out = std::move(*perm);
    return true;
  };

  for (std::size_t i = 0; i < gpub.block_rows(); ++i) {
    for (std::size_t shift = 0; shift < p; ++shift) {
      const auto g = public_row_blocks(gpub, i, shift);
      for (const auto& h : hb) {
        ++rep.equations_used;
        if (!basis.insert(equation_from_blocks(h, g))) continue;
        if (basis.rank() == unknowns) {
          rep.rank = unknowns;
          rep.nullspace_dim = 0;
          return rep;
        }
        if (basis.rank() + 1 == unknowns && basis.rank() != checked_rank) {
          checked_rank = basis.rank();
          if (try_solution()) return rep;
        }
      }
    }
  }

  // System exhausted without an early verified solution.
  const auto ns = basis.nullspace();
  rep.rank = basis.rank();
  rep.nullspace_dim = ns.size();
  for (auto& perm : screen_span(ns, n0)) {
    if (verify_qcbch_perm(code.parity_check, gpub, perm)) {
      rep.verified = true;
      if (perm_out) *perm_out = std::move(perm);
      break;
    }
  }
  return rep;
}

QcBchAttackReport run_attack_qcbch(const BlockCirculantMatrix& gpub, const QcBchParams& params,
                                   std::size_t workers) {
  QcBchAttackReport report;
  const std::size_t field_len = params.m >= 2 && params.m <= 16 ? (std::size_t{1} << params.m) - 1 : 0;
  if (gpub.modulus() * gpub.block_cols() != field_len) {
    report.failure = "public code length " + std::to_string(gpub.modulus() * gpub.block_cols()) +
                     " does not match 2^m - 1 = " + std::to_string(field_len);
    return report;
  }
  const auto polys = enumerate_primitive_polys(params.m);
  report.candidates_total = polys.size();

  if (workers <= 1) {
    for (auto poly : polys) {
      std::vector<std::size_t> perm;
      report.candidates.push_back(attack_qcbch_candidate(gpub, params, poly, &perm));
      if (report.candidates.back().verified) {
        report.success = true;
        report.perm = std::move(perm);
        report.prim_poly = poly;
        return report;
      }
    }
  } else {
    // Candidates are claimed in order; once a candidate verifies, later ones are
    // skipped, and the reported prefix is the same as in sequential mode.
    std::vector<QcBchCandidateReport> reps(polys.size());
    std::vector<std::vector<std::size_t>> perms(polys.size());
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> first_success{polys.size()};
    auto work = [&]() {
      for (;;) {
        const std::size_t idx = next.fetch_add(1);
        if (idx >= polys.size() || idx > first_success.load()) return;
        reps[idx] = attack_qcbch_candidate(gpub, params, polys[idx], &perms[idx]);
        if (reps[idx].verified) {
          std::size_t cur = first_success.load();
          while (idx < cur && !first_success.compare_exchange_weak(cur, idx)) {
          }
        }
      }
    };
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
    const std::size_t win = first_success.load();
    for (std::size_t i = 0; i < polys.size() && i <= win; ++i) report.candidates.push_back(reps[i]);
    if (win < polys.size()) {
      report.success = true;
      report.perm = std::move(perms[win]);
      report.prim_poly = polys[win];
      return report;
    }
  }
  report.failure = "no candidate primitive polynomial yields a verified permutation";
  return report;
}

QcBchAttackReport attack_qcbch(const BlockCirculantMatrix& gpub, const QcBchParams& params,
                               std::size_t workers) {
  auto report = run_attack_qcbch(gpub, params, workers);
  if (!report.success) {
    const std::size_t dim = report.candidates.empty() ? 0 : report.candidates.back().nullspace_dim;
    throw AttackFailed(report.failure, dim);
  }
  return report;
}

}  // namespace qcmce
