#include "qcmce/attack_qcldpc.hpp"

#include <algorithm>
#include <numeric>
#include <optional>

#include "qcmce/rng.hpp"

namespace qcmce {

namespace {

constexpr std::size_t kSearchAttempts = 8;

// Calls fn(subset) for each `count`-subset of `items` in lexicographic order
// until fn returns true; returns whether it did.
template <class Fn>
bool for_each_subset_of(const std::vector<std::size_t>& items, std::size_t count, Fn&& fn) {
  const std::size_t n = items.size();
  if (count > n) return false;
  std::vector<std::size_t> idx(count);
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<std::size_t> pick(count);
  for (;;) {
    for (std::size_t a = 0; a < count; ++a) pick[a] = items[idx[a]];
    if (fn(pick)) return true;
    std::size_t i = count;
    while (i > 0 && idx[i - 1] == n - count + i - 1) --i;
    if (i == 0) return false;
    ++idx[i - 1];
    for (std::size_t j = i; j < count; ++j) idx[j] = idx[j - 1] + 1;
  }
}

std::optional<RingPoly> try_inverse(const RingPoly& u) {
  if (!is_invertible(u)) return std::nullopt;
  return ring_inv(u);
}

}  // namespace

InverseKeyView invert_public_prefix(const BlockCirculantMatrix& public_g) {
  const std::size_t r = public_g.block_rows();
  if (r == 0 || public_g.block_cols() != r + 1) {
    throw AttackFailed("invert_public_prefix: public key is not (n0-1) x n0", 0);
  }
  InverseKeyView view;
  try {
    view.g = invert_block_matrix(public_g.slice(0, r, 0, r));
  } catch (const Singular&) {
    throw AttackFailed("invert_public_prefix: first k columns are singular", 0);
  }
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) view.max_weight = std::max(view.max_weight, view.g.at(i, j).weight());
  }
  return view;
}

std::size_t canonical_shift(const RingPoly& v) {
  const auto supp = v.support();
  const std::size_t p = v.modulus();
  std::size_t best_e = 0;
  std::vector<std::size_t> best, cur;
  for (auto e : supp) {
    cur.clear();
    for (auto x : supp) cur.push_back((x + p - e) % p);
    std::sort(cur.begin(), cur.end());
    if (best.empty() || cur < best) {
      best = cur;
      best_e = e;
    }
  }
  return best_e;
}

RingPoly canonical_rotation(const RingPoly& v) {
  return v.shifted(-static_cast<long>(canonical_shift(v)));
}

RowFactorization canonicalize(RowFactorization f) {
  const long e = static_cast<long>(canonical_shift(f.q));
  f.q = f.q.shifted(-e);
  for (auto& s : f.s_row) s = s.shifted(e);
  return f;
}

bool verify_factorization(const RowFactorization& f, std::span<const RingPoly> g_row,
                          std::span<const std::size_t> s_weights, std::size_t q_weight) {
  if (f.s_row.size() != g_row.size() || s_weights.size() != g_row.size()) return false;
  if (f.q.weight() != q_weight) return false;
  for (std::size_t j = 0; j < g_row.size(); ++j) {
    if (f.s_row[j].weight() != s_weights[j] || f.q * f.s_row[j] != g_row[j]) return false;
  }
  return true;
}

RowFactorization strategy1_factor(std::span<const RingPoly> g_row, std::span<const std::size_t> s_weights,
                                  std::size_t q_weight) {
  if (g_row.empty() || s_weights.size() != g_row.size()) {
    throw DimensionMismatch("strategy1_factor: row and weight list differ");
  }
  const std::size_t p = g_row[0].modulus();
  RowFactorization found;
  std::size_t tested = 0;
  for (const auto& source : g_row) {
    const bool ok = for_each_subset_of(source.support(), q_weight, [&](const std::vector<std::size_t>& pick) {
      ++tested;
      const RingPoly u = RingPoly::from_exponents(p, pick);
      const auto inv = try_inverse(u);
      if (!inv) return false;
      BlockVec s;
      for (std::size_t j = 0; j < g_row.size(); ++j) {
        s.push_back(*inv * g_row[j]);
        if (s.back().weight() != s_weights[j]) return false;
      }
      found.q = u;
      found.s_row = std::move(s);
      return true;
    });
    if (ok && verify_factorization(found, g_row, s_weights, q_weight)) {
      found.candidates_tested = tested;
      return canonicalize(std::move(found));
    }
  }
  throw StrategyFailure("strategy1_factor: no subset of any block support factors the row (" +
                        std::to_string(tested) + " tested)");
}

RowFactorization strategy2_factor(std::span<const RingPoly> g_row, std::span<const std::size_t> s_weights,
                                  std::size_t q_weight, const SternParams& stern, std::uint64_t seed,
                                  std::size_t workers) {
  if (g_row.empty() || s_weights.size() != g_row.size()) {
    throw DimensionMismatch("strategy2_factor: row and weight list differ");
  }
  const std::size_t p = g_row[0].modulus();
  std::size_t pivot = g_row.size();
  std::optional<RingPoly> pivot_inv;
  for (std::size_t c = 0; c < g_row.size() && !pivot_inv; ++c) {
    pivot_inv = try_inverse(g_row[c]);
    pivot = c;
  }
  if (!pivot_inv) throw StrategyFailure("strategy2_factor: no invertible block in the row");

  BlockCirculantMatrix gen(p, 1, g_row.size());
  for (std::size_t j = 0; j < g_row.size(); ++j) gen.at(0, j) = g_row[j] * *pivot_inv;
  const BinMatrix bin = expand(gen);
  const std::size_t w = std::accumulate(s_weights.begin(), s_weights.end(), std::size_t{0});

  std::size_t iterations = 0;
  for (std::size_t attempt = 0; attempt < kSearchAttempts; ++attempt) {
    const auto res = stern_search(bin, w, stern, derive_seed(seed, "strategy2", attempt), workers);
    iterations += res.iterations;
    if (!res.codeword) break;
    RowFactorization f;
    f.s_row = unflatten(*res.codeword, p);
    const auto s_inv = try_inverse(f.s_row[pivot]);
    if (!s_inv) continue;
    f.q = g_row[pivot] * *s_inv;
    if (!verify_factorization(f, g_row, s_weights, q_weight)) continue;
    f.stern_iterations = iterations;
    return canonicalize(std::move(f));
  }
  throw StrategyFailure("strategy2_factor: no verified weight-" + std::to_string(w) + " codeword after " +
                        std::to_string(iterations) + " Stern iterations");
}

ExtractionReport extract_secret(const BlockCirculantMatrix& public_g, const InverseKeyView& view,
                                std::span<const RowFactorization> rows, const QcLdpcParams& params,
                                const SternParams& stern, std::uint64_t seed, std::size_t workers) {
  const std::size_t p = params.p;
  const std::size_t r = params.n0 - 1;
  if (rows.size() != r || view.g.block_rows() != r || public_g.block_cols() != r + 1) {
    throw DimensionMismatch("extract_secret: block counts differ from the parameters");
  }

  QcLdpcSecret partial;
  partial.s = BlockCirculantMatrix(p, r, r);
  for (std::size_t i = 0; i < r; ++i) {
    partial.q.push_back(rows[i].q);
    for (std::size_t j = 0; j < r; ++j) partial.s.at(i, j) = rows[i].s_row[j];
  }

  // A_i = (G_<=k^-1 G_last)_i / q_i.
  BlockVec a;
  for (std::size_t i = 0; i < r; ++i) {
    RingPoly l(p);
    for (std::size_t j = 0; j < r; ++j) l += view.g.at(i, j) * public_g.at(j, r);
    const auto qi = try_inverse(rows[i].q);
    if (!qi) throw ExtractionFailure("extract_secret", "recovered q_" + std::to_string(i + 1) + " is singular", partial);
    a.push_back(l * *qi);
  }
  std::size_t pivot = r;
  std::optional<RingPoly> a_pivot_inv;
  for (std::size_t c = 0; c < r && !a_pivot_inv; ++c) {
    a_pivot_inv = try_inverse(a[c]);
    pivot = c;
  }
  if (!a_pivot_inv) throw ExtractionFailure("extract_secret", "no invertible H_j among the first n0-1", partial);

  BlockCirculantMatrix gen(p, 1, r);
  for (std::size_t i = 0; i < r; ++i) gen.at(0, i) = reciprocal(a[i] * *a_pivot_inv);
  const BinMatrix bin = expand(gen);

  ExtractionReport report;
  report.pivot = pivot;
  for (std::size_t attempt = 0; attempt < kSearchAttempts; ++attempt) {
    const auto res = stern_search(bin, r * params.dv, stern, derive_seed(seed, "extract", attempt), workers);
    report.stern_iterations += res.iterations;
    ++report.stern_runs;
    if (!res.codeword) break;
    BlockVec h = unflatten(*res.codeword, p);
    if (std::any_of(h.begin(), h.end(), [&](const RingPoly& v) { return v.weight() != params.dv; })) continue;
    const auto rc_inv = try_inverse(reciprocal(h[pivot]));
    if (!rc_inv) continue;
    const auto f = try_inverse(a[pivot] * *rc_inv);
    if (!f) continue;

    // f = (shift of) reciprocal(H_n0) * q_n0.
    std::optional<RingPoly> q_last, h_last;
    for_each_subset_of(f->support(), params.q_weight, [&](const std::vector<std::size_t>& pick) {
      ++report.factor_candidates;
      const RingPoly u = RingPoly::from_exponents(p, pick);
      const auto u_inv = try_inverse(u);
      if (!u_inv) return false;
      const RingPoly v = *u_inv * *f;
      if (v.weight() != params.dv || !is_invertible(v)) return false;
      q_last = canonical_rotation(u);
      h_last = reciprocal(ring_inv(*q_last) * *f);
      return true;
    });
    if (!q_last) continue;

    // Each H' block with the global shift that puts H'_1 in canonical position.
    const long tau = -static_cast<long>(canonical_shift(h[0]));
    QcLdpcSecret key = partial;
    for (auto& hj : h) key.h.push_back(hj.shifted(tau));
    key.h.push_back(h_last->shifted(tau));
    key.q.push_back(*q_last);
    if (!verify_recovered_key(public_g, key, params)) continue;
    report.secret = std::move(key);
    return report;
  }
  partial.h.clear();
  throw ExtractionFailure("extract_secret", "no verified weight-" + std::to_string(r * params.dv) +
                                                " codeword after " + std::to_string(report.stern_iterations) +
                                                " Stern iterations",
                          partial);
}

bool verify_recovered_key(const BlockCirculantMatrix& public_g, const QcLdpcSecret& key,
                          const QcLdpcParams& params) {
  const std::size_t n0 = params.n0;
  if (key.h.size() != n0 || key.q.size() != n0 || key.s.block_rows() != n0 - 1 ||
      key.s.block_cols() != n0 - 1 || public_g.block_rows() != n0 - 1 || public_g.block_cols() != n0) {
    return false;
  }
  for (std::size_t j = 0; j < n0; ++j) {
    if (key.h[j].weight() != params.dv || key.q[j].weight() != params.q_weight) return false;
  }
  for (std::size_t i = 0; i + 1 < n0; ++i) {
    for (std::size_t j = 0; j + 1 < n0; ++j) {
      if (key.s.at(i, j).weight() != s_block_weight(params, i, j)) return false;
    }
  }
  if (!is_invertible(key.h[n0 - 1])) return false;
  BlockCirculantMatrix m = block_mul(key.s, public_g);
  for (std::size_t i = 0; i + 1 < n0; ++i) {
    BlockVec row;
    for (std::size_t j = 0; j < n0; ++j) row.push_back(m.at(i, j) * key.q[j]);
    if (!ldpc_syndrome(key.h, row).is_zero()) return false;
  }
  return true;
}

bool same_code_up_to_shift(std::span<const RingPoly> h1, std::span<const RingPoly> h2) {
  if (h1.size() != h2.size() || h1.empty()) return false;
  const std::size_t p = h1[0].modulus();
  BlockCirculantMatrix a(p, 1, h1.size()), b(p, 1, h2.size());
  for (std::size_t j = 0; j < h1.size(); ++j) {
    if (h2[j].modulus() != p) return false;
    a.at(0, j) = canonical_rotation(h1[j]);
    b.at(0, j) = canonical_rotation(h2[j]);
  }
  const BinMatrix ea = expand(a), eb = expand(b);
  std::vector<BitVec> stacked;
  for (std::size_t r = 0; r < ea.rows(); ++r) stacked.push_back(ea.row(r));
  for (std::size_t r = 0; r < eb.rows(); ++r) stacked.push_back(eb.row(r));
  const std::size_t ra = rank(ea);
  return ra == rank(eb) && ra == rank(BinMatrix::from_rows(stacked, ea.cols()));
}

bool ProductIdentityReport::all_hold() const {
  return !holds.empty() && std::all_of(holds.begin(), holds.end(), [](bool b) { return b; });
}

ProductIdentityReport check_product_identity(const QcLdpcParams& params, const QcLdpcSecret& secret) {
  const std::size_t r = params.n0 - 1;
  const InverseKeyView view = invert_public_prefix(public_from_secret(secret));
  ProductIdentityReport rep;
  rep.max_weight = view.max_weight;
  rep.pattern_ok = true;
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) {
      rep.holds.push_back(view.g.at(i, j) == secret.q[i] * secret.s.at(i, j));
      rep.weights.push_back(view.g.at(i, j).weight());
      if (secret.s.at(i, j).weight() != s_block_weight(params, i, j)) rep.pattern_ok = false;
    }
  }
  return rep;
}

QcLdpcAttackReport attack_qcldpc(const BlockCirculantMatrix& public_g, const QcLdpcParams& params,
                                 const QcLdpcAttackOptions& options) {
  try {
    params.validate();
  } catch (const DegenerateParameters& e) {
    throw AttackFailed(std::string("attack_qcldpc: ") + e.what(), 0);
  }
  if (public_g.modulus() != params.p || public_g.block_rows() != params.n0 - 1 ||
      public_g.block_cols() != params.n0) {
    throw AttackFailed("attack_qcldpc: public key shape does not match p = " + std::to_string(params.p) +
                           ", n0 = " + std::to_string(params.n0),
                       0);
  }
  if (options.strategy != 1 && options.strategy != 2) {
    throw AttackFailed("attack_qcldpc: strategy must be 1 or 2", 0);
  }

  QcLdpcAttackReport report;
  report.strategy = options.strategy;
  const InverseKeyView view = invert_public_prefix(public_g);
  report.prefix_max_weight = view.max_weight;

  const std::size_t r = params.n0 - 1;
  for (std::size_t i = 0; i < r; ++i) {
    BlockVec g_row;
    std::vector<std::size_t> weights;
    for (std::size_t j = 0; j < r; ++j) {
      g_row.push_back(view.g.at(i, j));
      weights.push_back(s_block_weight(params, i, j));
    }
    try {
      report.rows.push_back(options.strategy == 1
                                ? strategy1_factor(g_row, weights, params.q_weight)
                                : strategy2_factor(g_row, weights, params.q_weight, options.row_stern,
                                                   derive_seed(options.seed, "attack.row", i), options.workers));
    } catch (const StrategyFailure& e) {
      throw PartialResult("factor row " + std::to_string(i + 1), e.what());
    }
  }

  report.extraction = extract_secret(public_g, view, report.rows, params, options.extract_stern,
                                     derive_seed(options.seed, "attack.extract"), options.workers);
  report.verified = verify_recovered_key(public_g, report.extraction.secret, params);
  if (!report.verified) throw PartialResult("verify", "recovered key does not annihilate the public code");
  return report;
}

}  // namespace qcmce
