// Acceptance run: one PASS/FAIL line per criterion, exit 1 if any fails.
// Thresholds and time limits are fixed below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <string>
#include <vector>

#include "qcmce/attack_qcbch.hpp"
#include "qcmce/attack_qcldpc.hpp"
#include "qcmce/bch.hpp"
#include "qcmce/block_circulant.hpp"
#include "qcmce/error.hpp"
#include "qcmce/isd.hpp"
#include "qcmce/probabilities.hpp"
#include "qcmce/qcbch.hpp"
#include "qcmce/qcldpc.hpp"
#include "qcmce/rng.hpp"

#ifndef QCMCE_FIXTURE
#define QCMCE_FIXTURE "ldpc_p4032.key"
#endif

using namespace qcmce;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  bool pass = false;
  std::string detail;
};

char buf[512];

template <class... A>
std::string fmt(const char* f, A... a) {
  std::snprintf(buf, sizeof buf, f, a...);
  return buf;
}

RingPoly random_poly(Rng& rng, std::size_t p) {
  RingPoly r(p);
  for (std::size_t i = 0; i < p; ++i) r.set(i, rng.coin());
  return r;
}

BlockCirculantMatrix random_block(Rng& rng, std::size_t p, std::size_t r, std::size_t c) {
  BlockCirculantMatrix b(p, r, c);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < c; ++j) b.at(i, j) = random_poly(rng, p);
  }
  return b;
}

Outcome system_sizes() {
  const auto pb = QcBchParams::preset("paper-b");
  const auto pa = QcBchParams::preset("paper-a");
  const auto t0 = Clock::now();
  const auto b = system_dimensions(pb);
  const auto a = system_dimensions(pa);
  const double dt = seconds_since(t0);
  const bool ok = b.unknowns == 529 && b.equations == 316840 && a.unknowns == 2025 && a.equations == 695604;
  return {ok && dt < 1e-3,
          fmt("B=(%llu, %llu) A=(%llu, %llu) %.2e s", (unsigned long long)b.unknowns,
              (unsigned long long)b.equations, (unsigned long long)a.unknowns,
              (unsigned long long)a.equations, dt)};
}

Outcome primitive_count() {
  const auto t0 = Clock::now();
  const auto n = enumerate_primitive_polys(11).size();
  const double dt = seconds_since(t0);
  return {n == 176 && dt < 5, fmt("%zu polynomials %.3f s", n, dt)};
}

Outcome workfactors() {
  stern_workfactor(100, 50, 5, {2, 8, 0}, 1);  // warm up the allocator
  double worst = 0;
  auto timed = [&](auto f) {
    const auto t0 = Clock::now();
    const double v = f();
    worst = std::max(worst, seconds_since(t0));
    return v;
  };
  const double w21 = timed([] { return stern_workfactor(12096, 4032, 21, {3, 43, 0}, 4032).log2_total; });
  const double w39 = timed([] { return stern_workfactor(12096, 4032, 39, {3, 43, 0}, 4032).log2_total; });
  const double first = timed([] { return first_strategy_cost(7, 4032); });
  const bool ok = std::abs(w21 - 32) <= 1 && std::abs(w39 - 37) <= 1 && std::abs(first - 50.3) <= 0.05;
  return {ok && worst < 1e-3,
          fmt("w=21: %.3f  w=39: %.3f  first strategy: %.3f  slowest %.2e s", w21, w39, first, worst)};
}

Outcome decoding_estimate() {
  const auto t0 = Clock::now();
  const auto best = optimize_stern(16128, 12096, 27, 1);
  const double dt = seconds_since(t0);
  const double v = best.work.log2_total;
  return {v >= 75.5 && v <= 81.5 && dt < 10,
          fmt("%.3f bits at g=%zu ell=%zu, target [75.5, 81.5]  %.3f s", v, best.params.g, best.params.ell, dt)};
}

Outcome probability_bounds() {
  const auto t0 = Clock::now();
  const double bound = containment_bound(4032, 7);
  const double formula = std::pow(1.0 - 42.0 / 4031.0, 6);
  const auto st = simulate_products(4032, 7, 10000, 1);
  const double dt = seconds_since(t0);
  const bool analytic = std::abs(bound - formula) < 1e-12 && bound >= 0.939 && std::round(bound * 100) == 94;
  const bool contain = st.containment.value() >= bound - 3 * st.containment.sigma();
  const bool full = st.full_weight.value() >= 0.79 - 3 * st.full_weight.sigma();
  return {analytic && contain && full && dt < 60,
          fmt("bound %.4f  containment %.4f  full weight %.4f  %.2f s", bound, st.containment.value(),
              st.full_weight.value(), dt)};
}

Outcome singular_s() {
  const auto t0 = Clock::now();
  std::size_t ok = 0;
  std::size_t total = 0;
  Rng rng(6, "acceptance.singular");
  for (std::size_t p : {101, 4032}) {
    for (int trial = 0; trial < 100; ++trial) {
      BlockCirculantMatrix s(p, 3, 3);
      for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t j = 0; j < 3; ++j) s.at(i, j) = RingPoly::from_exponents(p, rng.sample_subset(p, 7));
      }
      bool good = !poly_det(s).eval_at_one();
      if (p == 101) good = good && rank(expand(s)) < 3 * p;
      ok += good;
      ++total;
    }
  }
  const double dt = seconds_since(t0);
  return {ok == total && dt < 30, fmt("%zu/%zu singular  %.2f s", ok, total, dt)};
}

Outcome qcbch_attack() {
  const QcBchParams params{6, 2, 9, 7, 6};
  const auto prims = enumerate_primitive_polys(params.m);
  std::size_t recovered = 0;
  double slowest = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const std::uint32_t prim = prims[derive_seed(seed, "acceptance.prim") % prims.size()];
    const auto key = keygen_qcbch(params, prim, seed);
    const auto t0 = Clock::now();
    const auto res = run_attack_qcbch(key.public_gen, params);
    slowest = std::max(slowest, seconds_since(t0));
    bool dim_one = false;
    for (const auto& c : res.candidates) {
      if (c.prim_poly == prim) dim_one = c.nullspace_dim == 1;
    }
    recovered += res.success && dim_one && res.perm == key.perm;
  }
  return {recovered >= 19 && slowest < 10, fmt("%zu/20 recovered  slowest %.3f s", recovered, slowest)};
}

Outcome qcldpc_attack() {
  const auto params = QcLdpcParams::preset("desk");
  std::size_t recovered = 0;
  std::size_t agree = 0;
  double slowest = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto key = keygen_qcldpc(params, seed);
    QcLdpcAttackOptions opts;
    opts.seed = seed;
    const auto t0 = Clock::now();
    QcLdpcAttackReport second;
    try {
      second = attack_qcldpc(key.public_g, params, opts);
    } catch (const Error&) {
      slowest = std::max(slowest, seconds_since(t0));
      continue;
    }
    slowest = std::max(slowest, seconds_since(t0));
    const bool same = second.verified && same_code_up_to_shift(second.extraction.secret.h, key.secret.h);
    recovered += same;
    if (seed > 5) continue;
    opts.strategy = 1;
    const auto t1 = Clock::now();
    try {
      const auto first = attack_qcldpc(key.public_g, params, opts);
      bool rows_equal = first.rows.size() == second.rows.size();
      for (std::size_t i = 0; rows_equal && i < first.rows.size(); ++i) {
        rows_equal = first.rows[i].q == second.rows[i].q && first.rows[i].s_row == second.rows[i].s_row;
      }
      agree += same && first.verified && rows_equal &&
               same_code_up_to_shift(first.extraction.secret.h, second.extraction.secret.h);
    } catch (const Error&) {
    }
    slowest = std::max(slowest, seconds_since(t1));
  }
  return {recovered == 10 && agree == 5 && slowest < 60,
          fmt("strategy 2: %zu/10  strategies agree: %zu/5  slowest %.3f s", recovered, agree, slowest)};
}

Outcome fixture(const std::string& path) {
  const auto t0 = Clock::now();
  std::ifstream in(path);
  if (!in) return {false, "cannot open " + path};
  const auto key = read_qcldpc_key(in);
  const auto res = check_product_identity(key.params, key.secret);
  const double dt = seconds_since(t0);
  const bool zeros = key.secret.s.at(1, 1).weight() == 6 && key.secret.s.at(2, 0).weight() == 6;
  const bool ok = res.all_hold() && res.max_weight <= 49 && res.pattern_ok && zeros;
  return {ok && dt < 10, fmt("identity on 9 blocks: %s  max weight %zu  S22/S31 weights %zu/%zu  %.3f s",
                             res.all_hold() ? "yes" : "no", res.max_weight, key.secret.s.at(1, 1).weight(),
                             key.secret.s.at(2, 0).weight(), dt)};
}

Outcome algebra_properties() {
  constexpr int kCases = 10000;
  const auto t0 = Clock::now();
  Rng rng(10, "acceptance.algebra");
  int iso = 0;
  int parity = 0;
  int incl = 0;
  int round = 0;
  int inv = 0;
  for (int c = 0; c < kCases; ++c) {
    const std::size_t p = 1 + rng.uniform(96);
    const auto u = random_poly(rng, p);
    const auto v = random_poly(rng, p);
    iso += circulant(u * v) == circulant(u) * circulant(v);

    const auto b = random_block(rng, 2 + rng.uniform(40), 3, 3);
    parity += f2_det(weight_parity_pattern(b)) == poly_det(b).eval_at_one();

    incl += (u + v).weight() == u.weight() + v.weight() - 2 * star(u, v).weight();

    const std::size_t rows = 1 + rng.uniform(3);
    const std::size_t cols = 1 + rng.uniform(3);
    const auto r = random_block(rng, 1 + rng.uniform(70), rows, cols);
    round += collapse(expand(r), r.modulus()) == r;

    const auto sq = random_block(rng, 2 + rng.uniform(40), rows, rows);
    if (is_invertible(poly_det(sq))) {
      const auto si = block_inverse(sq);
      const auto id = BlockCirculantMatrix::identity(sq.modulus(), rows);
      inv += block_mul(sq, si) == id && block_mul(si, sq) == id;
    } else {
      try {
        block_inverse(sq);
      } catch (const Singular&) {
        inv += rank(expand(sq)) < rows * sq.modulus();
      }
    }
  }
  const double dt = seconds_since(t0);
  const bool ok = iso == kCases && parity == kCases && incl == kCases && round == kCases && inv == kCases;
  return {ok && dt < 60, fmt("isomorphism %d  weight parity %d  inclusion-exclusion %d  expand/collapse %d  "
                             "block inverse %d (of %d each)  %.2f s",
                             iso, parity, incl, round, inv, kCases, dt)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string fixture_path = argc > 1 ? argv[1] : QCMCE_FIXTURE;
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"system sizes", system_sizes},
      {"primitive polynomial count", primitive_count},
      {"work factors", workfactors},
      {"decoding attack estimate", decoding_estimate},
      {"probability bounds", probability_bounds},
      {"singular all-weight-m S", singular_s},
      {"QC-BCH attack", qcbch_attack},
      {"QC-LDPC attack", qcldpc_attack},
      {"p=4032 key fixture", [&] { return fixture(fixture_path); }},
      {"algebra properties", algebra_properties},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s criterion %2zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed ? 1 : 0;
}
