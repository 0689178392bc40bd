#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <cstddef>
#include <cstdint>
#include <optional>

#include "qcmce/bin_matrix.hpp"

namespace qcmce {

using BigInt = boost::multiprecision::mpz_int;
using BigRational = boost::multiprecision::mpq_rational;

struct SternParams {
  std::size_t g = 2;    // rows combined per half
  std::size_t ell = 8;  // collision window
  std::size_t max_iterations = 100000;
};

/// Exact binomial coefficient; zero when r > n.
BigInt binomial(std::size_t n, std::size_t r);
/// log2 of a positive integer or rational, accurate to double precision.
double log2_big(const BigInt& v);
double log2_big(const BigRational& v);

struct WorkFactor {
  BigRational iteration_cost;  // N
  BigRational success_prob;    // P_w
  double a_w = 1;
  double log2_iteration_cost = 0;
  double log2_success_prob = 0;
  double log2_total = 0;  // log2 N - log2 P_w - log2 A_w
};

/// Stern cost model. The information set is split into halves of floor(k/2)
/// and ceil(k/2) columns. Throws InfeasibleParameters if g or ell is out of
/// range or the success probability is zero.
WorkFactor stern_workfactor(std::size_t n, std::size_t k, std::size_t w, const SternParams& params,
                            double a_w);

struct OptimizedWorkFactor {
  SternParams params;
  WorkFactor work;
};

/// Minimises log2 Omega over 1 <= g <= g_max, 1 <= ell <= ell_max.
OptimizedWorkFactor optimize_stern(std::size_t n, std::size_t k, std::size_t w, double a_w,
                                   std::size_t g_max = 8, std::size_t ell_max = 200);

/// log2(C(m^2, m) * p^2).
double first_strategy_cost(std::size_t m, std::size_t p);

struct SternResult {
  std::optional<BitVec> codeword;  // weight exactly w, in the row space of gen
  std::size_t iterations = 0;
};

/// Stern search for a weight-w codeword in the row space of a full-rank
/// generator (ell <= 64). Workers draw from separate streams of `seed` and the
/// first success stops the others; one worker is bit-reproducible.
SternResult stern_search(const BinMatrix& gen, std::size_t w, const SternParams& params,
                         std::uint64_t seed, std::size_t workers = 1);

}  // namespace qcmce
