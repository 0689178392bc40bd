#pragma once

#include <cstddef>
#include <cstdint>

namespace qcmce {

/// Upper bound w*m(m-1)/(p-w) on the chance that x^l*q meets (x^l1+...+x^lw)*q
/// for a random l outside {l1..lw}.
double collision_bound(std::size_t p, std::size_t m, std::size_t w);
/// Lower bound (1 - m(m-1)/(p-1))^(m-1) on supp(x^l q) being inside supp(q*s).
double containment_bound(std::size_t p, std::size_t m);
/// Lower bound prod_{w=1}^{m-1} (1 - w*m(m-1)/(p-w)) on weight(q*s) = m^2.
double full_weight_bound(std::size_t p, std::size_t m);

struct Frequency {
  std::size_t hits = 0;
  std::size_t trials = 0;
  double value() const noexcept;
  /// sqrt(f(1-f)/N)
  double sigma() const noexcept;
};

struct ProductStatistics {
  Frequency collision;    // x^l1 q and x^l q overlap, l != l1
  Frequency containment;  // supp(x^l1 q) inside supp(q*s), l1 a random exponent of s
  Frequency full_weight;  // weight(q*s) = m^2
};

/// Draws q and s of weight m uniformly in R_p, `trials` times.
ProductStatistics simulate_products(std::size_t p, std::size_t m, std::size_t trials, std::uint64_t seed);

}  // namespace qcmce
