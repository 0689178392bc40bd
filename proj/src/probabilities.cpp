#include "qcmce/probabilities.hpp"

#include <cmath>

#include "qcmce/error.hpp"
#include "qcmce/ring_poly.hpp"
#include "qcmce/rng.hpp"

namespace qcmce {

namespace {

void check(std::size_t p, std::size_t m) {
  if (m == 0 || m >= p) throw DegenerateParameters("probabilities: need 0 < m < p");
}

}  // namespace

double collision_bound(std::size_t p, std::size_t m, std::size_t w) {
  check(p, m);
  if (w == 0 || w >= p) throw DegenerateParameters("collision_bound: need 0 < w < p");
  return static_cast<double>(w * m * (m - 1)) / static_cast<double>(p - w);
}

double containment_bound(std::size_t p, std::size_t m) {
  check(p, m);
  return std::pow(1.0 - collision_bound(p, m, 1), static_cast<double>(m - 1));
}

double full_weight_bound(std::size_t p, std::size_t m) {
  check(p, m);
  double q = 1.0;
  for (std::size_t w = 1; w < m; ++w) q *= 1.0 - collision_bound(p, m, w);
  return q;
}

double Frequency::value() const noexcept {
  return trials ? static_cast<double>(hits) / static_cast<double>(trials) : 0.0;
}

double Frequency::sigma() const noexcept {
  if (trials == 0) return 0.0;
  const double f = value();
  return std::sqrt(f * (1 - f) / static_cast<double>(trials));
}

ProductStatistics simulate_products(std::size_t p, std::size_t m, std::size_t trials, std::uint64_t seed) {
  check(p, m);
  Rng rng(seed, "probabilities");
  ProductStatistics out;
  for (std::size_t t = 0; t < trials; ++t) {
    const RingPoly q = RingPoly::from_exponents(p, rng.sample_subset(p, m));
    const auto s = rng.sample_subset(p, m);
    const std::size_t l1 = s[rng.uniform(m)];

    std::size_t l = rng.uniform(p - 1);
    if (l >= l1) ++l;
    const RingPoly base = q.shifted(static_cast<long>(l1));
    ++out.collision.trials;
    if (!star(base, q.shifted(static_cast<long>(l))).is_zero()) ++out.collision.hits;

    RingPoly g(p);
    for (auto e : s) g += q.shifted(static_cast<long>(e));
    ++out.containment.trials;
    if (star(base, g) == base) ++out.containment.hits;
    ++out.full_weight.trials;
    if (g.weight() == m * m) ++out.full_weight.hits;
  }
  return out;
}

}  // namespace qcmce
