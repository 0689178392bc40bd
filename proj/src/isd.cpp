#include "qcmce/isd.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <map>
#include <mutex>
#include <thread>
#include <utility>
#include <vector>

#include "qcmce/error.hpp"
#include "qcmce/rng.hpp"

namespace qcmce {

namespace mp = boost::multiprecision;

BigInt binomial(std::size_t n, std::size_t r) {
  BigInt out;
  if (r <= n) mpz_bin_uiui(out.backend().data(), n, r);
  return out;
}

double log2_big(const BigInt& v) {
  if (v <= 0) throw OutOfRange("log2_big: non-positive argument");
  const std::size_t top = mp::msb(v);
  if (top < 53) return std::log2(v.convert_to<double>());
  const std::size_t shift = top - 52;
  const BigInt head = v >> shift;
  return std::log2(head.convert_to<double>()) + static_cast<double>(shift);
}

double log2_big(const BigRational& v) {
  return log2_big(BigInt(mp::numerator(v))) - log2_big(BigInt(mp::denominator(v)));
}

namespace {

struct Shape {
  std::size_t k1, k2;
};

Shape check_stern_shape(std::size_t n, std::size_t k, std::size_t w, const SternParams& params) {
  if (k == 0 || k >= n) throw InfeasibleParameters("stern: need 0 < k < n");
  const Shape s{k / 2, k - k / 2};
  const std::size_t g = params.g;
  if (g == 0 || g > s.k1) throw InfeasibleParameters("stern: need 0 < g <= k/2");
  if (params.ell == 0 || params.ell > n - k) throw InfeasibleParameters("stern: need 0 < ell <= n-k");
  // Every binomial argument must stay non-negative.
  if (w < 2 * g || w > n || n - w < s.k1 - g || n - s.k1 < w - g + (s.k2 - g) ||
      n - k + 2 * g < w || n - k + 2 * g - w < params.ell) {
    throw InfeasibleParameters("stern: binomial arguments underflow for these parameters");
  }
  return s;
}

}  // namespace

WorkFactor stern_workfactor(std::size_t n, std::size_t k, std::size_t w, const SternParams& params,
                            double a_w) {
  if (!(a_w > 0)) throw InfeasibleParameters("stern: A_w must be positive");
  const auto [k1, k2] = check_stern_shape(n, k, w, params);
  const std::size_t g = params.g, ell = params.ell, r = n - k;

  const BigInt c1 = binomial(k1, g), c2 = binomial(k2, g);
  WorkFactor wf;
  wf.iteration_cost = BigRational(BigInt(r) * r * r, 2) + BigInt(k) * r * r + BigInt(g * ell) * (c1 + c2) +
                      BigRational(BigInt(2 * g * r) * c1 * c2, BigInt(1) << ell);
  wf.success_prob = BigRational(binomial(w, g) * binomial(n - w, k1 - g), binomial(n, k1)) *
                    BigRational(binomial(w - g, g) * binomial(n - k1 - w + g, k2 - g), binomial(n - k1, k2)) *
                    BigRational(binomial(r - w + 2 * g, ell), binomial(r, ell));
  if (wf.success_prob == 0) throw InfeasibleParameters("stern: success probability is zero");
  wf.a_w = a_w;
  wf.log2_iteration_cost = log2_big(wf.iteration_cost);
  wf.log2_success_prob = log2_big(wf.success_prob);
  wf.log2_total = wf.log2_iteration_cost - wf.log2_success_prob - std::log2(a_w);
  return wf;
}

OptimizedWorkFactor optimize_stern(std::size_t n, std::size_t k, std::size_t w, double a_w,
                                   std::size_t g_max, std::size_t ell_max) {
  std::map<std::pair<std::size_t, std::size_t>, double> cache;
  auto lb = [&](std::size_t a, std::size_t b) {
    auto [it, fresh] = cache.try_emplace({a, b}, 0.0);
    if (fresh) {
      const BigInt v = binomial(a, b);
      it->second = v == 0 ? -INFINITY : log2_big(v);
    }
    return it->second;
  };

  const std::size_t k1 = k / 2, k2 = k - k / 2, r = n - k;
  std::optional<SternParams> best;
  double best_bits = INFINITY;
  for (std::size_t g = 1; g <= g_max; ++g) {
    for (std::size_t ell = 1; ell <= ell_max; ++ell) {
      const SternParams sp{g, ell, 0};
      try {
        check_stern_shape(n, k, w, sp);
      } catch (const InfeasibleParameters&) {
        continue;
      }
      const double rd = static_cast<double>(r);
      const double c1 = std::exp2(lb(k1, g)), c2 = std::exp2(lb(k2, g));
      const double cost = rd * rd * rd / 2 + static_cast<double>(k) * rd * rd +
                          static_cast<double>(g * ell) * (c1 + c2) +
                          2.0 * static_cast<double>(g) * rd * c1 * c2 * std::exp2(-static_cast<double>(ell));
      const double lp = lb(w, g) + lb(n - w, k1 - g) - lb(n, k1) + lb(w - g, g) + lb(n - k1 - w + g, k2 - g) -
                        lb(n - k1, k2) + lb(r - w + 2 * g, ell) - lb(r, ell);
      const double bits = std::log2(cost) - lp - std::log2(a_w);
      if (std::isfinite(bits) && bits < best_bits) {
        best_bits = bits;
        best = sp;
      }
    }
  }
  if (!best) throw InfeasibleParameters("optimize_stern: no feasible grid point");
  OptimizedWorkFactor out;
  out.params = *best;
  out.params.max_iterations = SternParams{}.max_iterations;
  out.work = stern_workfactor(n, k, w, out.params, a_w);
  return out;
}

double first_strategy_cost(std::size_t m, std::size_t p) {
  const BigInt v = binomial(m * m, m) * p * p;
  if (v == 0) throw InfeasibleParameters("first_strategy_cost: p must be positive");
  return log2_big(v);
}

namespace {

// Calls fn(indices) for every g-subset of [0, size) in lexicographic order.
template <class Fn>
void for_each_subset(std::size_t size, std::size_t g, Fn&& fn) {
  if (g > size) return;
  std::vector<std::size_t> idx(g);
  for (std::size_t i = 0; i < g; ++i) idx[i] = i;
  for (;;) {
    fn(idx);
    std::size_t i = g;
    while (i > 0 && idx[i - 1] == size - g + i - 1) --i;
    if (i == 0) return;
    ++idx[i - 1];
    for (std::size_t j = i; j < g; ++j) idx[j] = idx[j - 1] + 1;
  }
}

constexpr std::size_t kDirectTableBits = 20;

class SternWorker {
 public:
  SternWorker(const BinMatrix& gen, std::size_t w, const SternParams& params)
      : gen_(gen), w_(w), params_(params), k_(gen.rows()), n_(gen.cols()), k1_(k_ / 2) {}

  // One iteration; returns a codeword in original coordinates on success.
  std::optional<BitVec> iterate(Rng& rng) {
    const auto perm = rng.permutation(n_);
    BinMatrix m(k_, n_);
    for (std::size_t c = 0; c < n_; ++c) {
      for (std::size_t r = 0; r < k_; ++r) {
        if (gen_.get(r, perm[c])) m.set(r, c, true);
      }
    }
    const auto red = rref(std::move(m));
    const BinMatrix& sys = red.reduced;
    std::vector<bool> is_pivot(n_, false);
    for (auto c : red.pivots) is_pivot[c] = true;
    std::vector<std::size_t> window;
    for (std::size_t c = 0; c < n_ && window.size() < params_.ell; ++c) {
      if (!is_pivot[c]) window.push_back(c);
    }

    std::vector<std::uint64_t> key(k_, 0);
    for (std::size_t r = 0; r < k_; ++r) {
      for (std::size_t b = 0; b < window.size(); ++b) {
        if (sys.get(r, window[b])) key[r] |= std::uint64_t{1} << b;
      }
    }

    const std::size_t g = params_.g;
    left_keys_.clear();
    left_sets_.clear();
    for_each_subset(k1_, g, [&](const std::vector<std::size_t>& idx) {
      std::uint64_t s = 0;
      for (auto i : idx) s ^= key[i];
      left_keys_.push_back(s);
      left_sets_.insert(left_sets_.end(), idx.begin(), idx.end());
    });

    const bool direct = params_.ell <= kDirectTableBits;
    std::vector<std::uint32_t> order;
    if (direct) {
      head_.assign(std::size_t{1} << params_.ell, -1);
      next_.assign(left_keys_.size(), -1);
      for (std::size_t a = 0; a < left_keys_.size(); ++a) {
        next_[a] = head_[left_keys_[a]];
        head_[left_keys_[a]] = static_cast<std::int32_t>(a);
      }
    } else {
      order.resize(left_keys_.size());
      for (std::size_t a = 0; a < order.size(); ++a) order[a] = static_cast<std::uint32_t>(a);
      std::sort(order.begin(), order.end(), [&](auto x, auto y) {
        return std::pair(left_keys_[x], x) < std::pair(left_keys_[y], y);
      });
    }

    std::optional<BitVec> found;
    BitVec right(n_), sum(n_);
    auto test_pair = [&](std::size_t a) {
      sum = right;
      for (std::size_t i = 0; i < g; ++i) sum ^= sys.row(left_sets_[a * g + i]);
      if (sum.weight() != w_) return false;
      BitVec out(n_);
      for (auto c : sum.support()) out.set(perm[c], true);
      found = std::move(out);
      return true;
    };

    for_each_subset(k_ - k1_, g, [&](const std::vector<std::size_t>& idx) {
      if (found) return;
      std::uint64_t s = 0;
      for (auto i : idx) s ^= key[k1_ + i];
      right = BitVec(n_);
      for (auto i : idx) right ^= sys.row(k1_ + i);
      if (direct) {
        for (auto a = head_[s]; a >= 0 && !found; a = next_[a]) test_pair(static_cast<std::size_t>(a));
      } else {
        auto it = std::lower_bound(order.begin(), order.end(), s,
                                   [&](std::uint32_t x, std::uint64_t v) { return left_keys_[x] < v; });
        for (; it != order.end() && left_keys_[*it] == s && !found; ++it) test_pair(*it);
      }
    });
    return found;
  }

 private:
  const BinMatrix& gen_;
  std::size_t w_;
  SternParams params_;
  std::size_t k_, n_, k1_;
  std::vector<std::uint64_t> left_keys_;
  std::vector<std::size_t> left_sets_;
  std::vector<std::int32_t> head_, next_;
};

}  // namespace

SternResult stern_search(const BinMatrix& gen, std::size_t w, const SternParams& params,
                         std::uint64_t seed, std::size_t workers) {
  const std::size_t k = gen.rows(), n = gen.cols();
  if (k == 0 || k >= n) throw InfeasibleParameters("stern_search: need 0 < k < n");
  if (params.g == 0 || params.g > k / 2) throw InfeasibleParameters("stern_search: need 0 < g <= k/2");
  if (params.ell == 0 || params.ell > n - k || params.ell > 64) {
    throw InfeasibleParameters("stern_search: need 0 < ell <= min(n-k, 64)");
  }
  if (rank(gen) != k) throw DegenerateParameters("stern_search: generator is not full rank");
  workers = std::max<std::size_t>(workers, 1);

  SternResult result;
  std::atomic<std::size_t> claimed{0};
  std::atomic<bool> stop{false};
  std::mutex mu;

  auto run = [&](std::size_t index) {
    Rng rng(seed, "stern", index);
    SternWorker worker(gen, w, params);
    while (!stop.load(std::memory_order_relaxed)) {
      const std::size_t it = claimed.fetch_add(1);
      if (it >= params.max_iterations) return;
      auto cw = worker.iterate(rng);
      if (cw) {
        std::lock_guard lock(mu);
        if (!result.codeword) {
          result.codeword = std::move(cw);
          result.iterations = it + 1;
          stop = true;
        }
        return;
      }
    }
  };

  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::thread> pool;
    for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(run, i);
    for (auto& t : pool) t.join();
  }
  if (!result.codeword) result.iterations = std::min(claimed.load(), params.max_iterations);
  return result;
}

}  // namespace qcmce
