#include "qcmce/gf2x.hpp"

#include <bit>
#include <stdexcept>
#include <utility>

namespace qcmce::gf2x {

Poly Poly::from_mask(std::uint64_t mask) {
  Poly r;
  if (mask != 0) r.words_.push_back(mask);
  return r;
}

Poly Poly::monomial(std::size_t e) {
  Poly r;
  r.set(e, true);
  return r;
}

Poly Poly::from_words(std::vector<std::uint64_t> words) {
  Poly r;
  r.words_ = std::move(words);
  r.trim();
  return r;
}

long Poly::degree() const noexcept {
  if (words_.empty()) return -1;
  const std::uint64_t top = words_.back();
  return static_cast<long>(64 * (words_.size() - 1) + 63 - std::countl_zero(top));
}

bool Poly::coeff(std::size_t i) const noexcept {
  const std::size_t w = i / 64;
  return w < words_.size() && ((words_[w] >> (i % 64)) & 1U);
}

void Poly::set(std::size_t i, bool value) {
  const std::size_t w = i / 64;
  if (w >= words_.size()) {
    if (!value) return;
    words_.resize(w + 1, 0);
  }
  const std::uint64_t bit = std::uint64_t{1} << (i % 64);
  if (value) {
    words_[w] |= bit;
  } else {
    words_[w] &= ~bit;
    trim();
  }
}

std::size_t Poly::weight() const noexcept {
  std::size_t w = 0;
  for (auto x : words_) w += static_cast<std::size_t>(std::popcount(x));
  return w;
}

void Poly::add_shifted(const Poly& other, std::size_t shift) {
  if (other.is_zero()) return;
  const std::size_t wo = shift / 64;
  const unsigned bo = shift % 64;
  const std::size_t needed = other.words_.size() + wo + 1;
  if (words_.size() < needed) words_.resize(needed, 0);
  for (std::size_t i = 0; i < other.words_.size(); ++i) {
    words_[i + wo] ^= other.words_[i] << bo;
    if (bo != 0) words_[i + wo + 1] ^= other.words_[i] >> (64 - bo);
  }
  trim();
}

Poly Poly::operator+(const Poly& other) const {
  Poly r = *this;
  r.add_shifted(other, 0);
  return r;
}

Poly Poly::operator*(const Poly& other) const {
  const Poly& sparse = weight() <= other.weight() ? *this : other;
  const Poly& dense = &sparse == this ? other : *this;
  Poly r;
  for (std::size_t w = 0; w < sparse.words_.size(); ++w) {
    std::uint64_t bits = sparse.words_[w];
    while (bits != 0) {
      const int b = std::countr_zero(bits);
      bits &= bits - 1;
      r.add_shifted(dense, 64 * w + static_cast<std::size_t>(b));
    }
  }
  return r;
}

void Poly::trim() {
  while (!words_.empty() && words_.back() == 0) words_.pop_back();
}

DivMod divmod(const Poly& a, const Poly& b) {
  if (b.is_zero()) throw std::domain_error("gf2x::divmod: division by zero");
  DivMod out{Poly{}, a};
  const long db = b.degree();
  for (long dr = out.remainder.degree(); dr >= db; dr = out.remainder.degree()) {
    const auto shift = static_cast<std::size_t>(dr - db);
    out.remainder.add_shifted(b, shift);
    out.quotient.set(shift, true);
  }
  return out;
}

Poly gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    a = divmod(a, b).remainder;
    std::swap(a, b);
  }
  return a;
}

Poly x_pow_n_minus_one(std::size_t n) {
  Poly r = Poly::monomial(n);
  r.set(0, true);
  return r;
}

}  // namespace qcmce::gf2x
