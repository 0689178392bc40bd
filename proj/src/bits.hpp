#pragma once

// Word-level helpers shared by the packed F2 containers.

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>

namespace qcmce::bits {

constexpr std::size_t words_for(std::size_t nbits) { return (nbits + 63) / 64; }

constexpr std::uint64_t low_mask(std::size_t nbits) {
  return nbits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << nbits) - 1;
}

/// 64 bits starting at bit `offset`; bits past the end of `src` read as zero.
inline std::uint64_t read64(std::span<const std::uint64_t> src, std::size_t offset) {
  const std::size_t w = offset / 64;
  const unsigned b = offset % 64;
  if (w >= src.size()) return 0;
  std::uint64_t v = src[w] >> b;
  if (b != 0 && w + 1 < src.size()) v |= src[w + 1] << (64 - b);
  return v;
}

/// dst[dst_off .. dst_off+nbits) ^= src[src_off .. src_off+nbits)
inline void xor_range(std::span<std::uint64_t> dst, std::size_t dst_off,
                      std::span<const std::uint64_t> src, std::size_t src_off,
                      std::size_t nbits) {
  while (nbits > 0) {
    const unsigned db = dst_off % 64;
    const std::size_t take = std::min<std::size_t>({nbits, 64 - db});
    const std::uint64_t chunk = read64(src, src_off) & low_mask(take);
    dst[dst_off / 64] ^= chunk << db;
    dst_off += take;
    src_off += take;
    nbits -= take;
  }
}

inline std::size_t popcount(std::span<const std::uint64_t> words) {
  std::size_t n = 0;
  for (auto w : words) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

/// Calls f(index) for every set bit in ascending order.
template <typename F>
void for_each_set_bit(std::span<const std::uint64_t> words, F&& f) {
  for (std::size_t w = 0; w < words.size(); ++w) {
    std::uint64_t x = words[w];
    while (x != 0) {
      const int b = std::countr_zero(x);
      x &= x - 1;
      f(64 * w + static_cast<std::size_t>(b));
    }
  }
}

}  // namespace qcmce::bits
