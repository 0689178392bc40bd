#include "qcmce/qcldpc.hpp"

#include <algorithm>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>
#include <string>

#include "qcmce/error.hpp"
#include "qcmce/rng.hpp"

namespace qcmce {

void QcLdpcParams::validate() const {
  if (p < 2 || n0 < 2) throw DegenerateParameters("qcldpc: need p >= 2 and n0 >= 2");
  if (dv == 0 || dv >= p) throw DegenerateParameters("qcldpc: need 0 < dv < p");
  if (q_weight == 0 || q_weight % 2 == 0 || q_weight >= p) {
    throw DegenerateParameters("qcldpc: q_weight must be odd and below p");
  }
  if (t_prime * q_weight > t) throw DegenerateParameters("qcldpc: t_prime * q_weight exceeds t");
}

QcLdpcParams QcLdpcParams::preset(std::string_view name) {
  if (name == "paper-ldpc") return {4032, 4, 13, 7, 190, 27};
  if (name == "desk") return {101, 4, 5, 3, 6, 2};
  throw OutOfRange("unknown qcldpc preset '" + std::string(name) + "'");
}

BinMatrix s_tilde_pattern(std::size_t size) {
  BinMatrix s(size, size);
  if (size == 3) {
    const int rows[3][3] = {{1, 1, 1}, {1, 0, 1}, {0, 1, 1}};
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) s.set(i, j, rows[i][j] != 0);
    }
    return s;
  }
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = i; j < size; ++j) s.set(i, j, true);
  }
  return s;
}

std::size_t s_block_weight(const QcLdpcParams& params, std::size_t i, std::size_t j) {
  return s_tilde_pattern(params.n0 - 1).get(i, j) ? params.q_weight : params.q_weight - 1;
}

std::size_t s_row_weight(const QcLdpcParams& params, std::size_t i) {
  std::size_t w = 0;
  for (std::size_t j = 0; j + 1 < params.n0; ++j) w += s_block_weight(params, i, j);
  return w;
}

BlockCirculantMatrix invert_block_matrix(const BlockCirculantMatrix& b) {
  constexpr std::size_t kExpansionLimit = 2048;
  if (b.modulus() * b.block_rows() <= kExpansionLimit || b.block_rows() > 4) return block_inverse(b);
  return block_inverse_adjugate(b);
}

BlockCirculantMatrix systematic_generator(std::span<const RingPoly> h) {
  if (h.size() < 2) throw DimensionMismatch("systematic_generator: need at least two blocks");
  const std::size_t p = h[0].modulus();
  const std::size_t r = h.size() - 1;
  const RingPoly h_last_inv = ring_inv(h[r]);
  BlockCirculantMatrix out(p, r, r + 1);
  for (std::size_t i = 0; i < r; ++i) {
    out.at(i, i) = RingPoly::one(p);
    out.at(i, r) = reciprocal(h_last_inv * h[i]);
  }
  return out;
}

BlockCirculantMatrix public_from_secret(const QcLdpcSecret& secret) {
  const std::size_t n0 = secret.h.size();
  if (n0 < 2 || secret.q.size() != n0 || secret.s.block_rows() != n0 - 1 ||
      secret.s.block_cols() != n0 - 1) {
    throw DimensionMismatch("public_from_secret: inconsistent block counts");
  }
  const auto gprime = systematic_generator(secret.h);
  const auto s_inv = invert_block_matrix(secret.s);
  BlockCirculantMatrix g = block_mul(s_inv, gprime);
  for (std::size_t j = 0; j < n0; ++j) {
    const RingPoly qi = ring_inv(secret.q[j]);
    for (std::size_t i = 0; i + 1 < n0; ++i) g.at(i, j) = g.at(i, j) * qi;
  }
  return g;
}

namespace {

RingPoly draw_weight(Rng& rng, std::size_t p, std::size_t w) {
  const auto e = rng.sample_subset(p, w);
  return RingPoly::from_exponents(p, e);
}

}  // namespace

QcLdpcKeyPair keygen_qcldpc(const QcLdpcParams& params, std::uint64_t seed,
                            std::size_t redraw_budget) {
  params.validate();
  const std::size_t p = params.p;
  const std::size_t n0 = params.n0;
  QcLdpcKeyPair key;
  key.params = params;

  auto& h = key.secret.h;
  for (std::size_t j = 0; j < n0; ++j) {
    Rng rng(seed, "qcldpc.h", j);
    h.push_back(draw_weight(rng, p, params.dv));
  }
  {
    Rng rng(seed, "qcldpc.h.redraw");
    while (!is_invertible(h[n0 - 1])) {
      if (++key.h_redraws > redraw_budget) {
        throw DegenerateParameters("qcldpc: no invertible H_n0 within the redraw budget");
      }
      h[n0 - 1] = draw_weight(rng, p, params.dv);
    }
  }

  const std::size_t r = n0 - 1;
  Rng srng(seed, "qcldpc.s");
  for (;;) {
    BlockCirculantMatrix s(p, r, r);
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < r; ++j) s.at(i, j) = draw_weight(srng, p, s_block_weight(params, i, j));
    }
    const bool ok = r <= 4 ? is_invertible(poly_det(s)) : rank(expand(s)) == p * r;
    if (ok) {
      key.secret.s = std::move(s);
      break;
    }
    if (++key.s_redraws > redraw_budget) {
      throw DegenerateParameters("qcldpc: no invertible S within the redraw budget");
    }
  }

  for (std::size_t j = 0; j < n0; ++j) {
    Rng rng(seed, "qcldpc.q", j);
    RingPoly qj = draw_weight(rng, p, params.q_weight);
    while (!is_invertible(qj)) {
      if (++key.q_redraws > redraw_budget) {
        throw DegenerateParameters("qcldpc: no invertible q within the redraw budget");
      }
      qj = draw_weight(rng, p, params.q_weight);
    }
    key.secret.q.push_back(std::move(qj));
  }

  key.public_g = public_from_secret(key.secret);
  return key;
}

BlockVec vec_block_mul(std::span<const RingPoly> x, const BlockCirculantMatrix& m) {
  if (x.size() != m.block_rows()) throw DimensionMismatch("vec_block_mul: length mismatch");
  BlockVec out(m.block_cols(), RingPoly(m.modulus()));
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].is_zero()) continue;
    for (std::size_t j = 0; j < m.block_cols(); ++j) out[j] += x[i] * m.at(i, j);
  }
  return out;
}

BitVec flatten(std::span<const RingPoly> blocks) {
  if (blocks.empty()) return {};
  const std::size_t p = blocks[0].modulus();
  BitVec out(p * blocks.size());
  for (std::size_t j = 0; j < blocks.size(); ++j) {
    for (auto e : blocks[j].support()) out.set(j * p + e, true);
  }
  return out;
}

BlockVec unflatten(const BitVec& word, std::size_t p) {
  if (p == 0 || word.size() % p != 0) throw DimensionMismatch("unflatten: length is not a multiple of p");
  BlockVec out;
  for (std::size_t j = 0; j < word.size() / p; ++j) out.push_back(RingPoly::from_bits(p, word.words(), j * p));
  return out;
}

BlockVec encrypt_qcldpc(const BlockCirculantMatrix& public_g, std::span<const RingPoly> x,
                        std::size_t t_prime, std::uint64_t seed) {
  BlockVec c = vec_block_mul(x, public_g);
  const std::size_t p = public_g.modulus();
  Rng rng(seed, "qcldpc.error");
  for (auto pos : rng.sample_subset(p * c.size(), t_prime)) c[pos / p].flip(pos % p);
  return c;
}

RingPoly ldpc_syndrome(std::span<const RingPoly> h, std::span<const RingPoly> y) {
  if (h.size() != y.size() || h.empty()) throw DimensionMismatch("ldpc_syndrome: block count");
  RingPoly s(h[0].modulus());
  for (std::size_t j = 0; j < h.size(); ++j) s += y[j] * reciprocal(h[j]);
  return s;
}

DecodeResult bitflip_decode(std::span<const RingPoly> h, std::span<const RingPoly> y,
                            const DecodeOptions& opts) {
  if (h.size() != y.size() || h.empty()) throw DimensionMismatch("bitflip_decode: block count");
  const std::size_t p = h[0].modulus();
  std::vector<std::vector<std::size_t>> supp;
  std::size_t dv = 0;
  for (const auto& hj : h) {
    supp.push_back(hj.support());
    dv = std::max(dv, supp.back().size());
  }
  const std::size_t majority = dv / 2 + 1;

  DecodeResult res;
  std::vector<std::uint8_t> sigma(p);
  std::vector<std::size_t> count(p * h.size());
  Rng coin(derive_seed(0, "qcldpc.decode"));
  for (std::size_t attempt = 0; attempt <= opts.restarts; ++attempt) {
    BlockVec word(y.begin(), y.end());
    for (std::size_t round = 0;; ++round) {
      const RingPoly s = ldpc_syndrome(h, word);
      if (s.is_zero()) {
        res.word = std::move(word);
        return res;
      }
      if (round == opts.max_iter) break;
      ++res.iterations;
      for (std::size_t r = 0; r < p; ++r) sigma[r] = s.coeff(r) ? 1 : 0;
      std::size_t best = 0;
      for (std::size_t j = 0; j < h.size(); ++j) {
        for (std::size_t a = 0; a < p; ++a) {
          std::size_t c = 0;
          for (auto e : supp[j]) c += sigma[(a + p - e) % p];
          count[j * p + a] = c;
          best = std::max(best, c);
        }
      }
      const std::size_t threshold = opts.rule == FlipRule::majority ? majority : best;
      if (best < threshold) break;
      for (std::size_t j = 0; j < h.size(); ++j) {
        for (std::size_t a = 0; a < p; ++a) {
          if (count[j * p + a] >= threshold && (attempt == 0 || coin.coin())) word[j].flip(a);
        }
      }
    }
  }
  throw DecodeFailure(res.iterations);
}

BlockVec decrypt_qcldpc(const QcLdpcSecret& secret, std::span<const RingPoly> c,
                        const DecodeOptions& opts) {
  const std::size_t n0 = secret.h.size();
  if (c.size() != n0 || secret.q.size() != n0) throw DimensionMismatch("decrypt_qcldpc: block count");
  BlockVec y;
  for (std::size_t j = 0; j < n0; ++j) y.push_back(c[j] * secret.q[j]);
  const auto decoded = bitflip_decode(secret.h, y, opts);
  const std::span<const RingPoly> z(decoded.word.data(), n0 - 1);
  return vec_block_mul(z, secret.s);
}

std::vector<RingPoly> read_support_lists(std::istream& in, std::size_t p) {
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  std::vector<RingPoly> out;
  std::size_t pos = 0;
  for (;;) {
    const auto open = text.find('[', pos);
    if (open == std::string::npos) {
      if (text.find(']', pos) != std::string::npos) throw ParseError("unbalanced ']' in exponent lists");
      break;
    }
    const auto close = text.find(']', open);
    if (close == std::string::npos) throw ParseError("unterminated exponent list");
    out.push_back(parse_support(std::string_view(text).substr(open, close - open + 1), p));
    pos = close + 1;
  }
  return out;
}

namespace {

QcLdpcParams read_params_header(std::istream& in, std::string_view tag) {
  std::string line;
  while (std::getline(in, line) && line.find_first_not_of(" \t\r") == std::string::npos) {
  }
  std::istringstream header(line);
  std::string got;
  QcLdpcParams pr;
  header >> got >> pr.p >> pr.n0 >> pr.dv >> pr.q_weight >> pr.t >> pr.t_prime;
  if (!header || got != tag) throw ParseError("expected a '" + std::string(tag) + "' header");
  pr.validate();
  return pr;
}

void write_params_header(std::ostream& out, std::string_view tag, const QcLdpcParams& pr) {
  out << tag << ' ' << pr.p << ' ' << pr.n0 << ' ' << pr.dv << ' ' << pr.q_weight << ' ' << pr.t
      << ' ' << pr.t_prime << '\n';
}

}  // namespace

void write_qcldpc_key(std::ostream& out, const QcLdpcParams& params, const QcLdpcSecret& secret) {
  write_params_header(out, "qcldpc", params);
  for (const auto& v : secret.h) out << format_support(v) << '\n';
  for (std::size_t i = 0; i < secret.s.block_rows(); ++i) {
    for (std::size_t j = 0; j < secret.s.block_cols(); ++j) out << format_support(secret.s.at(i, j)) << '\n';
  }
  for (const auto& v : secret.q) out << format_support(v) << '\n';
}

QcLdpcKeyFile read_qcldpc_key(std::istream& in) {
  QcLdpcKeyFile key;
  key.params = read_params_header(in, "qcldpc");
  const std::size_t n0 = key.params.n0;
  const std::size_t r = n0 - 1;
  const auto lists = read_support_lists(in, key.params.p);
  if (lists.size() != 2 * n0 + r * r) {
    throw ParseError("qcldpc key: expected " + std::to_string(2 * n0 + r * r) + " exponent lists, got " +
                     std::to_string(lists.size()));
  }
  auto it = lists.begin();
  key.secret.h.assign(it, it + static_cast<long>(n0));
  it += static_cast<long>(n0);
  key.secret.s = BlockCirculantMatrix(key.params.p, r, r);
  for (std::size_t i = 0; i < r; ++i) {
    for (std::size_t j = 0; j < r; ++j) key.secret.s.at(i, j) = *it++;
  }
  key.secret.q.assign(it, lists.end());
  return key;
}

void write_qcldpc_public(std::ostream& out, const QcLdpcParams& params,
                         const BlockCirculantMatrix& public_g) {
  write_params_header(out, "qcldpc-pub", params);
  for (std::size_t i = 0; i < public_g.block_rows(); ++i) {
    for (std::size_t j = 0; j < public_g.block_cols(); ++j) out << format_support(public_g.at(i, j)) << '\n';
  }
}

QcLdpcPublicFile read_qcldpc_public(std::istream& in) {
  QcLdpcPublicFile pub;
  pub.params = read_params_header(in, "qcldpc-pub");
  const std::size_t n0 = pub.params.n0;
  const auto lists = read_support_lists(in, pub.params.p);
  if (lists.size() != (n0 - 1) * n0) throw ParseError("qcldpc public key: wrong number of exponent lists");
  pub.public_g = BlockCirculantMatrix(pub.params.p, n0 - 1, n0);
  for (std::size_t i = 0; i + 1 < n0; ++i) {
    for (std::size_t j = 0; j < n0; ++j) pub.public_g.at(i, j) = lists[i * n0 + j];
  }
  return pub;
}

void write_block_vec(std::ostream& out, std::string_view tag, std::span<const RingPoly> v) {
  out << tag << ' ' << (v.empty() ? 0 : v[0].modulus()) << ' ' << v.size() << '\n';
  for (const auto& b : v) out << format_support(b) << '\n';
}

BlockVec read_block_vec(std::istream& in, std::string_view tag) {
  std::string line;
  while (std::getline(in, line) && line.find_first_not_of(" \t\r") == std::string::npos) {
  }
  std::istringstream header(line);
  std::string got;
  std::size_t p = 0;
  std::size_t blocks = 0;
  header >> got >> p >> blocks;
  if (!header || got != tag || p == 0) throw ParseError("expected a '" + std::string(tag) + "' header");
  auto lists = read_support_lists(in, p);
  if (lists.size() != blocks) throw ParseError(std::string(tag) + ": wrong number of exponent lists");
  return lists;
}

}  // namespace qcmce
