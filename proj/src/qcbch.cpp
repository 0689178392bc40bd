#include "qcmce/qcbch.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "qcmce/error.hpp"
#include "qcmce/rng.hpp"

namespace qcmce {

void QcBchParams::validate() const {
  if (m < 2 || m > 16) throw DegenerateParameters("qcbch: m must lie in [2, 16]");
  const std::size_t n = (std::size_t{1} << m) - 1;
  if (p * n0 != n) {
    throw DegenerateParameters("qcbch: p*n0 = " + std::to_string(p * n0) + " but 2^m - 1 = " +
                               std::to_string(n));
  }
  if (p <= n0) throw DegenerateParameters("qcbch: p must exceed n0");
  if (k0 < 2 || k0 >= n0) throw DegenerateParameters("qcbch: need 2 <= k0 < n0");
  if (t == 0 || 2 * t >= n) throw DegenerateParameters("qcbch: need 0 < 2t < 2^m - 1");
}

QcBchParams QcBchParams::preset(std::string_view name) {
  if (name == "paper-a") return {12, 26, 91, 45, 43};
  if (name == "paper-b") return {11, 31, 89, 23, 21};
  if (name == "desk") return {6, 2, 9, 7, 6};
  throw OutOfRange("unknown qcbch preset '" + std::string(name) + "'");
}

std::size_t block_reorder(std::size_t index, std::size_t p, std::size_t n0) {
  if (index >= p * n0) throw OutOfRange("block_reorder: index out of range");
  return (index % n0) * p + index / n0;
}

std::size_t block_reorder_inverse(std::size_t index, std::size_t p, std::size_t n0) {
  if (index >= p * n0) throw OutOfRange("block_reorder_inverse: index out of range");
  return (index % p) * n0 + index / p;
}

std::vector<RingPoly> to_blocks(const BitVec& word, std::size_t p, std::size_t n0) {
  if (word.size() != p * n0) throw DimensionMismatch("to_blocks: word length is not p*n0");
  std::vector<RingPoly> blocks(n0, RingPoly(p));
  for (auto i : word.support()) blocks[i % n0].set(i / n0, true);
  return blocks;
}

BitVec from_blocks(std::span<const RingPoly> blocks) {
  if (blocks.empty()) return {};
  const std::size_t p = blocks[0].modulus();
  const std::size_t n0 = blocks.size();
  BitVec out(p * n0);
  for (std::size_t b = 0; b < n0; ++b) {
    if (blocks[b].modulus() != p) throw ModulusMismatch(p, blocks[b].modulus());
    for (auto a : blocks[b].support()) out.set(a * n0 + b, true);
  }
  return out;
}

BinMatrix reorder_columns(const BinMatrix& h, std::size_t p, std::size_t n0) {
  if (h.cols() != p * n0) throw DimensionMismatch("reorder_columns: column count is not p*n0");
  BinMatrix out(h.rows(), h.cols());
  for (std::size_t r = 0; r < h.rows(); ++r) {
    for (auto c : h.row(r).support()) out.set(r, block_reorder(c, p, n0), true);
  }
  return out;
}

BlockCirculantMatrix shift_orbit_subcode(std::span<const RingPoly> c) {
  if (c.empty()) throw DimensionMismatch("shift_orbit_subcode: empty codeword");
  BlockCirculantMatrix out(c[0].modulus(), 1, c.size());
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (c[j].modulus() != c[0].modulus()) throw ModulusMismatch(c[0].modulus(), c[j].modulus());
    out.at(0, j) = c[j];
  }
  return out;
}

namespace {

void check_permutation(std::span<const std::size_t> perm, std::size_t n0) {
  if (perm.size() != n0) throw DimensionMismatch("permutation length differs from n0");
  std::vector<bool> seen(n0, false);
  for (auto v : perm) {
    if (v >= n0 || seen[v]) throw OutOfRange("not a permutation of 0..n0-1");
    seen[v] = true;
  }
}

}  // namespace

BlockCirculantMatrix apply_block_permutation(const BlockCirculantMatrix& g,
                                             std::span<const std::size_t> perm) {
  check_permutation(perm, g.block_cols());
  BlockCirculantMatrix out(g.modulus(), g.block_rows(), g.block_cols());
  for (std::size_t i = 0; i < g.block_rows(); ++i) {
    for (std::size_t j = 0; j < g.block_cols(); ++j) out.at(i, j) = g.at(i, perm[j]);
  }
  return out;
}

BinMatrix block_permutation_matrix(std::span<const std::size_t> perm, std::size_t p) {
  check_permutation(perm, perm.size());
  BinMatrix out(perm.size() * p, perm.size() * p);
  for (std::size_t j = 0; j < perm.size(); ++j) {
    for (std::size_t r = 0; r < p; ++r) out.set(perm[j] * p + r, j * p + r, true);
  }
  return out;
}

std::size_t max_subcode_dimension(const QcBchParams& params) {
  params.validate();
  const std::size_t n = params.n();
  // Zeros of the narrow-sense code: cyclotomic cosets of 1..2t modulo n.
  std::vector<bool> zero(n, false);
  for (std::size_t j = 1; j <= 2 * params.t; ++j) {
    for (std::size_t e = j % n; !zero[e]; e = (2 * e) % n) zero[e] = true;
  }
  std::vector<std::size_t> per_class(params.p, 0);
  for (std::size_t e = 0; e < n; ++e) {
    if (!zero[e]) ++per_class[e % params.p];
  }
  std::size_t total = 0;
  for (auto r : per_class) total += std::min(r, params.k0 - 1);
  return total;
}

QcBchKeyPair keygen_qcbch(const QcBchParams& params, std::uint32_t prim_poly, std::uint64_t seed,
                          std::optional<std::vector<std::size_t>> perm,
                          std::size_t redraw_budget) {
  params.validate();
  BchCode code = bch_generator(params.m, params.t, prim_poly);
  const std::size_t rows = params.k0 - 1;
  if (params.p * rows > code.dim) {
    throw DegenerateParameters("qcbch: p*(k0-1) = " + std::to_string(params.p * rows) +
                               " exceeds the BCH dimension " + std::to_string(code.dim));
  }

  QcBchKeyPair key;
  key.params = params;
  key.dimension = max_subcode_dimension(params);
  bool found = false;
  for (std::size_t attempt = 0; attempt < redraw_budget && !found; ++attempt) {
    Rng rng(seed, "qcbch.codewords", attempt);
    BlockCirculantMatrix g(params.p, rows, params.n0);
    for (std::size_t i = 0; i < rows; ++i) {
      gf2x::Poly message;
      for (std::size_t e = 0; e < code.dim; ++e) {
        if (rng.coin()) message.set(e, true);
      }
      const auto blocks = to_blocks(bch_encode(code, message), params.p, params.n0);
      for (std::size_t j = 0; j < params.n0; ++j) g.at(i, j) = blocks[j];
    }
    if (rank(expand(g)) == key.dimension) {
      key.secret_gen = std::move(g);
      found = true;
    } else {
      ++key.redraws;
    }
  }
  if (!found) {
    throw DegenerateParameters("qcbch: no maximal-rank subcode within " +
                               std::to_string(redraw_budget) + " draws");
  }

  if (perm) {
    key.perm = std::move(*perm);
  } else {
    Rng rng(seed, "qcbch.perm");
    key.perm = rng.permutation(params.n0);
  }
  key.public_gen = apply_block_permutation(key.secret_gen, key.perm);
  key.code = std::move(code);
  return key;
}

BitVec encrypt_qcbch(const BlockCirculantMatrix& public_gen, const BitVec& message,
                     std::size_t errors, std::uint64_t seed) {
  const BinMatrix g = expand(public_gen);
  if (message.size() != g.rows()) throw DimensionMismatch("encrypt_qcbch: message length");
  if (errors > g.cols()) throw OutOfRange("encrypt_qcbch: error weight exceeds length");
  BitVec c = vec_mat_mul(message, g);
  Rng rng(seed, "qcbch.error");
  for (auto i : rng.sample_subset(g.cols(), errors)) c.flip(i);
  return c;
}

void write_qcbch_key(std::ostream& out, const QcBchKeyFile& key) {
  const auto& pr = key.params;
  out << "qcbch " << pr.m << ' ' << pr.t << ' ' << pr.p << ' ' << pr.n0 << ' ' << pr.k0 << ' '
      << format_hex(key.prim_poly) << '\n';
  if (key.perm.empty()) {
    out << "-\n";
  } else {
    for (std::size_t j = 0; j < key.perm.size(); ++j) {
      out << (j ? " " : "") << key.perm[j] + 1;
    }
    out << '\n';
  }
  for (std::size_t i = 0; i < key.public_gen.block_rows(); ++i) {
    for (std::size_t j = 0; j < key.public_gen.block_cols(); ++j) {
      out << (j ? " " : "") << format_support(key.public_gen.at(i, j));
    }
    out << '\n';
  }
}

namespace {

std::string next_line(std::istream& in, const char* what) {
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") != std::string::npos) return line;
  }
  throw ParseError(std::string("qcbch key: missing ") + what);
}

}  // namespace

QcBchKeyFile read_qcbch_key(std::istream& in) {
  QcBchKeyFile key;
  {
    std::istringstream header(next_line(in, "header"));
    std::string tag, prim;
    header >> tag >> key.params.m >> key.params.t >> key.params.p >> key.params.n0 >>
        key.params.k0 >> prim;
    if (!header || tag != "qcbch") throw ParseError("qcbch key: malformed header");
    key.prim_poly = parse_hex(prim);
  }
  key.params.validate();
  const std::size_t p = key.params.p;
  const std::size_t n0 = key.params.n0;

  {
    const std::string line = next_line(in, "permutation");
    if (line.find('-') == std::string::npos) {
      std::istringstream perm(line);
      long v = 0;
      while (perm >> v) {
        if (v < 1 || static_cast<std::size_t>(v) > n0) {
          throw ParseError("qcbch key: permutation entry out of range");
        }
        key.perm.push_back(static_cast<std::size_t>(v - 1));
      }
      if (!perm.eof()) throw ParseError("qcbch key: malformed permutation");
      try {
        check_permutation(key.perm, n0);
      } catch (const Error& e) {
        throw ParseError(std::string("qcbch key: ") + e.what());
      }
    }
  }

  key.public_gen = BlockCirculantMatrix(p, key.params.k0 - 1, n0);
  for (std::size_t i = 0; i < key.params.k0 - 1; ++i) {
    const std::string line = next_line(in, "generator row");
    std::size_t pos = 0;
    for (std::size_t j = 0; j < n0; ++j) {
      const auto open = line.find('[', pos);
      const auto close = line.find(']', open == std::string::npos ? pos : open);
      if (open == std::string::npos || close == std::string::npos) {
        throw ParseError("qcbch key: row " + std::to_string(i + 1) + " has too few blocks");
      }
      key.public_gen.at(i, j) = parse_support(line.substr(open, close - open + 1), p);
      pos = close + 1;
    }
    if (line.find('[', pos) != std::string::npos) {
      throw ParseError("qcbch key: row " + std::to_string(i + 1) + " has too many blocks");
    }
  }
  return key;
}

}  // namespace qcmce
