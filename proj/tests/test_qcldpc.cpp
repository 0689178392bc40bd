#include <doctest.h>

#include <sstream>

#include "qcmce/error.hpp"
#include "qcmce/qcldpc.hpp"
#include "test_util.hpp"

using namespace qcmce;
using qcmce::testing::random_poly;
using qcmce::testing::random_weight_poly;

namespace {

const QcLdpcParams kDesk = QcLdpcParams::preset("desk");

BlockVec random_message(Rng& rng, std::size_t p, std::size_t blocks) {
  BlockVec x;
  for (std::size_t i = 0; i < blocks; ++i) x.push_back(random_poly(rng, p));
  return x;
}

// Blocks of the inverse of the first k columns, computed on the binary expansion.
BlockCirculantMatrix prefix_inverse(const BlockCirculantMatrix& g) {
  const std::size_t r = g.block_rows();
  return collapse(inverse(expand(g.slice(0, r, 0, r))), g.modulus());
}

}  // namespace

TEST_SUITE("scheme-qcldpc") {

TEST_CASE("params and presets") {
  CHECK_NOTHROW(kDesk.validate());
  const auto full = QcLdpcParams::preset("paper-ldpc");
  CHECK(full.n() == 16128);
  CHECK(full.k() == 12096);
  CHECK_THROWS_AS((QcLdpcParams{101, 4, 5, 4, 6, 1}).validate(), DegenerateParameters);
  CHECK_THROWS_AS((QcLdpcParams{101, 4, 5, 3, 6, 3}).validate(), DegenerateParameters);
  CHECK_THROWS_AS(QcLdpcParams::preset("desk-xl"), OutOfRange);
}

TEST_CASE("S pattern") {
  const auto s3 = s_tilde_pattern(3);
  CHECK(f2_det(s3));
  CHECK_FALSE(s3.get(1, 1));
  CHECK_FALSE(s3.get(2, 0));
  CHECK(s_row_weight(kDesk, 0) == 9);
  CHECK(s_row_weight(kDesk, 1) == 8);
  CHECK(s_row_weight(kDesk, 2) == 8);
  for (std::size_t n : {1, 2, 4, 5, 7}) CHECK(f2_det(s_tilde_pattern(n)));
}

TEST_CASE("identity S and Q give the systematic generator") {
  Rng rng(3);
  QcLdpcSecret sec;
  for (std::size_t j = 0; j < 4; ++j) sec.h.push_back(random_weight_poly(rng, 101, 5));
  while (!is_invertible(sec.h[3])) sec.h[3] = random_weight_poly(rng, 101, 5);
  sec.s = BlockCirculantMatrix::identity(101, 3);
  sec.q.assign(4, RingPoly::one(101));
  const auto g = public_from_secret(sec);
  CHECK(g == systematic_generator(sec.h));
  CHECK(prefix_inverse(g) == BlockCirculantMatrix::identity(101, 3));

  // G' is orthogonal to H.
  const auto hrow = expand([&] {
    BlockCirculantMatrix h(101, 1, 4);
    for (std::size_t j = 0; j < 4; ++j) h.at(0, j) = sec.h[j];
    return h;
  }());
  CHECK((expand(g) * hrow.transpose()).is_zero());
}

TEST_CASE("desk keygen and the product identity") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const auto key = keygen_qcldpc(kDesk, seed);
    CAPTURE(seed);
    for (std::size_t j = 0; j < 4; ++j) {
      CHECK(key.secret.h[j].weight() == 5);
      CHECK(key.secret.q[j].weight() == 3);
      CHECK(is_invertible(key.secret.q[j]));
    }
    CHECK(is_invertible(key.secret.h[3]));
    CHECK(weight_parity_pattern(key.secret.s) == s_tilde_pattern(3));
    const auto g = prefix_inverse(key.public_g);
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) {
        CHECK(g.at(i, j) == key.secret.q[i] * key.secret.s.at(i, j));
        CHECK(g.at(i, j).weight() <= 9);
      }
    }
  }
}

TEST_CASE("all-weight-m S is singular") {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    BlockCirculantMatrix s(101, 3, 3);
    for (std::size_t i = 0; i < 3; ++i) {
      for (std::size_t j = 0; j < 3; ++j) s.at(i, j) = random_weight_poly(rng, 101, 3);
    }
    CHECK_FALSE(poly_det(s).eval_at_one());
  }
}

TEST_CASE("S draws with the parity pattern are invertible") {
  std::size_t first_try = 0;
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    if (keygen_qcldpc(kDesk, seed).s_redraws == 0) ++first_try;
  }
  MESSAGE("first-draw invertible S: " << first_try << "/100");
  CHECK(first_try >= 90);
}

TEST_CASE("encryption weight") {
  const auto key = keygen_qcldpc(kDesk, 2);
  Rng rng(7);
  const auto x = random_message(rng, 101, 3);
  const auto clean = vec_block_mul(x, key.public_g);
  CHECK(encrypt_qcldpc(key.public_g, x, 0, 1) == clean);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto c = encrypt_qcldpc(key.public_g, x, 2, s);
    CHECK((flatten(c) ^ flatten(clean)).weight() == 2);
  }
  CHECK(unflatten(flatten(clean), 101) == clean);
}

TEST_CASE("zero error decodes in zero rounds") {
  const auto key = keygen_qcldpc(kDesk, 4);
  Rng rng(9);
  const auto x = random_message(rng, 101, 3);
  const auto c = encrypt_qcldpc(key.public_g, x, 0, 0);
  CHECK(decrypt_qcldpc(key.secret, c) == x);
  BlockVec y;
  for (std::size_t j = 0; j < 4; ++j) y.push_back(c[j] * key.secret.q[j]);
  const auto res = bitflip_decode(key.secret.h, y);
  CHECK(res.iterations == 0);
  CHECK(res.word == y);
}

TEST_CASE("every single-bit error is corrected") {
  const auto key = keygen_qcldpc(kDesk, 5);
  const BlockVec zero(4, RingPoly(101));
  for (auto rule : {FlipRule::majority, FlipRule::max_count}) {
    std::size_t bad = 0;
    for (std::size_t pos = 0; pos < 404; ++pos) {
      BlockVec y = zero;
      y[pos / 101].flip(pos % 101);
      DecodeOptions opts;
      opts.rule = rule;
      try {
        if (bitflip_decode(key.secret.h, y, opts).word != zero) ++bad;
      } catch (const DecodeFailure&) {
        ++bad;
      }
    }
    CHECK(bad == 0);
  }
}

TEST_CASE("desk decryption rate") {
  std::size_t ok = 0;
  for (std::uint64_t msg = 0; msg < 100; ++msg) {
    const auto key = keygen_qcldpc(kDesk, 100 + msg / 10);
    Rng rng(derive_seed(msg, "test.message"));
    const auto x = random_message(rng, 101, 3);
    const auto c = encrypt_qcldpc(key.public_g, x, kDesk.t_prime, msg);
    try {
      if (decrypt_qcldpc(key.secret, c) == x) ++ok;
    } catch (const DecodeFailure&) {
    }
  }
  MESSAGE("recovered " << ok << "/100");
  CHECK(ok >= 99);
}

TEST_CASE("heavily tampered ciphertext fails cleanly") {
  const auto key = keygen_qcldpc(kDesk, 6);
  Rng rng(13);
  const auto x = random_message(rng, 101, 3);
  auto c = encrypt_qcldpc(key.public_g, x, 101, 3);
  DecodeOptions opts;
  opts.restarts = 3;
  try {
    const auto out = decrypt_qcldpc(key.secret, c, opts);
    CHECK(out.size() == 3);
  } catch (const DecodeFailure& e) {
    CHECK(e.iterations() > 0);
  }
}

TEST_CASE("key and public file round trip") {
  const auto key = keygen_qcldpc(kDesk, 8);
  std::stringstream ks;
  write_qcldpc_key(ks, kDesk, key.secret);
  const auto back = read_qcldpc_key(ks);
  CHECK(back.params == kDesk);
  CHECK(back.secret.h == key.secret.h);
  CHECK(back.secret.s == key.secret.s);
  CHECK(back.secret.q == key.secret.q);

  std::stringstream ps;
  write_qcldpc_public(ps, kDesk, key.public_g);
  const auto pub = read_qcldpc_public(ps);
  CHECK(pub.params == kDesk);
  CHECK(pub.public_g == key.public_g);

  Rng rng(1);
  const auto x = random_message(rng, 101, 3);
  std::stringstream vs;
  write_block_vec(vs, "message", x);
  CHECK(read_block_vec(vs, "message") == x);
  std::stringstream wrong(vs.str());
  CHECK_THROWS_AS(read_block_vec(wrong, "ciphertext"), ParseError);

  std::stringstream bad("qcldpc 101 4 5 3 6 2\n[ 1, 2 ]\n");
  CHECK_THROWS_AS(read_qcldpc_key(bad), ParseError);
}

}  // TEST_SUITE
