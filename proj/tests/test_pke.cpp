#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "kyberlc/pke.hpp"

using namespace kyberlc;

namespace {

Seed test_seed(std::uint8_t fill) {
  Seed s;
  s.fill(fill);
  return s;
}

RingElem random_payload(int p, std::mt19937& rng) {
  std::uniform_int_distribution<int> d(0, p - 1);
  RingElem x;
  for (auto& c : x.c) c = static_cast<std::int16_t>(d(rng));
  return x;
}

std::array<std::uint8_t, 32> payload_to_bytes(const RingElem& x) {
  std::array<std::uint8_t, 32> m{};
  for (int i = 0; i < kN; ++i)
    m[i / 8] |= static_cast<std::uint8_t>((x.c[i] & 1) << (i % 8));
  return m;
}

} // namespace

TEST_CASE("keygen is deterministic and secret coefficients honor eta1") {
  const auto& p = kyber768();
  Seed s = test_seed(1);
  KeyPair a = keygen(p, s), b = keygen(p, s);
  CHECK_EQ(a.pk.t, b.pk.t);
  CHECK_EQ(a.pk.rho, b.pk.rho);
  CHECK_EQ(a.sk.s, b.sk.s);

  for (const auto& e : a.sk.s.elems)
    for (auto c : e.c) CHECK_LE(std::abs(center_mod_q(c)), 2);

  KeyPair c = keygen(p, test_seed(2));
  CHECK_NE(c.pk.t.elems, a.pk.t.elems);
}

TEST_CASE("t = As + e recomputed from expanded randomness") {
  for (const ParamSet* p : {&kyber512(), &kyber768(), &kyber1024()}) {
    Seed s = test_seed(9);
    KeyPair kp = keygen(*p, s);
    auto a = expand_matrix(keygen_rho(s), p->k);
    auto kr = expand_key_randomness(*p, keygen_sigma(s));
    CHECK_EQ(kr.s.elems, kp.sk.s.elems);
    for (int i = 0; i < p->k; ++i) {
      RingElem ti = poly_add(inner_product(a[i], kr.s), kr.e[i]);
      CHECK_EQ(ti, kp.pk.t[i]);
    }
  }
}

TEST_CASE("KYBER512 keeps the eta1 != eta2 asymmetry") {
  const auto& p = kyber512();
  auto er = expand_enc_randomness(p, test_seed(5));
  int max_r = 0, max_e1 = 0;
  for (const auto& e : er.r.elems)
    for (auto c : e.c) max_r = std::max(max_r, std::abs(center_mod_q(c)));
  for (const auto& e : er.e1.elems)
    for (auto c : e.c) max_e1 = std::max(max_e1, std::abs(center_mod_q(c)));
  CHECK_EQ(max_r, 3);  // eta1 = 3
  CHECK_LE(max_e1, 2); // eta2 = 2
}

TEST_CASE("p=2 pipeline round-trips through threshold decode") {
  const auto& p = kyber768();
  std::mt19937 rng(42);
  KeyPair kp = keygen(p, test_seed(11));
  for (int t = 0; t < 50; ++t) {
    RingElem x = random_payload(2, rng);
    Seed es = test_seed(static_cast<std::uint8_t>(t));
    Ciphertext ct = encrypt_payload(kp.pk, x, 2, p, es);
    RingElem y = decrypt_raw(kp.sk, ct);
    CHECK_EQ(decode_bits(y), payload_to_bytes(x));
  }
}

TEST_CASE("decrypt_raw noise stays below q/4 at p=2 over 1000 trials") {
  const auto& p = kyber768();
  std::mt19937 rng(7);
  const int scale = payload_scale(2);
  int worst = 0;
  for (int t = 0; t < 1000; ++t) {
    Seed ks = test_seed(static_cast<std::uint8_t>(t & 0xff));
    ks[1] = static_cast<std::uint8_t>(t >> 8);
    KeyPair kp = keygen(p, ks);
    RingElem x = random_payload(2, rng);
    Ciphertext ct = encrypt_payload(kp.pk, x, 2, p, derive_seed(ks, 0x77, t));
    RingElem y = decrypt_raw(kp.sk, ct);
    for (int i = 0; i < kN; ++i) {
      int noise = std::abs(center_mod_q(y.c[i] - scale * x.c[i]));
      worst = std::max(worst, noise);
    }
  }
  CHECK_LT(worst, 832); // round(q/4)
}

TEST_CASE("zero payload leaves v as compressed t^T r + e2") {
  const auto& p = kyber512();
  KeyPair kp = keygen(p, test_seed(3));
  Seed es = test_seed(4);
  Ciphertext a = encrypt_payload(kp.pk, RingElem{}, 2, p, es);
  Ciphertext b = encrypt_scaled(kp.pk, RingElem{}, p, es);
  CHECK_EQ(a.v, b.v);
  CHECK_EQ(a.u.elems, b.u.elems);
}

TEST_CASE("zero-noise synthetic ciphertext decrypts to the exact scaled payload") {
  // s = 0 and v chosen so decompression is exact: at d_v = 4, value 8
  // decompresses to precisely 1665 = round(q/2).
  const auto& p = kyber768();
  std::mt19937 rng(17);
  RingElem x = random_payload(2, rng);
  Ciphertext ct;
  ct.u = RingVec(p.k);
  ct.d_u = p.d_u;
  ct.d_v = p.d_v;
  for (int i = 0; i < kN; ++i) ct.v.c[i] = static_cast<std::int16_t>(8 * x.c[i]);
  SecretKey zero{RingVec(p.k)};
  RingElem y = decrypt_raw(zero, ct);
  for (int i = 0; i < kN; ++i) CHECK_EQ(y.c[i], 1665 * x.c[i]);
}

TEST_CASE("payload rejects out-of-range coefficients and bad p") {
  const auto& p = kyber512();
  KeyPair kp = keygen(p, test_seed(8));
  RingElem x;
  x.c[0] = 2;
  CHECK_THROWS_AS(encrypt_payload(kp.pk, x, 2, p, test_seed(0)), std::invalid_argument);
  CHECK_THROWS_AS(encrypt_payload(kp.pk, RingElem{}, 3, p, test_seed(0)), std::invalid_argument);
}

TEST_CASE("decode_bits threshold boundaries") {
  RingElem y;
  CHECK_EQ(decode_bits(y), std::array<std::uint8_t, 32>{});

  for (auto& c : y.c) c = 1665;
  std::array<std::uint8_t, 32> ones;
  ones.fill(0xff);
  CHECK_EQ(decode_bits(y), ones);

  for (auto& c : y.c) c = 832;
  CHECK_EQ(decode_bits(y), std::array<std::uint8_t, 32>{});
  for (auto& c : y.c) c = 833;
  CHECK_EQ(decode_bits(y), ones);
}

TEST_CASE("noise identity: v - s^T u - w recomposed exactly from the raw terms") {
  for (const ParamSet* pp : {&kyber512(), &kyber768(), &kyber1024()}) {
    const ParamSet& p = *pp;
    std::mt19937 rng(23);
    Seed ks = test_seed(21), es = test_seed(22);
    KeyPair kp = keygen(p, ks);
    RingElem x = random_payload(2, rng);
    Ciphertext ct = encrypt_payload(kp.pk, x, 2, p, es);

    RingElem w;
    for (int i = 0; i < kN; ++i)
      w.c[i] = static_cast<std::int16_t>(payload_scale(2) * x.c[i] % kQ);
    RingElem lhs = poly_sub(decrypt_raw(kp.sk, ct), w);

    // regenerate every term of e^T r + e2 + c_v - s^T (e1 + c_u)
    auto a = expand_matrix(kp.pk.rho, p.k);
    auto kr = expand_key_randomness(p, keygen_sigma(ks));
    auto er = expand_enc_randomness(p, es);

    RingVec u_raw(p.k);
    for (int j = 0; j < p.k; ++j) {
      RingElem acc;
      for (int i = 0; i < p.k; ++i) acc = poly_add(acc, poly_mul(a[i][j], er.r[i]));
      u_raw[j] = poly_add(acc, er.e1[j]);
    }
    RingElem v_raw = poly_add(poly_add(inner_product(kp.pk.t, er.r), er.e2), w);

    RingVec c_u(p.k);
    for (int j = 0; j < p.k; ++j)
      c_u[j] = poly_sub(decompress_poly(compress_poly(u_raw[j], p.d_u), p.d_u), u_raw[j]);
    RingElem c_v = poly_sub(decompress_poly(compress_poly(v_raw, p.d_v), p.d_v), v_raw);

    RingElem rhs = poly_add(poly_add(inner_product(kr.e, er.r), er.e2), c_v);
    rhs = poly_sub(rhs, inner_product(kr.s, vec_add(er.e1, c_u)));

    CHECK_EQ(lhs, rhs);
  }
}

TEST_CASE("ciphertext bit sizes reproduce the CER column") {
  CHECK_EQ(kyber512().ciphertext_bits(), 24 * 256);
  CHECK_EQ(kyber768().ciphertext_bits(), 34 * 256);
  CHECK_EQ(kyber1024().ciphertext_bits(), 49 * 256);
  CHECK_EQ(kyber1024().with_du_hat(8).ciphertext_bits(), 9472);
  CHECK_THROWS_AS(kyber512().with_du_hat(7), std::invalid_argument);
}

TEST_CASE("bit packing round-trips at every depth") {
  std::mt19937 rng(31);
  for (int d = 1; d <= 12; ++d) {
    std::uniform_int_distribution<int> dist(0, (1 << d) - 1);
    std::vector<std::int16_t> vals(300);
    for (auto& v : vals) v = static_cast<std::int16_t>(dist(rng));
    auto bytes = pack_coeffs(vals, d);
    CHECK_EQ(bytes.size(), (vals.size() * d + 7) / 8);
    auto back = unpack_coeffs(bytes, vals.size(), d);
    CHECK_EQ(back, vals);
  }
}

TEST_CASE("pinned serialization vectors") {
  // frozen regression vectors for the documented packing; any byte change
  // here is a format break
  Seed ks, es;
  ks.fill(0x11);
  es.fill(0x22);
  const ParamSet& p = kyber512();
  KeyPair kp = keygen(p, ks);
  RingElem x{};
  for (int i = 0; i < kN; ++i) x.c[i] = (i * 7 + 3) % 2;
  Ciphertext ct = encrypt_payload(kp.pk, x, 2, p, es);

  auto prefix = [](const std::vector<std::uint8_t>& v) {
    static const char* d = "0123456789abcdef";
    std::string s;
    for (int i = 0; i < 16; ++i) {
      s.push_back(d[v[i] >> 4]);
      s.push_back(d[v[i] & 0xf]);
    }
    return s;
  };

  auto pkb = serialize_public_key(kp.pk);
  CHECK_EQ(pkb.size(), 800);
  CHECK_EQ(prefix(pkb), "2c18ac77b250df3582f8f12bff7a5e38");
  auto skb = serialize_secret_key(kp.sk);
  CHECK_EQ(skb.size(), 768);
  CHECK_EQ(prefix(skb), "000dd0001000011000000000ff0cd0ff");
  auto ctb = serialize_ciphertext(ct);
  CHECK_EQ(ctb.size(), 768);
  CHECK_EQ(prefix(ctb), "913c074db990355ad4c93120a72a8602");
}

TEST_CASE("key and ciphertext serialization round-trips") {
  for (const ParamSet* pp : {&kyber512(), &kyber1024()}) {
    const ParamSet& p = *pp;
    KeyPair kp = keygen(p, test_seed(33));
    std::mt19937 rng(5);
    Ciphertext ct = encrypt_payload(kp.pk, random_payload(2, rng), 2, p, test_seed(34));

    auto pkb = serialize_public_key(kp.pk);
    CHECK_EQ(pkb.size(), static_cast<std::size_t>(p.k) * kN * 12 / 8 + 32);
    PublicKey pk2 = deserialize_public_key(pkb, p);
    CHECK_EQ(pk2.t, kp.pk.t);
    CHECK_EQ(pk2.rho, kp.pk.rho);

    auto skb = serialize_secret_key(kp.sk);
    CHECK_EQ(deserialize_secret_key(skb, p).s, kp.sk.s);

    auto ctb = serialize_ciphertext(ct);
    CHECK_EQ(ctb.size(), static_cast<std::size_t>(ct.bit_size() + 7) / 8);
    Ciphertext ct2 = deserialize_ciphertext(ctb, p);
    CHECK_EQ(ct2.u.elems, ct.u.elems);
    CHECK_EQ(ct2.v, ct.v);

    ctb.pop_back();
    CHECK_THROWS_AS(deserialize_ciphertext(ctb, p), std::invalid_argument);
  }
}
