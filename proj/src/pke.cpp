#include "kyberlc/pke.hpp"

#include <stdexcept>

namespace kyberlc {

namespace {

// Domain-separation labels, one byte per call site.
constexpr std::uint8_t kLabelRho = 0x01;
constexpr std::uint8_t kLabelSigma = 0x02;
constexpr std::uint8_t kLabelMatrix = 0x10;
constexpr std::uint8_t kLabelSecret = 0x20;
constexpr std::uint8_t kLabelKeyNoise = 0x21;
constexpr std::uint8_t kLabelEncR = 0x30;
constexpr std::uint8_t kLabelEncE1 = 0x31;
constexpr std::uint8_t kLabelEncE2 = 0x32;

void validate(const ParamSet& p) {
  // d_v below the standard depth (down to 2) is admitted for the stress
  // harness; the standard sets use 4, 4 and 5
  bool known = (p.k == 2 && p.eta1 == 3 && p.eta2 == 2 && p.d_u == 10 &&
                p.d_v >= 2 && p.d_v <= 4) ||
               (p.k == 3 && p.eta1 == 2 && p.eta2 == 2 && p.d_u == 10 &&
                p.d_v >= 2 && p.d_v <= 4) ||
               (p.k == 4 && p.eta1 == 2 && p.eta2 == 2 && p.d_u == 11 &&
                p.d_v >= 2 && p.d_v <= 5);
  if (!known)
    throw std::invalid_argument("unknown Kyber parameter set");
  if (p.d_u_hat != p.d_u && p.d_u_hat != 9 && p.d_u_hat != 8)
    throw std::invalid_argument("d_u_hat must be d_u, 9 or 8");
}

} // namespace

ParamSet ParamSet::with_du_hat(int du_hat) const {
  ParamSet p = *this;
  p.d_u_hat = du_hat;
  validate(p);
  return p;
}

const ParamSet& kyber512() {
  static const ParamSet p{"KYBER512", 2, 3, 2, 10, 4, 10};
  return p;
}

const ParamSet& kyber768() {
  static const ParamSet p{"KYBER768", 3, 2, 2, 10, 4, 10};
  return p;
}

const ParamSet& kyber1024() {
  static const ParamSet p{"KYBER1024", 4, 2, 2, 11, 5, 11};
  return p;
}

const ParamSet& param_set(int bits) {
  switch (bits) {
    case 512: return kyber512();
    case 768: return kyber768();
    case 1024: return kyber1024();
  }
  throw std::invalid_argument("param_set: expected 512, 768 or 1024");
}

Seed keygen_rho(const Seed& seed) { return derive_seed(seed, kLabelRho); }
Seed keygen_sigma(const Seed& seed) { return derive_seed(seed, kLabelSigma); }

std::vector<RingVec> expand_matrix(const Seed& rho, int k) {
  std::vector<RingVec> a(k, RingVec(k));
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      XofStream xs(rho, kLabelMatrix, static_cast<std::uint64_t>(i) * k + j);
      a[i][j] = uniform_sample(xs);
    }
  return a;
}

KeyRandomness expand_key_randomness(const ParamSet& params, const Seed& sigma) {
  KeyRandomness kr{RingVec(params.k), RingVec(params.k)};
  for (int i = 0; i < params.k; ++i) {
    XofStream xs(sigma, kLabelSecret, i);
    kr.s[i] = cbd_sample(params.eta1, xs);
  }
  for (int i = 0; i < params.k; ++i) {
    XofStream xs(sigma, kLabelKeyNoise, i);
    kr.e[i] = cbd_sample(params.eta1, xs);
  }
  return kr;
}

KeyPair keygen(const ParamSet& params, const Seed& seed) {
  validate(params);
  Seed rho = keygen_rho(seed);
  Seed sigma = keygen_sigma(seed);
  auto a = expand_matrix(rho, params.k);
  auto [s, e] = expand_key_randomness(params, sigma);

  RingVec t(params.k);
  for (int i = 0; i < params.k; ++i) t[i] = poly_add(inner_product(a[i], s), e[i]);

  return {PublicKey{t, rho}, SecretKey{s}};
}

EncRandomness expand_enc_randomness(const ParamSet& params, const Seed& seed) {
  // Expansion order is fixed: r blocks, then e1 blocks, then e2.
  EncRandomness er{RingVec(params.k), RingVec(params.k), RingElem{}};
  for (int i = 0; i < params.k; ++i) {
    XofStream xs(seed, kLabelEncR, i);
    er.r[i] = cbd_sample(params.eta1, xs);
  }
  for (int i = 0; i < params.k; ++i) {
    XofStream xs(seed, kLabelEncE1, i);
    er.e1[i] = cbd_sample(params.eta2, xs);
  }
  XofStream xs(seed, kLabelEncE2);
  er.e2 = cbd_sample(params.eta2, xs);
  return er;
}

Ciphertext encrypt_scaled(const PublicKey& pk, const RingElem& w,
                          const ParamSet& params, const Seed& seed) {
  validate(params);
  if (pk.t.size() != static_cast<std::size_t>(params.k))
    throw std::invalid_argument("encrypt: public key rank mismatch");
  auto a = expand_matrix(pk.rho, params.k);
  auto er = expand_enc_randomness(params, seed);

  RingVec u_raw(params.k);
  for (int j = 0; j < params.k; ++j) {
    RingElem acc;
    for (int i = 0; i < params.k; ++i) acc = poly_add(acc, poly_mul(a[i][j], er.r[i]));
    u_raw[j] = poly_add(acc, er.e1[j]);
  }
  RingElem v_raw = poly_add(poly_add(inner_product(pk.t, er.r), er.e2), w);

  Ciphertext ct;
  ct.u = compress_vec(u_raw, params.d_u_hat);
  ct.v = compress_poly(v_raw, params.d_v);
  ct.d_u = params.d_u_hat;
  ct.d_v = params.d_v;
  return ct;
}

Ciphertext encrypt_payload(const PublicKey& pk, const RingElem& x, int p,
                           const ParamSet& params, const Seed& seed) {
  if (p != 2 && p != 4 && p != 8)
    throw std::invalid_argument("encrypt_payload: p must be 2, 4 or 8");
  RingElem w;
  const int scale = payload_scale(p);
  for (int i = 0; i < kN; ++i) {
    if (x.c[i] < 0 || x.c[i] >= p)
      throw std::invalid_argument("encrypt_payload: codeword coefficient out of [0, p)");
    w.c[i] = static_cast<std::int16_t>(scale * x.c[i] % kQ);
  }
  return encrypt_scaled(pk, w, params, seed);
}

RingElem decrypt_raw(const SecretKey& sk, const Ciphertext& ct) {
  RingVec u = decompress_vec(ct.u, ct.d_u);
  RingElem v = decompress_poly(ct.v, ct.d_v);
  return poly_sub(v, inner_product(sk.s, u));
}

std::array<std::uint8_t, 32> decode_bits(const RingElem& y) {
  std::array<std::uint8_t, 32> m{};
  for (int i = 0; i < kN; ++i)
    m[i / 8] |= static_cast<std::uint8_t>(compress(y.c[i], 1) << (i % 8));
  return m;
}

std::vector<std::uint8_t> pack_coeffs(std::span<const std::int16_t> vals, int d) {
  std::vector<std::uint8_t> out((vals.size() * d + 7) / 8, 0);
  std::size_t bitpos = 0;
  for (std::int16_t v : vals) {
    for (int b = 0; b < d; ++b, ++bitpos)
      out[bitpos / 8] |= static_cast<std::uint8_t>((v >> b & 1) << (bitpos % 8));
  }
  return out;
}

std::vector<std::int16_t> unpack_coeffs(std::span<const std::uint8_t> bytes,
                                        std::size_t count, int d) {
  if (bytes.size() * 8 < count * static_cast<std::size_t>(d))
    throw std::invalid_argument("unpack_coeffs: input too short");
  std::vector<std::int16_t> out(count, 0);
  std::size_t bitpos = 0;
  for (std::size_t i = 0; i < count; ++i)
    for (int b = 0; b < d; ++b, ++bitpos)
      out[i] |= static_cast<std::int16_t>((bytes[bitpos / 8] >> (bitpos % 8) & 1) << b);
  return out;
}

namespace {

std::vector<std::int16_t> flatten(const RingVec& v) {
  std::vector<std::int16_t> out;
  out.reserve(v.size() * kN);
  for (const auto& e : v.elems) out.insert(out.end(), e.c.begin(), e.c.end());
  return out;
}

RingVec unflatten(std::span<const std::int16_t> vals, std::size_t k) {
  RingVec v(k);
  for (std::size_t i = 0; i < k; ++i)
    for (int j = 0; j < kN; ++j) v[i].c[j] = vals[i * kN + j];
  return v;
}

} // namespace

std::vector<std::uint8_t> serialize_public_key(const PublicKey& pk) {
  auto out = pack_coeffs(flatten(pk.t), 12);
  out.insert(out.end(), pk.rho.begin(), pk.rho.end());
  return out;
}

PublicKey deserialize_public_key(std::span<const std::uint8_t> bytes, const ParamSet& params) {
  const std::size_t tbytes = static_cast<std::size_t>(params.k) * kN * 12 / 8;
  if (bytes.size() != tbytes + 32)
    throw std::invalid_argument("public key: wrong size");
  PublicKey pk;
  pk.t = unflatten(unpack_coeffs(bytes.first(tbytes), params.k * kN, 12), params.k);
  std::copy(bytes.begin() + tbytes, bytes.end(), pk.rho.begin());
  return pk;
}

std::vector<std::uint8_t> serialize_secret_key(const SecretKey& sk) {
  return pack_coeffs(flatten(sk.s), 12);
}

SecretKey deserialize_secret_key(std::span<const std::uint8_t> bytes, const ParamSet& params) {
  const std::size_t sbytes = static_cast<std::size_t>(params.k) * kN * 12 / 8;
  if (bytes.size() != sbytes)
    throw std::invalid_argument("secret key: wrong size");
  return {unflatten(unpack_coeffs(bytes, params.k * kN, 12), params.k)};
}

std::vector<std::uint8_t> serialize_ciphertext(const Ciphertext& ct) {
  auto out = pack_coeffs(flatten(ct.u), ct.d_u);
  auto vb = pack_coeffs(ct.v.c, ct.d_v);
  out.insert(out.end(), vb.begin(), vb.end());
  return out;
}

Ciphertext deserialize_ciphertext(std::span<const std::uint8_t> bytes, const ParamSet& params) {
  const std::size_t ubytes = static_cast<std::size_t>(params.k) * kN * params.d_u_hat / 8;
  const std::size_t vbytes = static_cast<std::size_t>(kN) * params.d_v / 8;
  if (bytes.size() != ubytes + vbytes)
    throw std::invalid_argument("ciphertext: wrong size");
  Ciphertext ct;
  ct.u = unflatten(unpack_coeffs(bytes.first(ubytes), params.k * kN, params.d_u_hat), params.k);
  std::vector<std::int16_t> v = unpack_coeffs(bytes.subspan(ubytes), kN, params.d_v);
  for (int i = 0; i < kN; ++i) ct.v.c[i] = v[i];
  ct.d_u = params.d_u_hat;
  ct.d_v = params.d_v;
  return ct;
}

} // namespace kyberlc
