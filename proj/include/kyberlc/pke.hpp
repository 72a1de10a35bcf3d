#pragma once

// Kyber.CPA public-key encryption with a generalized payload slot: the
// v-component carries round(q/p)*x for a codeword x with coefficients in
// [0, p), so any payload encoder (threshold bits, lattice codes, BICM) can
// ride on the same keys and ciphertext shape.

#include <cstdint>
#include <string>

#include "kyberlc/ring.hpp"

namespace kyberlc {

struct ParamSet {
  std::string name;
  int k;
  int eta1;
  int eta2;
  int d_u;
  int d_v;
  // u-compression depth actually applied; equals d_u unless overridden for
  // BICM operation (values 9 or 8).
  int d_u_hat;

  int ciphertext_bits() const { return k * kN * d_u_hat + kN * d_v; }
  int plaintext_bits() const { return kN; }

  ParamSet with_du_hat(int du_hat) const;
};

const ParamSet& kyber512();
const ParamSet& kyber768();
const ParamSet& kyber1024();
const ParamSet& param_set(int bits); // 512 / 768 / 1024

struct PublicKey {
  RingVec t;
  Seed rho{};
};

struct SecretKey {
  RingVec s;
};

struct KeyPair {
  PublicKey pk;
  SecretKey sk;
};

struct Ciphertext {
  RingVec u;   // compressed to d_u_hat bits per coefficient
  RingElem v;  // compressed to d_v bits per coefficient
  int d_u = 0; // depths used, recorded for serialization and decryption
  int d_v = 0;

  int bit_size() const {
    return static_cast<int>(u.size()) * kN * d_u + kN * d_v;
  }
};

// Deterministic key generation: A from Sam(rho), (s, e) from beta_eta1.
KeyPair keygen(const ParamSet& params, const Seed& seed);

// u := Compress(A^T r + e1, d_u_hat); v := Compress(t^T r + e2 + w, d_v)
// where w is the already-scaled payload polynomial.
Ciphertext encrypt_scaled(const PublicKey& pk, const RingElem& w,
                          const ParamSet& params, const Seed& seed);

// Payload form: w = round(q/p) * x with x in [0, p)^n, p in {2, 4, 8}.
Ciphertext encrypt_payload(const PublicKey& pk, const RingElem& x, int p,
                           const ParamSet& params, const Seed& seed);

// y = Decompress(v, d_v) - s^T Decompress(u, d_u) mod q.
RingElem decrypt_raw(const SecretKey& sk, const Ciphertext& ct);

// Per-coefficient threshold decode, exactly Compress(y, 1).
std::array<std::uint8_t, 32> decode_bits(const RingElem& y);

// Expanded encryption randomness, re-derivable from the seed; used by the
// noise-identity checks and the simulation harness.
struct EncRandomness {
  RingVec r;
  RingVec e1;
  RingElem e2;
};
EncRandomness expand_enc_randomness(const ParamSet& params, const Seed& seed);

struct KeyRandomness {
  RingVec s;
  RingVec e;
};
KeyRandomness expand_key_randomness(const ParamSet& params, const Seed& sigma);

// A[i][j] row-major from Sam(rho); shared by keygen and encrypt.
std::vector<RingVec> expand_matrix(const Seed& rho, int k);

// rho/sigma derivation from the keygen seed.
Seed keygen_rho(const Seed& seed);
Seed keygen_sigma(const Seed& seed);

// Little-endian packed bit fields, d bits per coefficient in coefficient
// order.  Not interoperable with external Kyber implementations.
std::vector<std::uint8_t> pack_coeffs(std::span<const std::int16_t> vals, int d);
std::vector<std::int16_t> unpack_coeffs(std::span<const std::uint8_t> bytes,
                                        std::size_t count, int d);

std::vector<std::uint8_t> serialize_public_key(const PublicKey& pk);
PublicKey deserialize_public_key(std::span<const std::uint8_t> bytes, const ParamSet& params);
std::vector<std::uint8_t> serialize_secret_key(const SecretKey& sk);
SecretKey deserialize_secret_key(std::span<const std::uint8_t> bytes, const ParamSet& params);
std::vector<std::uint8_t> serialize_ciphertext(const Ciphertext& ct);
Ciphertext deserialize_ciphertext(std::span<const std::uint8_t> bytes, const ParamSet& params);

} // namespace kyberlc
