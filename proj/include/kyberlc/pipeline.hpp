#pragma once

// Uniform payload-codec dispatch over the PKE: the original bit-per-
// coefficient encoder, the plain lattice encoders, and BICM, all behind one
// encrypt/decrypt pair used by the simulation harness and the CLI.

#include <optional>

#include "kyberlc/bicm.hpp"

namespace kyberlc {

enum class EncoderKind { integer, bw16, leech, bicm };

const char* encoder_name(EncoderKind k);
EncoderKind encoder_from_name(const std::string& name);

struct EncoderConfig {
  EncoderKind kind = EncoderKind::integer;
  ParamSet params;
  BlockSchedule schedule;
  std::optional<BicmConfig> bicm;

  // information bits carried per ciphertext: 256 / 320 / 380 / 256
  int payload_bits() const;
};

// d_u_hat is only honored for the BICM encoder; the plain encoders keep the
// ciphertext shape of the base parameter set.
EncoderConfig make_encoder_config(EncoderKind kind, const ParamSet& base,
                                  int d_u_hat, const Seed& interleaver_seed);

// Payload codeword and its per-coefficient scaled form for a bit message.
struct ScheduledPayload {
  RingElem x; // codeword coefficients in [0, p_block)
  RingElem w; // round(q/p_block) * x, canonical mod q
};
ScheduledPayload schedule_payload(const BlockSchedule& s, const BitVec& bits);

// Lattice-decode a raw y back to schedule bits (no outer code).
BitVec schedule_decode(const BlockSchedule& s, const RingElem& y);

struct EncryptResult {
  Ciphertext ct;
  RingElem x;
  RingElem w;
};
EncryptResult pipeline_encrypt(const PublicKey& pk, const BitVec& bits,
                               const EncoderConfig& cfg, const Seed& seed);

struct DecryptResult {
  BitVec bits;
  int corrected = 0;
  bool failed = false;
};
DecryptResult pipeline_decrypt(const Ciphertext& ct, const SecretKey& sk,
                               const EncoderConfig& cfg);

} // namespace kyberlc
