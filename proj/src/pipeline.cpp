#include "kyberlc/pipeline.hpp"

#include <stdexcept>

namespace kyberlc {

const char* encoder_name(EncoderKind k) {
  switch (k) {
    case EncoderKind::integer: return "int";
    case EncoderKind::bw16: return "bw16";
    case EncoderKind::leech: return "leech";
    case EncoderKind::bicm: return "bicm";
  }
  return "?";
}

EncoderKind encoder_from_name(const std::string& name) {
  if (name == "int") return EncoderKind::integer;
  if (name == "bw16") return EncoderKind::bw16;
  if (name == "leech") return EncoderKind::leech;
  if (name == "bicm") return EncoderKind::bicm;
  throw std::invalid_argument("unknown encoder: " + name);
}

int EncoderConfig::payload_bits() const {
  return kind == EncoderKind::bicm ? 256 : schedule.bits();
}

EncoderConfig make_encoder_config(EncoderKind kind, const ParamSet& base,
                                  int d_u_hat, const Seed& interleaver_seed) {
  EncoderConfig cfg;
  cfg.kind = kind;
  cfg.params = base;
  switch (kind) {
    case EncoderKind::integer: cfg.schedule = integer_schedule(); break;
    case EncoderKind::bw16: cfg.schedule = bw16_schedule(); break;
    case EncoderKind::leech: cfg.schedule = leech_schedule(); break;
    case EncoderKind::bicm:
      cfg.schedule = bw16_schedule();
      cfg.bicm = make_bicm_config(base, d_u_hat, interleaver_seed);
      cfg.params = cfg.bicm->params;
      break;
  }
  if (kind != EncoderKind::bicm && d_u_hat != base.d_u)
    throw std::invalid_argument("d_u_hat override is a BICM-only mode");
  return cfg;
}

ScheduledPayload schedule_payload(const BlockSchedule& s, const BitVec& bits) {
  if (static_cast<int>(bits.size()) != s.bits())
    throw std::invalid_argument("schedule_payload: payload size mismatch");
  ScheduledPayload out;
  int coord = 0, pos = 0;
  for (const auto& part : s.parts) {
    const LatticeCode& code = *part.code;
    const int scale = payload_scale(code.p);
    for (int blk = 0; blk < part.count; ++blk) {
      BitVec slice(bits.begin() + pos, bits.begin() + pos + code.bits_per_block);
      pos += code.bits_per_block;
      IntVec xb = hs_encode(bit2int(slice, code), code);
      for (int i = 0; i < code.ell; ++i, ++coord) {
        out.x.c[coord] = static_cast<std::int16_t>(xb[i]);
        out.w.c[coord] = static_cast<std::int16_t>(scale * xb[i] % kQ);
      }
    }
  }
  return out;
}

BitVec schedule_decode(const BlockSchedule& s, const RingElem& y) {
  BitVec bits;
  bits.reserve(s.bits());
  int coord = 0;
  for (const auto& part : s.parts) {
    const LatticeCode& code = *part.code;
    const double scale = static_cast<double>(payload_scale(code.p));
    for (int blk = 0; blk < part.count; ++blk) {
      RealVec yb(code.ell);
      for (int i = 0; i < code.ell; ++i) yb[i] = y.c[coord++] / scale;
      BitVec slice = int2bit(hs_cvp_decode(yb, code), code);
      bits.insert(bits.end(), slice.begin(), slice.end());
    }
  }
  return bits;
}

EncryptResult pipeline_encrypt(const PublicKey& pk, const BitVec& bits,
                               const EncoderConfig& cfg, const Seed& seed) {
  if (static_cast<int>(bits.size()) != cfg.payload_bits())
    throw std::invalid_argument("pipeline_encrypt: payload size mismatch");
  if (cfg.kind == EncoderKind::bicm) {
    BicmEncryption enc = bicm_encode_with_payload(bits, pk, *cfg.bicm, seed);
    EncryptResult res;
    res.ct = std::move(enc.ct);
    res.x = enc.x;
    const int scale = payload_scale(cfg.schedule.parts[0].code->p);
    for (int i = 0; i < kN; ++i)
      res.w.c[i] = static_cast<std::int16_t>(scale * enc.x.c[i] % kQ);
    return res;
  }
  ScheduledPayload sp = schedule_payload(cfg.schedule, bits);
  return {encrypt_scaled(pk, sp.w, cfg.params, seed), sp.x, sp.w};
}

DecryptResult pipeline_decrypt(const Ciphertext& ct, const SecretKey& sk,
                               const EncoderConfig& cfg) {
  if (cfg.kind == EncoderKind::bicm) {
    BicmDecodeResult r = bicm_decode(ct, sk, *cfg.bicm);
    return {std::move(r.msg), r.corrected, r.failed};
  }
  return {schedule_decode(cfg.schedule, decrypt_raw(sk, ct)), 0, false};
}

} // namespace kyberlc
