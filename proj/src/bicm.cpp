#include "kyberlc/bicm.hpp"

#include <numeric>
#include <stdexcept>

namespace kyberlc {

namespace {

constexpr std::uint8_t kLabelInterleaver = 0x49;

// unbiased draw from [0, bound) by 16-bit rejection
int draw_below(ByteStream& bs, int bound) {
  const int limit = 65536 - 65536 % bound;
  for (;;) {
    int v = bs.u8() | bs.u8() << 8;
    if (v < limit) return v % bound;
  }
}

} // namespace

Permutation identity_permutation(int n) {
  Permutation p;
  p.forward.resize(n);
  p.inverse.resize(n);
  std::iota(p.forward.begin(), p.forward.end(), 0);
  std::iota(p.inverse.begin(), p.inverse.end(), 0);
  return p;
}

Permutation make_interleaver(const Seed& seed, int n) {
  XofStream xs(seed, kLabelInterleaver);
  Permutation p = identity_permutation(n);
  for (int i = n - 1; i >= 1; --i)
    std::swap(p.forward[i], p.forward[draw_below(xs, i + 1)]);
  for (int i = 0; i < n; ++i) p.inverse[p.forward[i]] = i;
  return p;
}

BitVec interleave(const BitVec& bits, const Permutation& p) {
  if (static_cast<int>(bits.size()) != p.size())
    throw std::invalid_argument("interleave: length mismatch");
  BitVec out(bits.size());
  for (int i = 0; i < p.size(); ++i) out[i] = bits[p.forward[i]];
  return out;
}

BitVec deinterleave(const BitVec& bits, const Permutation& p) {
  if (static_cast<int>(bits.size()) != p.size())
    throw std::invalid_argument("deinterleave: length mismatch");
  BitVec out(bits.size());
  for (int i = 0; i < p.size(); ++i) out[i] = bits[p.inverse[i]];
  return out;
}

MessageBlock bit2int(const BitVec& bits, const LatticeCode& code) {
  if (static_cast<int>(bits.size()) != code.bits_per_block)
    throw std::invalid_argument("bit2int: expected b(l,p) bits");
  MessageBlock m(code.ell, 0);
  int pos = 0;
  for (int j = 0; j < code.ell; ++j) {
    long long v = 0;
    for (int b = 0; b < code.coord_bits[j]; ++b) v = v << 1 | bits[pos++];
    m[j] = v;
  }
  return m;
}

BitVec int2bit(const MessageBlock& m, const LatticeCode& code) {
  if (static_cast<int>(m.size()) != code.ell)
    throw std::invalid_argument("int2bit: message length mismatch");
  BitVec bits(code.bits_per_block);
  int pos = 0;
  for (int j = 0; j < code.ell; ++j) {
    if (m[j] < 0 || m[j] >= code.radix[j])
      throw std::invalid_argument("int2bit: coordinate out of range");
    for (int b = code.coord_bits[j] - 1; b >= 0; --b)
      bits[pos++] = static_cast<std::uint8_t>(m[j] >> b & 1);
  }
  return bits;
}

BicmConfig make_bicm_config(const ParamSet& base, int d_u_hat,
                            const Seed& interleaver_seed) {
  BicmConfig cfg;
  cfg.params = base.with_du_hat(d_u_hat);
  cfg.schedule = bw16_schedule();
  cfg.interleaver_seed = interleaver_seed;
  if (cfg.schedule.bits() != BchCode::kN)
    throw std::logic_error("BICM schedule bits must match the BCH length");
  if (BchCode::kK != 257)
    throw std::logic_error("BICM payload accounting expects 256+1 bits");
  return cfg;
}

namespace {

Permutation bicm_permutation(const BicmConfig& cfg) {
  return cfg.identity_interleaver ? identity_permutation(BchCode::kN)
                                  : make_interleaver(cfg.interleaver_seed, BchCode::kN);
}

RingElem blocks_to_payload(const BicmConfig& cfg, const BitVec& coded) {
  const LatticeCode& code = *cfg.schedule.parts[0].code;
  RingElem x;
  int coord = 0;
  for (int blk = 0; blk < cfg.schedule.blocks(); ++blk) {
    BitVec slice(coded.begin() + blk * code.bits_per_block,
                 coded.begin() + (blk + 1) * code.bits_per_block);
    IntVec xb = hs_encode(bit2int(slice, code), code);
    for (int i = 0; i < code.ell; ++i)
      x.c[coord++] = static_cast<std::int16_t>(xb[i]);
  }
  return x;
}

} // namespace

BicmEncryption bicm_encode_with_payload(const BitVec& msg, const PublicKey& pk,
                                        const BicmConfig& cfg, const Seed& seed) {
  if (static_cast<int>(msg.size()) != 256)
    throw std::invalid_argument("bicm_encode: message must be 256 bits");
  BitVec padded = msg;
  padded.push_back(0);
  BitVec coded = interleave(cfg.bch().encode(padded), bicm_permutation(cfg));
  RingElem x = blocks_to_payload(cfg, coded);
  const LatticeCode& code = *cfg.schedule.parts[0].code;
  return {encrypt_payload(pk, x, code.p, cfg.params, seed), x};
}

Ciphertext bicm_encode(const BitVec& msg, const PublicKey& pk,
                       const BicmConfig& cfg, const Seed& seed) {
  return bicm_encode_with_payload(msg, pk, cfg, seed).ct;
}

BicmDecodeResult bicm_decode(const Ciphertext& ct, const SecretKey& sk,
                             const BicmConfig& cfg,
                             std::span<const int> fault_positions) {
  const LatticeCode& code = *cfg.schedule.parts[0].code;
  const double scale = static_cast<double>(payload_scale(code.p));

  RingElem y = decrypt_raw(sk, ct);
  BitVec coded;
  coded.reserve(BchCode::kN);
  int coord = 0;
  for (int blk = 0; blk < cfg.schedule.blocks(); ++blk) {
    RealVec yb(code.ell);
    for (int i = 0; i < code.ell; ++i) yb[i] = y.c[coord++] / scale;
    BitVec slice = int2bit(hs_cvp_decode(yb, code), code);
    coded.insert(coded.end(), slice.begin(), slice.end());
  }

  for (int pos : fault_positions) coded.at(pos) ^= 1;

  BitVec dein = deinterleave(coded, bicm_permutation(cfg));
  BchDecodeResult bch = cfg.bch().decode(dein);

  BicmDecodeResult res;
  res.corrected = bch.corrected;
  res.failed = bch.failed;
  res.msg.assign(bch.msg.begin(), bch.msg.begin() + 256);
  return res;
}

} // namespace kyberlc
