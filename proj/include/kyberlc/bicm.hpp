#pragma once

// Bit-interleaved coded modulation over the lattice payload: BCH outer code,
// seeded bit interleaver, and bit mapper/demapper between code bits and
// hypercube-shaped message blocks.

#include <span>

#include "kyberlc/bch.hpp"
#include "kyberlc/lattice.hpp"
#include "kyberlc/pke.hpp"

namespace kyberlc {

struct Permutation {
  std::vector<int> forward; // output i takes input forward[i]
  std::vector<int> inverse;

  int size() const { return static_cast<int>(forward.size()); }
};

// Fisher-Yates permutation of n positions driven by the public seed.
Permutation make_interleaver(const Seed& seed, int n);
Permutation identity_permutation(int n);

BitVec interleave(const BitVec& bits, const Permutation& p);
BitVec deinterleave(const BitVec& bits, const Permutation& p);

// Coordinate j consumes log2(p / pi_j) bits, big-endian within the
// coordinate, in coordinate order; zero-radix coordinates consume none.
MessageBlock bit2int(const BitVec& bits, const LatticeCode& code);
BitVec int2bit(const MessageBlock& m, const LatticeCode& code);

struct BicmConfig {
  ParamSet params;      // d_u_hat applied for the u-compression
  BlockSchedule schedule; // 16 x BW16, p = 4
  Seed interleaver_seed{};
  bool identity_interleaver = false; // test mode: degenerate to Algorithm-4 path

  const BchCode& bch() const { return BchCode::instance(); }
};

// schedule bits must equal the BCH length (320) and the payload 256.
BicmConfig make_bicm_config(const ParamSet& base, int d_u_hat,
                            const Seed& interleaver_seed);

Ciphertext bicm_encode(const BitVec& msg, const PublicKey& pk,
                       const BicmConfig& cfg, const Seed& seed);

// Encoded payload alongside the ciphertext, for noise measurement.
struct BicmEncryption {
  Ciphertext ct;
  RingElem x; // lattice codeword, coefficients in [0, p)
};
BicmEncryption bicm_encode_with_payload(const BitVec& msg, const PublicKey& pk,
                                        const BicmConfig& cfg, const Seed& seed);

struct BicmDecodeResult {
  BitVec msg;          // 256 bits
  int corrected = 0;   // BCH corrections spent
  bool failed = false; // propagated BCH decode failure
};

// fault_positions: raw code-bit indices flipped after lattice decoding,
// exercising the BCH correction path.
BicmDecodeResult bicm_decode(const Ciphertext& ct, const SecretKey& sk,
                             const BicmConfig& cfg,
                             std::span<const int> fault_positions = {});

} // namespace kyberlc
