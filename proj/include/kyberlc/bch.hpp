#pragma once

// Shortened narrow-sense binary BCH(320, 257) with t = 7 over GF(2^9),
// systematic encoding and a fixed-schedule decoder: 2t syndrome
// accumulations, 2t masked Berlekamp-Massey iterations and a full 511-point
// Chien sweep run for every input.

#include <cstdint>
#include <vector>

namespace kyberlc {

using BitVec = std::vector<std::uint8_t>; // one bit per entry

struct BchDecodeResult {
  BitVec msg;          // 257 bits (256 payload + zero pad)
  int corrected = 0;   // number of flipped positions
  bool failed = false; // inconsistent locator, out-of-range root or bad pad
};

class BchCode {
public:
  static constexpr int kFieldBits = 9;
  static constexpr int kNFull = 511;
  static constexpr int kKFull = 448;
  static constexpr int kShorten = 191; // virtual zeros, highest-order positions
  static constexpr int kN = 320;
  static constexpr int kK = 257;
  static constexpr int kT = 7;

  static const BchCode& instance();

  // msg: 257 bits, bit 256 is the pad and must be 0.
  BitVec encode(const BitVec& msg) const;
  BchDecodeResult decode(const BitVec& word) const;

  // g(x) as 64 bits, degree 63.
  const BitVec& generator() const { return gen_; }

private:
  BchCode();
  BitVec gen_;
  std::uint64_t gen_low_ = 0; // g(x) minus its leading term
};

// Count of field multiplications executed by encode/decode, for the
// constant-time contract.
void reset_bch_op_count();
std::uint64_t bch_op_count();

} // namespace kyberlc
